#!/usr/bin/env python3
"""
Contains the StoredObject table: one row per persisted model, holding its
interchange dictionary in a JSON column.
"""
from sqlalchemy import JSON, Column, DateTime, String

from models.base_model import Base


class StoredObject(Base):
    """
    Row of the stored_objects table.

    Attributes:
        id (str): The model id (uuid4).
        class_name (str): Registry name of the model class.
        created_at (datetime): Creation time of the model.
        data (dict): The output of the model's to_json().
    """
    __tablename__ = "stored_objects"

    id = Column(String(60), primary_key=True)
    class_name = Column(String(60), nullable=False, index=True)
    created_at = Column(DateTime, nullable=False)
    data = Column(JSON, nullable=False)

    def __repr__(self) -> str:
        return f"StoredObject({self.class_name}.{self.id})"
