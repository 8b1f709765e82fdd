#!/usr/bin/env python3
"""
Contains the BaseModel class, which serves as the base for all stored model
classes. It provides auto-generated ids and creation timestamps, conversion
to JSON-ready dictionaries, and save/delete through the storage engine.
"""
import uuid
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np
from sqlalchemy.orm import declarative_base

import models

# Format for converting datetime objects to string
time_format = "%Y-%m-%dT%H:%M:%S.%f"
Base = declarative_base()


def to_builtin(value: Any) -> Any:
    """
    Converts numpy containers and scalars, enums and datetimes into plain
    Python values that json can serialize.

    Floats stay Python floats so json writes their shortest round-trip repr.

    Args:
        value: Any value found on a model.

    Returns:
        A JSON-serializable equivalent.
    """
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, datetime):
        return value.strftime(time_format)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (list, tuple)):
        return [to_builtin(v) for v in value]
    if isinstance(value, dict):
        return {k: to_builtin(v) for k, v in value.items()}
    return value


class BaseModel():
    """
    BaseModel class that serves as the foundation for all stored models.
    It provides an auto-generated id, a creation timestamp, and methods for
    saving instances, converting to dictionaries, and deleting them from
    storage.
    """

    def __init__(self, *args: Any, **kwargs: Optional[Dict[str, Any]]):
        """
        Initializes the id and creation time, either from keyword arguments
        (when reloading from storage) or with fresh defaults.

        Args:
            *args: Positional arguments (not used in this base class).
            **kwargs: 'id' and 'created_at' are consumed here; any other
                key is set as an attribute.
        """
        kwargs.pop('__class__', None)
        self.id = kwargs.pop('id', None) or str(uuid.uuid4())
        created_at = kwargs.pop('created_at', None)
        if isinstance(created_at, str):
            created_at = datetime.strptime(
                created_at, time_format).replace(tzinfo=timezone.utc)
        self.created_at = created_at or datetime.now(timezone.utc)
        for k, v in kwargs.items():
            setattr(self, k, v)

    def __eq__(self, other: Any) -> bool:
        """ Equality by class and id
        """
        if type(self) != type(other):
            return False
        return self.id == other.id

    def __hash__(self) -> int:
        return hash((self.__class__.__name__, self.id))

    def __str__(self) -> str:
        """
        Returns a string representation of the instance.

        The string format is:
        [ClassName] (ID) {attributes}

        Returns:
            str: String representation of the instance.
        """
        return "[{:s}] ({:s}) {}".format(
            self.__class__.__name__, self.id, self.__dict__)

    def __repr__(self) -> str:
        """
        Returns an unambiguous representation for debugging and logging.

        Returns:
            str: A string representation of the instance.
        """
        return (f"{self.__class__.__name__}(id={self.id}, "
                f"created_at={self.created_at})")

    def save(self) -> None:
        """
        Registers the instance with the storage engine and persists it.
        """
        models.storage.new(self)
        models.storage.save()

    def to_json(self, for_serialization: bool = False) -> dict:
        """
        Convert the object to a JSON dictionary.

        Args:
            for_serialization (bool): When True, the class name is included
                so storage can rebuild the object.

        Returns:
            dict: Public attributes converted to JSON-ready values.
        """
        result = {}
        for key, value in self.__dict__.items():
            if key[0] == '_':
                continue
            result[key] = to_builtin(value)
        if for_serialization:
            result['__class__'] = self.__class__.__name__
        return result

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "BaseModel":
        """
        Rebuilds an instance from the output of to_json.

        Args:
            data (dict): Serialized attributes.

        Returns:
            BaseModel: The rebuilt instance.
        """
        return cls(**data)

    def delete(self) -> None:
        """
        Removes the instance from the storage engine.
        """
        models.storage.delete(self)
