#!/usr/bin/env python3
"""
Contains the class DBStorage, which persists networks, spiking networks
and piecewise polynomials through SQLAlchemy.

Each object is one StoredObject row keyed by its id; the class name picks
the model class that from_json rebuilds it with. Rebuilt objects are kept
until close(), so repeated lookups return the same instance.
"""
import logging
from typing import Any, Dict, Optional, Type

from sqlalchemy import create_engine
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import scoped_session, sessionmaker

from config import Config
from models.base_model import Base, BaseModel
from models.network import Network
from models.piecewise_polynomial import PiecewisePolynomial
from models.spiking_network import SpikingNetwork
from models.stored_object import StoredObject

logger = logging.getLogger(__name__)

classes = {"Network": Network,
           "SpikingNetwork": SpikingNetwork,
           "PiecewisePolynomial": PiecewisePolynomial}


class DBStorage:
    """
    Stores models in a relational database and hands them out keyed
    '<class_name>.<id>'.
    """
    __engine: Optional[Any] = None
    __session: Optional[Any] = None

    def __init__(self, url: Optional[str] = None) -> None:
        """
        Creates the engine. The session is set up by reload().

        If FLASK_ENV is 'test' and no url is given, DATABASE_TEST_URL is
        used and its tables are dropped.

        Args:
            url (str, optional): SQLAlchemy database URL; defaults to
                Config.DATABASE_URL.
        """
        testing = url is None and Config.FLASK_ENV == "test"
        if url is None:
            url = Config.DATABASE_TEST_URL if testing else Config.DATABASE_URL
        self.__engine = create_engine(url)
        self.__objects: Dict[str, BaseModel] = {}
        if testing:
            Base.metadata.drop_all(self.__engine)

    @staticmethod
    def _key(class_name: str, id: str) -> str:
        return f"{class_name}.{id}"

    def _rebuild(self, row: StoredObject) -> Optional[BaseModel]:
        key = self._key(row.class_name, row.id)
        if key in self.__objects:
            return self.__objects[key]
        try:
            obj = classes[row.class_name].from_json(dict(row.data))
        except (KeyError, TypeError, ValueError) as err:
            logger.warning("Skipping stored %s: %s", key, err)
            return None
        self.__objects[key] = obj
        return obj

    def _query(self, cls: Optional[Type[BaseModel]] = None):
        query = self.__session.query(StoredObject)
        if cls is not None:
            query = query.filter_by(class_name=cls.__name__)
        return query

    def all(self, cls: Optional[Type[BaseModel]] = None
            ) -> Dict[str, BaseModel]:
        """
        Queries all stored objects, optionally of one class.

        Rows of unknown classes or with invalid content are skipped with
        a warning.

        Args:
            cls (Type[BaseModel], optional): The class to filter by.

        Returns:
            Dict[str, BaseModel]: Objects keyed '<class_name>.<id>'.
        """
        if cls is not None and cls not in classes.values():
            return {}
        result = {}
        for row in self._query(cls).all():
            obj = self._rebuild(row)
            if obj is not None:
                result[self._key(row.class_name, row.id)] = obj
        return result

    def new(self, obj: BaseModel) -> None:
        """
        Adds an object to the current session; save() commits it.

        Args:
            obj (BaseModel): The object to add.
        """
        name = obj.__class__.__name__
        self.__session.merge(StoredObject(id=obj.id, class_name=name,
                                          created_at=obj.created_at,
                                          data=obj.to_json()))
        self.__objects[self._key(name, obj.id)] = obj

    def save(self) -> None:
        """
        Commits all changes of the current session.

        Raises:
            SQLAlchemyError: After rolling the session back.
        """
        try:
            self.__session.commit()
        except SQLAlchemyError as err:
            self.__session.rollback()
            logger.error("Commit failed: %s", err)
            raise

    def delete(self, obj: Optional[BaseModel] = None) -> None:
        """
        Deletes an object from the current session.

        Args:
            obj (BaseModel, optional): The object to delete.
        """
        if obj is None:
            return
        name = obj.__class__.__name__
        self.__objects.pop(self._key(name, obj.id), None)
        row = self.__session.get(StoredObject, obj.id)
        if row is not None and row.class_name == name:
            self.__session.delete(row)
            self.__session.flush()

    def reload(self) -> None:
        """
        Creates the tables and sets up a scoped session.
        """
        Base.metadata.create_all(self.__engine)
        sess_factory = sessionmaker(bind=self.__engine, expire_on_commit=False)
        self.__session = scoped_session(sess_factory)

    def close(self) -> None:
        """
        Removes the scoped session and drops the rebuilt objects.
        """
        self.__session.remove()
        self.__objects = {}

    def get(self, cls: Type[BaseModel], id: str) -> Optional[BaseModel]:
        """
        Returns the object based on the class and its ID, or None if not
        found.

        Args:
            cls (Type[BaseModel]): The class of the object.
            id (str): The ID of the object to retrieve.

        Returns:
            Optional[BaseModel]: The object if found, otherwise None.
        """
        if cls not in classes.values():
            return None
        row = self.__session.get(StoredObject, id)
        if row is None or row.class_name != cls.__name__:
            return None
        return self._rebuild(row)

    def count(self, cls: Optional[Type[BaseModel]] = None) -> int:
        """
        Counts the stored objects, optionally of one class.

        Args:
            cls (Type[BaseModel], optional): The class to count.

        Returns:
            int: The number of objects.
        """
        if cls is not None and cls not in classes.values():
            return 0
        return self._query(cls).count()
