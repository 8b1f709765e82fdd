#!/usr/bin/env python3
"""
Contains tests for BaseModel class
"""
import unittest
from datetime import datetime, timezone
from enum import Enum
from unittest.mock import patch

import numpy as np

from models.base_model import BaseModel, time_format, to_builtin


class _Color(Enum):
    RED = "red"


class TestBaseModel(unittest.TestCase):
    """
    Unit tests for the BaseModel class.
    """

    def setUp(self):
        """
        Sets up a new BaseModel instance for each test case.
        """
        self.base_model_instance = BaseModel(id="1234",
                                             created_at=datetime.now())

    def test_initialization(self):
        """
        Test the initialization of a BaseModel instance.
        """
        self.assertEqual(self.base_model_instance.id, "1234")
        self.assertIsInstance(self.base_model_instance.created_at, datetime)

    def test_default_id_is_unique(self):
        """
        Test that fresh instances get distinct generated ids.
        """
        self.assertNotEqual(BaseModel().id, BaseModel().id)

    def test_created_at_from_string(self):
        """
        Test that a stored timestamp string is parsed back.
        """
        stamp = "2024-01-02T03:04:05.000006"
        model = BaseModel(created_at=stamp)
        self.assertEqual(model.created_at.strftime(time_format), stamp)
        self.assertEqual(model.created_at.tzinfo, timezone.utc)

    def test_extra_kwargs_become_attributes(self):
        """
        Test that unknown keyword arguments are set as attributes.
        """
        model = BaseModel(label="x", __class__="BaseModel")
        self.assertEqual(model.label, "x")
        self.assertNotIn("__class__", model.__dict__)

    def test_equality_by_id(self):
        """
        Test that equality compares class and id.
        """
        self.assertEqual(BaseModel(id="a"), BaseModel(id="a"))
        self.assertNotEqual(BaseModel(id="a"), BaseModel(id="b"))
        self.assertEqual(len({BaseModel(id="a"), BaseModel(id="a")}), 1)

    @patch('models.storage')
    def test_save(self, mock_storage):
        """
        Test that save registers the instance and flushes storage.
        """
        self.base_model_instance.save()
        mock_storage.new.assert_called_once_with(self.base_model_instance)
        mock_storage.save.assert_called_once()

    def test_to_json(self):
        """
        Test the to_json method.
        """
        result = self.base_model_instance.to_json()
        self.assertEqual(result['id'], self.base_model_instance.id)
        self.assertEqual(
            result['created_at'],
            self.base_model_instance.created_at.strftime(time_format))
        self.assertNotIn('__class__', result)
        self.assertEqual(
            self.base_model_instance.to_json(True)['__class__'], 'BaseModel')

    def test_to_builtin(self):
        """
        Test conversion of numpy values and enums to plain values.
        """
        data = {"a": np.arange(3.0), "b": np.float64(0.5),
                "c": (_Color.RED, np.int64(2))}
        self.assertEqual(to_builtin(data),
                         {"a": [0.0, 1.0, 2.0], "b": 0.5, "c": ["red", 2]})
        self.assertIsInstance(to_builtin(np.float64(0.5)), float)

    @patch('models.storage')
    def test_delete(self, mock_storage):
        """
        Test that delete removes the instance from storage.
        """
        self.base_model_instance.delete()
        mock_storage.delete.assert_called_once_with(self.base_model_instance)


if __name__ == '__main__':
    unittest.main()
