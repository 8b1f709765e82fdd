#!/usr/bin/env python3
"""
Contains tests for the DBStorage engine
"""
import os
import tempfile
import unittest
from datetime import datetime
from unittest.mock import patch

from sqlalchemy.exc import SQLAlchemyError

from models.engine.db_storage import DBStorage
from models.network import Network
from models.piecewise_polynomial import PiecewisePolynomial
from models.stored_object import StoredObject


class TestDBStorage(unittest.TestCase):
    """
    Unit tests for DBStorage on a sqlite file in a temporary directory.
    """

    def setUp(self):
        """
        Creates an empty storage and two objects.
        """
        self.tmp = tempfile.TemporaryDirectory()
        self.url = "sqlite:///" + os.path.join(self.tmp.name, "test.db")
        self.storage = DBStorage(self.url)
        self.storage.reload()
        self.net = Network([([[1.0]], [0.0]), ([[2.0]], [1.0])], "relu")
        self.poly = PiecewisePolynomial([-1.0, 1.0], [[0.0, 1.0]])

    def tearDown(self):
        """
        Closes the session and removes the temporary directory.
        """
        self.storage.close()
        self.tmp.cleanup()

    def test_new_and_get(self):
        """
        Test registering and looking up objects.
        """
        self.storage.new(self.net)
        self.storage.new(self.poly)
        self.assertIs(self.storage.get(Network, self.net.id), self.net)
        self.assertIsNone(self.storage.get(Network, "missing"))
        self.assertIsNone(self.storage.get(PiecewisePolynomial, self.net.id))
        self.assertIsNone(self.storage.get(str, self.net.id))
        self.assertEqual(self.storage.count(), 2)
        self.assertEqual(self.storage.count(Network), 1)
        self.assertEqual(self.storage.count(str), 0)
        self.assertEqual(list(self.storage.all(Network)),
                         [f"Network.{self.net.id}"])

    def test_save_and_reload(self):
        """
        Test that committed rows rebuild equal objects in a new engine.
        """
        self.storage.new(self.net)
        self.storage.new(self.poly)
        self.storage.save()

        fresh = DBStorage(self.url)
        fresh.reload()
        self.addCleanup(fresh.close)
        copy = fresh.get(Network, self.net.id)
        self.assertIsNot(copy, self.net)
        self.assertTrue(copy.same_hidden_layers(self.net))
        self.assertEqual(copy.to_json(), self.net.to_json())
        self.assertIs(fresh.get(Network, self.net.id), copy)
        self.assertEqual(fresh.count(PiecewisePolynomial), 1)

    def test_new_twice_updates(self):
        """
        Test that storing an object again keeps a single row.
        """
        self.storage.new(self.net)
        self.storage.save()
        self.storage.new(self.net)
        self.storage.save()
        self.assertEqual(self.storage.count(Network), 1)

    def test_all_skips_bad_rows(self):
        """
        Test that rows of unknown classes or broken content are skipped.
        """
        now = datetime(2024, 1, 1)
        self.storage.new(self.net)
        session = self.storage._DBStorage__session
        session.add(StoredObject(id="x1", class_name="Other",
                                 created_at=now, data={}))
        session.add(StoredObject(id="x2", class_name="Network",
                                 created_at=now, data={"id": "x2"}))
        self.storage.save()
        with self.assertLogs("models.engine.db_storage", "WARNING"):
            objects = self.storage.all()
        self.assertEqual(list(objects), [f"Network.{self.net.id}"])
        with self.assertLogs("models.engine.db_storage", "WARNING"):
            self.assertIsNone(self.storage.get(Network, "x2"))

    def test_delete(self):
        """
        Test that delete removes the row.
        """
        self.storage.new(self.net)
        self.storage.save()
        self.storage.delete(self.net)
        self.storage.delete(None)
        self.assertIsNone(self.storage.get(Network, self.net.id))
        self.storage.save()
        self.assertEqual(self.storage.count(), 0)

    def test_close(self):
        """
        Test that close drops cached objects but keeps committed rows.
        """
        self.storage.new(self.net)
        self.storage.save()
        self.storage.close()
        self.assertEqual(self.storage.count(), 1)
        copy = self.storage.get(Network, self.net.id)
        self.assertIsNot(copy, self.net)
        self.assertEqual(copy.id, self.net.id)

    def test_failed_commit_rolls_back(self):
        """
        Test that a failing commit is logged, rolled back and re-raised.
        """
        session = self.storage._DBStorage__session
        with patch.object(session, "commit",
                          side_effect=SQLAlchemyError("locked")), \
                patch.object(session, "rollback") as rollback:
            with self.assertLogs("models.engine.db_storage", "ERROR"):
                with self.assertRaises(SQLAlchemyError):
                    self.storage.save()
        rollback.assert_called_once()

    def test_test_environment_uses_test_url(self):
        """
        Test that FLASK_ENV=test picks DATABASE_TEST_URL and starts empty.
        """
        self.storage.new(self.net)
        self.storage.save()
        with patch("models.engine.db_storage.Config.FLASK_ENV", "test"), \
                patch("models.engine.db_storage.Config.DATABASE_TEST_URL",
                      self.url):
            storage = DBStorage()
        storage.reload()
        self.addCleanup(storage.close)
        self.assertEqual(storage.count(), 0)


if __name__ == '__main__':
    unittest.main()
