#!/usr/bin/env python3
"""
Unit tests for the pagination utilities.
"""
import unittest
from datetime import datetime, timedelta
from unittest.mock import MagicMock

from api.v1.utils.pagination_utils import get_paginated_data, index_range


class _Stored:
    def __init__(self, ident, created_at):
        self.id = ident
        self.created_at = created_at

    def __str__(self):
        return f"[Stored] ({self.id})"


class TestIndexRange(unittest.TestCase):
    """Tests for index_range"""

    def test_pages(self):
        """Pages are 1-indexed"""
        self.assertEqual(index_range(1, 10), (0, 10))
        self.assertEqual(index_range(3, 4), (8, 12))


class TestGetPaginatedData(unittest.TestCase):
    """Tests for get_paginated_data"""

    def setUp(self):
        start = datetime(2024, 1, 1)
        objs = [_Stored(f"id-{k}", start + timedelta(minutes=k))
                for k in range(5)]
        self.storage = MagicMock()
        self.storage.all.return_value = {
            f"Stored.{obj.id}": obj for obj in reversed(objs)}

    def test_first_page(self):
        """The first page lists the oldest objects"""
        page = get_paginated_data(self.storage, _Stored, 1, 2)
        self.storage.all.assert_called_once_with(_Stored)
        self.assertEqual([item["id"] for item in page["data"]],
                         ["id-0", "id-1"])
        self.assertEqual(page["data"][0]["summary"], "[Stored] (id-0)")
        self.assertEqual(page["total_pages"], 3)
        self.assertEqual(page["next_page"], 2)
        self.assertIsNone(page["prev_page"])

    def test_last_page(self):
        """The last page may be short"""
        page = get_paginated_data(self.storage, _Stored, 3, 2)
        self.assertEqual(page["page_size"], 1)
        self.assertIsNone(page["next_page"])
        self.assertEqual(page["prev_page"], 2)

    def test_empty(self):
        """No objects give no pages"""
        self.storage.all.return_value = {}
        page = get_paginated_data(self.storage, _Stored)
        self.assertEqual(page["data"], [])
        self.assertEqual(page["total_pages"], 0)


if __name__ == '__main__':
    unittest.main()
