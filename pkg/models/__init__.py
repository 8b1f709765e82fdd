#!/usr/bin/env python3
"""
Initializes the models package by setting up the storage engine and
opening its database session.
"""
from models.engine.db_storage import DBStorage


# Initialize the storage engine, which will manage database operations
storage = DBStorage()
storage.reload()
