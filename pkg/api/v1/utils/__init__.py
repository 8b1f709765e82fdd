#!/usr/bin/env python3
"""Helpers shared by the API views and services: schemas, pagination
and sample points."""
