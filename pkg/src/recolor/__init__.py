"""Recoloring schedules between proper colorings of bounded-degree graphs."""

__version__ = "0.1.0"
