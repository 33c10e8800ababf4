"""Event-centric relation and character arcs from plain-text narratives."""

__version__ = "0.1.0"
