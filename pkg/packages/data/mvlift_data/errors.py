from __future__ import annotations


class RenderError(ValueError):
    """A synthetic joint cannot be imaged by one of the rig cameras."""


class MappingError(ValueError):
    pass


class DatasetFormatError(ValueError):
    """A dataset file could not be parsed; the message locates the problem."""
