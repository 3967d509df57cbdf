"""Shared exception base for user-facing input and computation errors."""


class SaskitError(Exception):
    """Base class for all errors raised on bad user input or failed operations."""
