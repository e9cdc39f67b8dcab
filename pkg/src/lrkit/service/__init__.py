"""HTTP service wrapping the core package; the CLI is a thin client of the
same operations."""

from . import ops, schemas  # noqa: F401
