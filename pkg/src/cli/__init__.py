"""Command-line surface for batch runs."""

from cli.main import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, main

__all__ = ["EXIT_OK", "EXIT_RUNTIME", "EXIT_USAGE", "main"]
