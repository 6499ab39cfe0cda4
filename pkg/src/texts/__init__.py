"""Centralized command-line text catalog."""

from texts.catalog import CliTexts

__all__ = ["CliTexts"]
