"""Phoneme-centric toolkit for Vietnamese-English code-switched speech text."""

__version__ = "0.1.0"
