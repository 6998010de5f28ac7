"""Barsmith: co-creative multi-track MIDI composition engine and service."""

__version__ = "0.1.0"
