"""Visibility-alteration audit toolkit for social-media post datasets."""

__version__ = "0.1.0"
