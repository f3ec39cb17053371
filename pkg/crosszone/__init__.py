"""Crosszone: cross Z-complementary pairs and optimal sparse training matrices."""

__version__ = "0.1.0"
