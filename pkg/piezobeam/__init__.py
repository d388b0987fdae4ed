"""Modal analysis of an asymmetric piezoelectric/elastic bilayer beam."""

__version__ = "1.0.0"
