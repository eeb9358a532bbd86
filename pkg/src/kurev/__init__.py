"""kurev: knowledge-unit detection and code reviewer recommendation."""

__version__ = "0.1.0"
