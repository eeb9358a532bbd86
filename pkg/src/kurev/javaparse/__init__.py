"""Self-contained Java lexer and best-effort parser."""

from .nodes import Node
from .parser import parse_java

__all__ = ["Node", "parse_java"]
