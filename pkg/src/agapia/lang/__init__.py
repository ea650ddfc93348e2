"""Concrete syntax, printing and static typing of programs."""

from .ast import Source
from .lexer import Token, tokenize
from .parser import (
    parse,
    parse_expr,
    parse_program,
    parse_simple_type,
    parse_stmt,
    parse_type,
    parse_value,
)
from .printer import display_type, format_program, format_source, format_type, format_value, print_program
from .typecheck import ProgramType, border_names, typecheck

__all__ = [
    "Source",
    "Token",
    "tokenize",
    "parse",
    "parse_expr",
    "parse_program",
    "parse_simple_type",
    "parse_stmt",
    "parse_type",
    "parse_value",
    "display_type",
    "format_program",
    "format_source",
    "format_type",
    "format_value",
    "print_program",
    "ProgramType",
    "border_names",
    "typecheck",
]
