"""The .qm script language: parse, print canonically, execute."""

from .executor import ExecutionError, Executor, TypeCheckError, execute
from .lexer import DSLError, ParseError, tokenize
from .parser import parse
from .printer import print_expr, print_script
from .report import Record, Report

__all__ = [
    "DSLError", "ExecutionError", "Executor", "ParseError", "Record", "Report", "TypeCheckError",
    "execute", "parse", "print_expr", "print_script", "tokenize",
]
