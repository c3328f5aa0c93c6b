"""The ``.rl`` input language: parsing, evaluation and output emitters."""
from .emit import emit_hasse, emit_records, render
from .evaluate import Environment, evaluate
from .printer import format_program
from .syntax import DslError, DslSyntaxError, DuplicateName, Program, TypeMismatch, UnknownName, parse

__all__ = [
    "parse", "evaluate", "format_program", "emit_records", "emit_hasse", "render",
    "Program", "Environment",
    "DslError", "DslSyntaxError", "DuplicateName", "UnknownName", "TypeMismatch",
]
