"""
Render ASTs back to program text that parses to the same AST
"""

from typing import Iterable

from models.program import Jaegd, Program, Rule


def format_rule(rule: Rule) -> str:
    return str(rule)


def format_jaegd(j: Jaegd) -> str:
    return str(j)


def format_program(program: Program, directives: bool = True) -> str:
    """One statement per line; vocabulary directives first when declared"""
    lines = []
    if directives and program.vocab_in is not None:
        lines.append("input " + ", ".join(sorted(program.vocab_in)) + ".")
    if directives and program.vocab_out is not None:
        lines.append("output " + ", ".join(sorted(program.vocab_out)) + ".")
    lines.extend(format_rule(r) for r in program.rules)
    return "\n".join(lines) + ("\n" if lines else "")


def format_jaegds(jaegds: Iterable[Jaegd]) -> str:
    lines = [format_jaegd(j) for j in jaegds]
    return "\n".join(lines) + ("\n" if lines else "")
