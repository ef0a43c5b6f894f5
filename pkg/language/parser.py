"""
Concrete grammar and parser for J-Logic programs and jaegd files

    T(<@x.@y>.r.@x.$x1 : @u) :- R(@x.$x1:@u), S(@y.$y1:@v).
    S(a:{}) :- .
    D($x:@i), D($x:@j) -> @i = @j.

Rules end with a dot followed by whitespace, a comment or the end of the
text; a dot directly followed by another item separates keys of a path.
"""

import json
from typing import List, Optional, Tuple

import structlog
from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, VisitError

from models.errors import ProgramSyntaxError
from models.program import (
    Const,
    Equality,
    Jaegd,
    Literal,
    PackExpr,
    Predicate,
    Program,
    Rule,
    Span,
    Var,
)
from models.terms import EMPTY

logger = structlog.get_logger(__name__)

JLOGIC_GRAMMAR = r"""
    start: statement*

    ?statement: rule
              | dependency
              | directive

    rule: predicate _IMPLIED_BY body _END
        | predicate _IMPLIED_BY _END
        | predicate _END

    dependency: body _IMPLIES consequent _END

    consequent: term "=" term         -> consequent_eq
              | "false"               -> consequent_false
              | "⊥"                   -> consequent_false

    directive: "input" name_list _END    -> input_decl
             | "output" name_list _END   -> output_decl

    name_list: NAME ("," NAME)*

    body: literal ("," literal)*

    literal: "not" atom               -> negative
           | "!" atom                 -> negative
           | "¬" atom                 -> negative
           | atom                     -> positive

    ?atom: predicate
         | side "=" side              -> equality
         | side _NEQ side             -> inequality

    predicate: NAME "(" path ":" term ")"

    ?side: path
         | "{" "}"                    -> empty_side

    path: item ("." item)*

    ?item: NAME                       -> const
         | STRING                     -> string_const
         | ATOM_VAR                   -> atom_var
         | PATH_VAR                   -> path_var
         | VALUE_VAR                  -> value_var
         | OPT_VAR                    -> opt_var
         | KEY_VAR                    -> key_var
         | "<" path ">"               -> pack

    ?term: NAME                       -> const
         | STRING                     -> string_const
         | ATOM_VAR                   -> atom_var
         | VALUE_VAR                  -> value_var
         | "{" "}"                    -> empty

    _IMPLIED_BY: ":-" | "←"
    _IMPLIES: "->" | "→"
    _NEQ: "!=" | "≠"
    _END.2: /\.(?=\s|%|$)/

    NAME: /[A-Za-z0-9_][A-Za-z0-9_\-']*/
    ATOM_VAR: /@[A-Za-z_][A-Za-z0-9_']*/
    PATH_VAR: /\$[A-Za-z_][A-Za-z0-9_']*/
    VALUE_VAR: /%[A-Za-z_][A-Za-z0-9_']*/
    OPT_VAR: /\?[A-Za-z_][A-Za-z0-9_']*/
    KEY_VAR: /#[A-Za-z_][A-Za-z0-9_']*/
    COMMENT: /%(?![A-Za-z_])[^\n]*/

    %import common.ESCAPED_STRING -> STRING
    %import common.WS
    %ignore WS
    %ignore COMMENT
"""


class _AstBuilder(Transformer):
    """Turns the lark parse tree into the program AST"""

    def const(self, children):
        return Const(str(children[0]))

    def string_const(self, children):
        return Const(json.loads(str(children[0])))

    def atom_var(self, children):
        return Var(str(children[0])[1:], Var.ATOMIC)

    def path_var(self, children):
        return Var(str(children[0])[1:], Var.PATH)

    def value_var(self, children):
        return Var(str(children[0])[1:], Var.VALUE)

    def opt_var(self, children):
        return Var(str(children[0])[1:], Var.OPTIONAL)

    def key_var(self, children):
        return Var(str(children[0])[1:], Var.KEY)

    def pack(self, children):
        return PackExpr(children[0])

    def path(self, children):
        return tuple(children)

    def empty(self, children):
        return EMPTY

    def empty_side(self, children):
        return (EMPTY,)

    def predicate(self, children):
        name, path, term = children
        return Predicate(str(name), path, term)

    def equality(self, children):
        return Literal(Equality(children[0], children[1]), True)

    def inequality(self, children):
        return Literal(Equality(children[0], children[1]), False)

    def positive(self, children):
        atom = children[0]
        return atom if isinstance(atom, Literal) else Literal(atom, True)

    def negative(self, children):
        atom = children[0]
        if isinstance(atom, Literal):
            return Literal(atom.atom, not atom.positive)
        return Literal(atom, False)

    def body(self, children):
        return tuple(children)

    def name_list(self, children):
        return [str(c) for c in children]

    def input_decl(self, children):
        return ("input", children[0])

    def output_decl(self, children):
        return ("output", children[0])

    def consequent_eq(self, children):
        return ("eq", (children[0], children[1]))

    def consequent_false(self, children):
        return ("eq", None)

    @v_args(meta=True)
    def rule(self, meta, children):
        head = children[0]
        body = children[1] if len(children) > 1 else ()
        return Rule(head, body, _span(meta))

    @v_args(meta=True)
    def dependency(self, meta, children):
        body, (_, consequent) = children
        for lit in body:
            if not lit.positive:
                raise ProgramSyntaxError("jaegd bodies are positive", *_where(meta))
        if consequent is not None and EMPTY in consequent:
            raise ProgramSyntaxError("jaegd consequents equate atomic terms, not {}", *_where(meta))
        return Jaegd(body, consequent, _span(meta))

    def start(self, children):
        return list(children)


def _span(meta) -> Optional[Span]:
    if getattr(meta, "empty", True):
        return None
    return Span(meta.line, meta.column)


def _where(meta) -> Tuple[Optional[int], Optional[int]]:
    span = _span(meta)
    return (span.line, span.column) if span else (None, None)


class ProgramParser:
    """
    LALR parser for program and dependency text.

    Statements may mix rules, jaegds and vocabulary directives; callers pick
    the statement kinds they accept.
    """

    def __init__(self):
        self.parser = Lark(
            JLOGIC_GRAMMAR,
            parser="lalr",
            propagate_positions=True,
        )
        self.builder = _AstBuilder()

    def parse_statements(self, text: str) -> list:
        try:
            tree = self.parser.parse(text)
            return self.builder.transform(tree)
        except (UnexpectedCharacters, UnexpectedEOF, UnexpectedInput) as e:
            line = getattr(e, "line", None)
            column = getattr(e, "column", None)
            if line is not None and line < 0:
                line = column = None
            raise ProgramSyntaxError(_describe(e), line, column) from e
        except VisitError as e:
            if isinstance(e.orig_exc, ProgramSyntaxError):
                raise e.orig_exc from e
            raise ProgramSyntaxError(f"Malformed token: {e.orig_exc}") from e

    def parse_program(self, text: str) -> Program:
        rules: List[Rule] = []
        vocab_in: Optional[set] = None
        vocab_out: Optional[set] = None
        for statement in self.parse_statements(text):
            if isinstance(statement, Rule):
                rules.append(statement)
            elif isinstance(statement, Jaegd):
                span = statement.span or Span(None, None)
                raise ProgramSyntaxError(
                    "jaegd found where a program was expected", span.line, span.column
                )
            elif statement[0] == "input":
                vocab_in = (vocab_in or set()) | set(statement[1])
            else:
                vocab_out = (vocab_out or set()) | set(statement[1])
        logger.debug("program_parsed", rules=len(rules))
        return Program(
            tuple(rules),
            frozenset(vocab_in) if vocab_in is not None else None,
            frozenset(vocab_out) if vocab_out is not None else None,
        )

    def parse_jaegds(self, text: str) -> List[Jaegd]:
        jaegds = []
        for statement in self.parse_statements(text):
            if not isinstance(statement, Jaegd):
                raise ProgramSyntaxError("only jaegd statements are allowed in a dependency file")
            jaegds.append(statement)
        return jaegds


def _describe(e: UnexpectedInput) -> str:
    if isinstance(e, UnexpectedEOF):
        return "Unexpected end of input"
    if isinstance(e, UnexpectedCharacters):
        return f"Unexpected character {e.char!r}"
    token = getattr(e, "token", None)
    if token is not None:
        if token.type == "$END":
            return "Unexpected end of input"
        return f"Unexpected token {str(token)!r}"
    return "Syntax error"


_default_parser: Optional[ProgramParser] = None


def _parser() -> ProgramParser:
    global _default_parser
    if _default_parser is None:
        _default_parser = ProgramParser()
    return _default_parser


def parse(text: str) -> Program:
    """Parse program text; sugar is kept"""
    return _parser().parse_program(text)


def parse_rule(text: str) -> Rule:
    program = parse(text)
    if len(program.rules) != 1:
        raise ProgramSyntaxError(f"expected one rule, found {len(program.rules)}")
    return program.rules[0]


def parse_jaegds(text: str) -> List[Jaegd]:
    return _parser().parse_jaegds(text)


def parse_jaegd(text: str) -> Jaegd:
    jaegds = parse_jaegds(text)
    if len(jaegds) != 1:
        raise ProgramSyntaxError(f"expected one jaegd, found {len(jaegds)}")
    return jaegds[0]
