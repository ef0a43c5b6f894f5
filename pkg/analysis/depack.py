"""
Eliminating packing from programs that map flat instances to flat instances

Paths are encoded without packing by doubling every atomic key and writing
a packed key <p> as a.b.p'.b.a, where p' is the encoding of p:

    a.c.<a.b>.b.a  ->  a.a.c.c.a.b.a.a.b.b.b.a.b.b.a.a

Read two keys at a time from the start, an encoding is a sequence of
doubled keys, openers a.b and closers b.a. The markers and the cursor
symbols c and d are the configured ones unless the program already uses
them as constants, in which case a numbered variant (a1, a2, ...) is taken.

The rewritten program
  - encodes every input relation with a cursor d.C.C.d that walks from the
    end of each path to its start, doubling the keys it passes; C is a run of
    c's longer than any run of c's in the input,
  - runs the original rules on encoded relations, constants and atomic
    variables doubled and packed expressions replaced by marker blocks,
  - restricts every path variable to valid encodings through a recursive
    Enc relation, and
  - decodes the output relations with a cursor d.C.d computed over the
    encoded outputs.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import structlog

from language.desugar import desugar
from language.safety import limitation_steps
from models.program import (
    Const,
    Equality,
    Item,
    Literal,
    PackExpr,
    PathExpr,
    Predicate,
    Program,
    Rule,
    Var,
    constants_of,
    item_variables,
    rule_variables,
)
from models.terms import EMPTY, Packed, Path

logger = structlog.get_logger(__name__)


def encode_path(path: Path, markers: Sequence[str] = ("a", "b")) -> Path:
    opener, closer = markers
    out: List = []
    for key in path:
        if isinstance(key, Packed):
            out.extend((opener, closer))
            out.extend(encode_path(key.path, markers))
            out.extend((closer, opener))
        else:
            out.extend((key, key))
    return tuple(out)


def decode_path(path: Path, markers: Sequence[str] = ("a", "b")) -> Path:
    """Inverse of encode_path; ValueError when path is not an encoding"""
    opener, closer = markers
    if len(path) % 2:
        raise ValueError(f"odd length encoding {path}")
    stack: List[List] = [[]]
    for index in range(0, len(path), 2):
        first, second = path[index], path[index + 1]
        if first == second:
            stack[-1].append(first)
        elif (first, second) == (opener, closer):
            stack.append([])
        elif (first, second) == (closer, opener) and len(stack) > 1:
            inner = stack.pop()
            if not inner:
                raise ValueError(f"empty packed key in {path}")
            stack[-1].append(Packed(tuple(inner)))
        else:
            raise ValueError(f"unexpected pair {first}.{second} in {path}")
    if len(stack) != 1 or not stack[0]:
        raise ValueError(f"unbalanced encoding {path}")
    return tuple(stack[0])


def fresh_symbols(preferred: Sequence[str], taken: Iterable[str]) -> List[str]:
    """The preferred symbols, each numbered until it is distinct from taken and the others"""
    used = set(taken)
    chosen: List[str] = []
    for symbol in preferred:
        candidate, counter = symbol, 0
        while candidate in used:
            counter += 1
            candidate = f"{symbol}{counter}"
        used.add(candidate)
        chosen.append(candidate)
    return chosen


class RelationNames:
    """Fresh relation names derived from existing ones"""

    def __init__(self, taken: Iterable[str] = ()):
        self.used: Set[str] = set(taken)

    def derive(self, base: str, suffix: str) -> str:
        stem = base.rstrip("'")
        primes = base[len(stem):]
        candidate = f"{stem}{suffix}{primes}"
        while candidate in self.used:
            suffix = "_" + suffix if suffix.startswith("_") else suffix + "_"
            candidate = f"{stem}{suffix}{primes}"
        self.used.add(candidate)
        return candidate


@dataclass
class TranslatedRule:
    rule: Rule
    auxiliary: List[Rule] = field(default_factory=list)
    checked: Dict[str, str] = field(default_factory=dict)


def _atomic(name: str) -> Var:
    return Var(name, Var.ATOMIC)


def _path(name: str) -> Var:
    return Var(name, Var.PATH)


def _optional(name: str) -> Var:
    return Var(name, Var.OPTIONAL)


def _value(name: str) -> Var:
    return Var(name, Var.VALUE)


def _pos(relation: str, path: PathExpr, term=EMPTY) -> Literal:
    return Literal(Predicate(relation, tuple(path), term))


def _neg(relation: str, path: PathExpr, term=EMPTY) -> Literal:
    return Literal(Predicate(relation, tuple(path), term), False)


class PackingEliminator:
    def __init__(
        self,
        markers: Sequence[str] = ("a", "b"),
        cursor_symbols: Sequence[str] = ("c", "d"),
        taken: Iterable[str] = (),
    ):
        self.opener, self.closer = (Const(m) for m in markers)
        self.run, self.fence = (Const(s) for s in cursor_symbols)
        self.names = RelationNames(taken)
        self._enc: Dict[str, str] = {}
        self._aux = 0

    # -- expressions ---------------------------------------------------------

    def encode_items(self, items: PathExpr) -> PathExpr:
        out: List[Item] = []
        for item in items:
            if isinstance(item, PackExpr):
                out.extend((self.opener, self.closer))
                out.extend(self.encode_items(item.items))
                out.extend((self.closer, self.opener))
            elif isinstance(item, Var) and item.sort == Var.PATH:
                out.append(item)
            else:
                out.extend((item, item))
        return tuple(out)

    def _encode_literal(self, lit: Literal, rename) -> Literal:
        atom = lit.atom
        if isinstance(atom, Predicate):
            encoded = Predicate(rename(atom.relation), self.encode_items(atom.path), atom.term)
        else:
            encoded = Equality(self.encode_items(atom.left), self.encode_items(atom.right))
        return Literal(encoded, lit.positive)

    def enc_name(self, relation: str) -> str:
        if relation not in self._enc:
            self._enc[relation] = self.names.derive("Enc_" + relation, "")
        return self._enc[relation]

    # -- rules ---------------------------------------------------------------

    def translate_rule(self, rule: Rule, names: Optional[Dict[str, str]] = None) -> TranslatedRule:
        names = names or {}

        def rename(relation: str) -> str:
            return names.get(relation, relation)

        head = rule.head
        new_head = Predicate(rename(head.relation), self.encode_items(head.path), head.term)
        body = [self._encode_literal(lit, rename) for lit in rule.body]
        result = TranslatedRule(Rule(new_head, ()))

        checks: List[Literal] = []
        done: Set[Var] = set()
        for lit in body:
            if not (lit.positive and lit.is_predicate):
                continue
            for var in item_variables(lit.atom.path):
                if var.sort == Var.PATH and var not in done:
                    done.add(var)
                    relation = lit.atom.relation
                    result.checked[relation] = self.enc_name(relation)
                    checks.append(_pos(self.enc_name(relation), (var,)))

        path_vars = {v for v in rule_variables(rule) if v.sort == Var.PATH}
        if path_vars - done:
            checks.extend(self._equality_checks(body, path_vars - done, result))

        result.rule = Rule(new_head, tuple(body) + tuple(checks), rule.span)
        return result

    def _equality_checks(self, body: List[Literal], pending: Set[Var], result: TranslatedRule) -> List[Literal]:
        """
        A variable limited only through an equality is checked against an
        auxiliary relation collecting the values of the side that limited it.
        """
        positive = tuple(lit for lit in body if lit.positive)
        _, steps = limitation_steps(positive)
        checks: List[Literal] = []
        for step in steps:
            targets = sorted(pending & step.variables, key=lambda v: v.name)
            if not targets:
                continue
            pending -= set(targets)
            self._aux += 1
            aux = self.names.derive(f"Aux{self._aux}", "")
            side = step.equality.left if step.bound_side == 0 else step.equality.right
            result.auxiliary.append(Rule(Predicate(aux, side, EMPTY), positive))
            result.checked[aux] = self.enc_name(aux)
            checks.extend(_pos(self.enc_name(aux), (var,)) for var in targets)
        return checks

    def validity_rules(self, relation: str) -> List[Rule]:
        """Enc_X holds the valid encodings occurring as subpaths of X"""
        enc = self.enc_name(relation)
        a, b = self.opener, self.closer
        i, x, y = _atomic("i"), _path("x"), _path("y")
        u, v, w = _optional("u"), _optional("v"), _value("w")
        return [
            Rule(Predicate(enc, (i, i), EMPTY), (_pos(relation, (u, i, i, v), w),)),
            Rule(
                Predicate(enc, (a, b, x, b, a), EMPTY),
                (_pos(relation, (u, a, b, x, b, a, v), w), _pos(enc, (x,))),
            ),
            Rule(
                Predicate(enc, (i, i, x), EMPTY),
                (_pos(relation, (u, i, i, x, v), w), _pos(enc, (x,))),
            ),
            Rule(
                Predicate(enc, (a, b, x, b, a, y), EMPTY),
                (_pos(relation, (u, a, b, x, b, a, y, v), w), _pos(enc, (x,)), _pos(enc, (y,))),
            ),
        ]

    def cursor_rules(self, sources: Sequence[str], tag: str) -> Tuple[str, List[Rule]]:
        """
        Rules computing a run of c's one longer than the longest run in the
        sources, or a single c when the sources contain none.
        """
        sub = self.names.derive("Sub", tag)
        mixed = self.names.derive("Mixed", tag)
        runs = self.names.derive("Runs", tag)
        cursor = self.names.derive("Cursor", tag)
        c = self.run
        x, i = _path("x"), _atomic("i")
        p, q, r, w = _optional("p"), _optional("q"), _optional("r"), _value("w")
        if not sources:
            return cursor, [Rule(Predicate(cursor, (c,), EMPTY), ())]

        rules = [Rule(Predicate(sub, (c, q), EMPTY), (_pos(source, (p, c, q, r), w),)) for source in sorted(sources)]
        rules += [
            Rule(
                Predicate(mixed, (x, i, q), EMPTY),
                (_pos(sub, (x, i, q)), Literal(Equality((i,), (c,)), False)),
            ),
            Rule(Predicate(runs, (x,), EMPTY), (_pos(sub, (x,)), _neg(mixed, (x,)))),
            Rule(Predicate(cursor, (c, x), EMPTY), (_pos(runs, (x,)), _neg(runs, (c, x)))),
            Rule(Predicate(cursor, (c,), EMPTY), (_neg(runs, (c,)),)),
        ]
        return cursor, rules

    def encoding_rules(self, relation: str, encoded: str, cursor: str) -> List[Rule]:
        shift = self.names.derive(relation, "_shift")
        d, c = self.fence, _path("cur")
        x, i, p, q, u = _path("x"), _atomic("i"), _optional("p"), _optional("q"), _value("u")
        mark = (d, c, c, d)
        return [
            Rule(Predicate(shift, (x,) + mark, u), (_pos(cursor, (c,)), _pos(relation, (x,), u))),
            Rule(
                Predicate(shift, (p,) + mark + (i, i, q), u),
                (_pos(cursor, (c,)), _pos(shift, (p, i) + mark + (q,), u)),
            ),
            Rule(Predicate(encoded, (x,), u), (_pos(cursor, (c,)), _pos(shift, mark + (x,), u))),
        ]

    def decoding_rules(self, relation: str, encoded: str, cursor: str) -> List[Rule]:
        shift = self.names.derive(relation, "_unshift")
        d, c = self.fence, _path("cur")
        x, i, p, q, u = _path("x"), _atomic("i"), _optional("p"), _optional("q"), _value("u")
        mark = (d, c, d)
        return [
            Rule(Predicate(shift, (x,) + mark, u), (_pos(cursor, (c,)), _pos(encoded, (x,), u))),
            Rule(
                Predicate(shift, (p,) + mark + (i, q), u),
                (_pos(cursor, (c,)), _pos(shift, (p, i, i) + mark + (q,), u)),
            ),
            Rule(Predicate(relation, (x,), u), (_pos(cursor, (c,)), _pos(shift, mark + (x,), u))),
        ]

    # -- programs ------------------------------------------------------------

    def transform(self, program: Program) -> Program:
        program = desugar(program)
        symbols = (self.opener, self.closer, self.run, self.fence)
        fresh = fresh_symbols([s.symbol for s in symbols], constants_of(program.rules))
        self.opener, self.closer, self.run, self.fence = (Const(s) for s in fresh)
        inputs = sorted(program.input_names)
        outputs = sorted(program.output_names)
        self.names.used |= set(inputs) | program.idb | program.edb

        renamed = {name: self.names.derive(name, "_enc") for name in sorted(set(inputs) | program.idb)}

        cursor_in, rules = self.cursor_rules(inputs, "_in")
        for relation in inputs:
            rules += self.encoding_rules(relation, renamed[relation], cursor_in)

        checked: Dict[str, str] = {}
        for rule in program.rules:
            translated = self.translate_rule(rule, renamed)
            rules.append(translated.rule)
            rules.extend(translated.auxiliary)
            checked.update(translated.checked)
        for relation in sorted(checked):
            rules += self.validity_rules(relation)

        encoded_outputs = [renamed[name] for name in outputs]
        cursor_out, decoding = self.cursor_rules(encoded_outputs, "_out")
        rules += decoding
        for relation in outputs:
            rules += self.decoding_rules(relation, renamed[relation], cursor_out)

        logger.debug("packing_eliminated", rules=len(rules), checked=len(checked), symbols=fresh)
        return Program(tuple(rules), frozenset(inputs), frozenset(outputs))


def translate_rule(
    rule: Rule, names: Optional[Dict[str, str]] = None, markers: Sequence[str] = ("a", "b")
) -> TranslatedRule:
    """Rewrite one rule over encoded relations, with validity checks for its path variables"""
    taken = {rule.head.relation} | {lit.atom.relation for lit in rule.body if lit.is_predicate}
    return PackingEliminator(markers, taken=taken).translate_rule(rule, names)


def eliminate_packing(
    program: Program, markers: Sequence[str] = ("a", "b"), cursor_symbols: Sequence[str] = ("c", "d")
) -> Program:
    """Equivalent program without packing, over flat instances, for flat-to-flat queries"""
    return PackingEliminator(markers, cursor_symbols).transform(program)
