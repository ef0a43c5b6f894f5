"""
Most-general unifiers of path-expression equalities

Unifiers are enumerated by branching on the first items of both sides, one
branch per way the two leading fragments can overlap:

    $x vs $y       $x = $y  |  $x = $y.$x'  |  $y = $x.$y'
    $x vs t        $x = t   |  $x = t.$x'          (t a key expression)
    @x vs c, @y    @x = c, @x = @y
    <e> vs <f>     e = f, then the tails

The branches split the solutions into disjoint classes, so every result is
most general and distinct results are inequivalent. Branching terminates on
linear equalities (each variable occurs once) and on equalities with a ground
side; anything else raises CyclicEquality.

Results are canonical: every variable of the unified expression is renamed
to u1, u2, ... in order of first occurrence, skipping names to avoid.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from language.equations import is_linear
from language.renaming import FreshNames
from models.errors import CyclicEquality
from models.program import (
    Equality,
    Item,
    PackExpr,
    PathExpr,
    Var,
    format_items,
    item_variables,
    substitute_items,
)

Image = Union[Item, PathExpr]
Equation = Tuple[PathExpr, PathExpr]

MAX_STEPS = 200_000


@dataclass
class Unifier:
    """A variable mapping sending both sides to `unified`"""
    mapping: Dict[Var, Image]
    unified: PathExpr

    def apply(self, items: PathExpr) -> PathExpr:
        return substitute_items(items, self.mapping)

    def key(self) -> tuple:
        images = tuple(sorted((str(v), format_image(img)) for v, img in self.mapping.items()))
        return (format_items(self.unified), images)

    def describe(self) -> Dict[str, str]:
        return {str(v): format_image(img) for v, img in self.mapping.items()}

    def __str__(self) -> str:
        parts = ", ".join(f"{v} -> {img}" for v, img in sorted(self.describe().items()))
        return f"{{{parts}}} => {format_items(self.unified)}"


def format_image(image: Image) -> str:
    if isinstance(image, tuple):
        return format_items(image)
    return str(image)


def is_ground(items: PathExpr) -> bool:
    return next(item_variables(items), None) is None


def is_solvable(eq: Equality) -> bool:
    return is_linear(eq) or is_ground(eq.left) or is_ground(eq.right)


def _is_path_var(item: Item) -> bool:
    return isinstance(item, Var) and item.sort == Var.PATH


def _is_atom_var(item: Item) -> bool:
    return isinstance(item, Var) and item.sort == Var.ATOMIC


def _has_path_var(items: PathExpr) -> bool:
    return any(_is_path_var(i) for i in items)


class _Solver:
    def __init__(self, max_steps: int):
        self.max_steps = max_steps
        self.steps = 0
        self.counter = 0

    def fresh(self) -> Var:
        self.counter += 1
        return Var(f"~{self.counter}", Var.PATH)

    def solve(self, equations: Tuple[Equation, ...], sigma: Dict[Var, Image]) -> Iterator[Dict[Var, Image]]:
        self.steps += 1
        if self.steps > self.max_steps:
            raise CyclicEquality(f"Unifier enumeration did not terminate within {self.max_steps} steps")
        if not equations:
            yield sigma
            return

        (left, right), rest = equations[0], equations[1:]
        if not left and not right:
            yield from self.solve(rest, sigma)
            return
        if not _lengths_compatible(left, right):
            return

        a, b = left[0], right[0]
        if a == b:
            yield from self.solve(((left[1:], right[1:]),) + rest, sigma)
            return

        if _is_path_var(b) and not _is_path_var(a):
            left, right, a, b = right, left, b, a
        tails = (left[1:], right[1:])

        if _is_path_var(a):
            yield from self.bind(a, (b,), (tails,) + rest, sigma)
            extra = self.fresh()
            yield from self.bind(a, (b, extra), (((extra,) + left[1:], right[1:]),) + rest, sigma)
            if _is_path_var(b):
                extra = self.fresh()
                yield from self.bind(b, (a, extra), ((left[1:], (extra,) + right[1:]),) + rest, sigma)
            return

        if _is_atom_var(b) and not _is_atom_var(a):
            a, b = b, a
        if _is_atom_var(a):
            if isinstance(b, PackExpr):
                return
            yield from self.bind(a, b, (tails,) + rest, sigma)
            return

        if isinstance(a, PackExpr) and isinstance(b, PackExpr):
            yield from self.solve(((a.items, b.items), tails) + rest, sigma)

    def bind(self, var: Var, image: Image, equations, sigma) -> Iterator[Dict[Var, Image]]:
        step = {var: image}
        rewritten = tuple((substitute_items(l, step), substitute_items(r, step)) for l, r in equations)
        composed = {v: _substitute_image(img, step) for v, img in sigma.items()}
        composed[var] = image
        yield from self.solve(rewritten, composed)


def _substitute_image(image: Image, step) -> Image:
    if isinstance(image, tuple):
        return substitute_items(image, step)
    return substitute_items((image,), step)[0]


def _lengths_compatible(left: PathExpr, right: PathExpr) -> bool:
    if not left or not right:
        return False
    left_open, right_open = _has_path_var(left), _has_path_var(right)
    if not left_open and len(left) < len(right):
        return False
    if not right_open and len(right) < len(left):
        return False
    return True


def enumerate_mgus(
    e1: PathExpr, e2: PathExpr, avoid: Iterable[str] = (), max_steps: int = MAX_STEPS
) -> List[Unifier]:
    """
    One canonical representative per class of most-general unifiers of
    e1 = e2. An empty list means the sides do not unify.
    """
    eq = Equality(tuple(e1), tuple(e2))
    if not is_solvable(eq):
        raise CyclicEquality(f"Equality {eq} is neither linear nor has a ground side")

    original = list(dict.fromkeys(list(item_variables(eq.left)) + list(item_variables(eq.right))))
    reserved = set(avoid) | {v.name for v in original}
    solver = _Solver(max_steps)

    results: List[Unifier] = []
    seen = set()
    for sigma in solver.solve(((eq.left, eq.right),), {}):
        unifier = _canonical(eq, original, sigma, reserved)
        key = unifier.key()
        if key not in seen:
            seen.add(key)
            results.append(unifier)
    return results


def _canonical(eq: Equality, original: Sequence[Var], sigma: Dict[Var, Image], reserved) -> Unifier:
    unified = substitute_items(eq.left, sigma)
    names = FreshNames(reserved)
    rename: Dict[Var, Var] = {}
    for var in item_variables(unified):
        if var not in rename:
            rename[var] = Var(names.name(), var.sort)

    mapping: Dict[Var, Image] = {}
    for var in original:
        image = sigma.get(var, (var,) if var.sort == Var.PATH else var)
        if var.sort == Var.PATH and not isinstance(image, tuple):
            image = (image,)
        mapping[var] = _substitute_image(image, rename)
    return Unifier(mapping, substitute_items(unified, rename))


def unify(e1: PathExpr, e2: PathExpr, avoid: Iterable[str] = ()) -> Optional[Unifier]:
    """First unifier, or None"""
    found = enumerate_mgus(e1, e2, avoid)
    return found[0] if found else None
