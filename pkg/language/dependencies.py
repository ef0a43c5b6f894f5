"""
Predicate dependency graph, stratification and recursion detection
"""

from typing import Dict, List, Tuple

import networkx as nx
import structlog

from models.errors import NotStratifiable, VocabMismatch
from models.program import Program, Rule

logger = structlog.get_logger(__name__)


def dependency_graph(program: Program) -> nx.DiGraph:
    """
    Edge body relation -> head relation; the `negative` attribute is set when
    some rule uses the body relation under negation.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(program.edb | program.idb))
    for rule in program.rules:
        head = rule.head.relation
        for lit in rule.body:
            if not lit.is_predicate:
                continue
            source = lit.atom.relation
            negative = not lit.positive
            if graph.has_edge(source, head):
                graph[source][head]["negative"] |= negative
            else:
                graph.add_edge(source, head, negative=negative)
    return graph


def stratify(program: Program) -> List[Tuple[Rule, ...]]:
    """
    Ordered strata of rules, each semipositive relative to earlier strata.

    Standard maximal-stratum assignment: stratum(h) is the maximum over
    edges b -> h of stratum(b), plus one when the edge is negative and b is
    derived. EDB relations sit at stratum 0 and contribute no rules.
    """
    graph = dependency_graph(program)
    components = nx.condensation(graph)
    members = components.graph["mapping"]
    idb = program.idb

    for u, v, data in graph.edges(data=True):
        if data["negative"] and members[u] == members[v]:
            cycle = _negative_cycle(graph, u, v)
            raise NotStratifiable(
                f"Negation on a dependency cycle through {' -> '.join(cycle)}", cycle
            )

    level: Dict[int, int] = {}
    for component in nx.topological_sort(components):
        best = 0
        for node in components.nodes[component]["members"]:
            for pred in graph.predecessors(node):
                if members[pred] == component:
                    continue
                step = 1 if graph[pred][node]["negative"] and pred in idb else 0
                best = max(best, level[members[pred]] + step)
        level[component] = best

    by_level: Dict[int, List[Rule]] = {}
    for rule in program.rules:
        by_level.setdefault(level[members[rule.head.relation]], []).append(rule)
    strata = [tuple(by_level[k]) for k in sorted(by_level)]
    logger.debug("program_stratified", strata=len(strata))
    return strata


def _negative_cycle(graph: nx.DiGraph, u: str, v: str) -> List[str]:
    if u == v:
        return [u, u]
    back = nx.shortest_path(graph, v, u)
    return [u] + back


def is_recursive(program: Program) -> bool:
    """True iff some IDB relation depends on itself"""
    graph = dependency_graph(program)
    for component in nx.strongly_connected_components(graph):
        if len(component) > 1:
            return True
        node = next(iter(component))
        if graph.has_edge(node, node):
            return True
    return False


def check_vocabulary(program: Program):
    """vocab_out must be IDB names, EDB names must be declared inputs"""
    idb = program.idb
    if program.vocab_out is not None:
        missing = sorted(program.vocab_out - idb)
        if missing:
            raise VocabMismatch(f"Output relations without rules: {', '.join(missing)}")
    if program.vocab_in is not None:
        undeclared = sorted(program.edb - program.vocab_in)
        if undeclared:
            raise VocabMismatch(f"Relations used but not declared as input: {', '.join(undeclared)}")
        clash = sorted(program.vocab_in & idb)
        if clash:
            raise VocabMismatch(f"Input relations defined by rules: {', '.join(clash)}")
