"""
Equation graphs of rule bodies

Nodes are the variables of a body. For every positive equality e1 = e2 and
every pair of an occurrence of x in e1 with an occurrence of y in e2 there is
one undirected edge x - y, so x and y are joined by
#x(e1)*#y(e2) + #y(e1)*#x(e2) parallel edges. For x = y both terms count,
so a self-loop comes twice. Self-loops and parallel edges are cycles.
"""

from collections import Counter
from typing import Iterable, Union

import networkx as nx

from models.program import Equality, Jaegd, Literal, Rule, item_variables, literal_variables


def _body(source: Union[Rule, Jaegd, Iterable[Literal]]):
    if isinstance(source, (Rule, Jaegd)):
        return tuple(source.body)
    return tuple(source)


def equation_graph(source: Union[Rule, Jaegd, Iterable[Literal]]) -> nx.MultiGraph:
    body = _body(source)
    graph = nx.MultiGraph()
    graph.add_nodes_from(sorted(literal_variables(body), key=lambda v: (v.sort, v.name)))
    for lit in body:
        if lit.positive and lit.is_equality:
            add_equality_edges(graph, lit.atom)
    return graph


def add_equality_edges(graph: nx.MultiGraph, eq: Equality):
    for x in item_variables(eq.left):
        for y in item_variables(eq.right):
            graph.add_edge(x, y, equality=eq)
            if x == y:
                graph.add_edge(x, y, equality=eq)


def edge_multiplicity(graph: nx.MultiGraph, x, y) -> int:
    return graph.number_of_edges(x, y)


def is_equationally_acyclic(source: Union[Rule, Jaegd, Iterable[Literal]]) -> bool:
    graph = equation_graph(source)
    if graph.number_of_nodes() == 0:
        return True
    return nx.is_forest(graph)


def is_linear(eq: Equality) -> bool:
    """Every variable occurs exactly once across both sides"""
    counts = Counter(item_variables(eq.left))
    counts.update(item_variables(eq.right))
    return all(n == 1 for n in counts.values())
