"""Perfect matchings of plane graphs.

Brute-force enumeration serves as the oracle for ``M(G)``; Kasteleyn
orientations turn ``M(G)`` into a Pfaffian; the condensation identities are
exposed as residual checks and the edge-condensation identity also drives a
recursive counter.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .identities import HypothesisError, _split_weight
from .graph import GraphError, PlaneGraph, _edge_key, cyclic_subsequence
from .matrix import SkewMatrix
from .pfaffian import pf_delete, pf_eliminate, pf_integer

log = logging.getLogger(__name__)

ORACLE_MAX_VERTICES = 24
YYZ_MAX_K = 6
CONDENSE_BASE_VERTICES = 6

ZERO = Fraction(0)
ONE = Fraction(1)


class OracleSizeError(ValueError):
    pass


# --- orientations --------------------------------------------------------------------


@dataclass(frozen=True)
class Orientation:
    """Direction of every edge of a graph, as ``(tail, head)`` aligned with ``G.edges``."""

    arcs: tuple[tuple[int, int], ...]

    def as_dict(self) -> dict[tuple[int, int], tuple[int, int]]:
        return {_edge_key(t, h): (t, h) for t, h in self.arcs}

    def reversed(self) -> "Orientation":
        return Orientation(tuple((h, t) for t, h in self.arcs))


def orientation_from_arcs(G: PlaneGraph, arcs: Iterable[tuple[int, int]]) -> Orientation:
    d = {_edge_key(t, h): (t, h) for t, h in arcs}
    try:
        return Orientation(tuple(d[_edge_key(u, v)] for u, v, _ in G.edges))
    except KeyError as exc:
        raise GraphError(f"no direction given for edge {exc.args[0]}") from None


def skew_adjacency(G: PlaneGraph, o: Orientation) -> SkewMatrix:
    """``b_ij = w`` for an arc ``(i, j)``, ``-w`` for the reverse arc, else 0."""
    n = G.n_vertices
    grid = [[ZERO] * n for _ in range(n)]
    for (t, h), (_, _, w) in zip(o.arcs, G.edges):
        grid[t - 1][h - 1] = w
        grid[h - 1][t - 1] = -w
    return SkewMatrix._trusted(tuple(map(tuple, grid)), n)


def clockwise_counts(G: PlaneGraph, o: Orientation) -> list[int]:
    """Per face, how many boundary darts agree with the orientation."""
    arcs = set(o.arcs)
    return [sum(1 for d in walk if d in arcs) for walk in G.faces()]


def is_kasteleyn(G: PlaneGraph, o: Orientation) -> bool:
    outer = G.outer() if G.edges else None
    return all(c % 2 == 1 for f, c in enumerate(clockwise_counts(G, o), start=1) if f != outer)


def _spanning_tree(G: PlaneGraph, first: Sequence[tuple[int, int]]) -> set[tuple[int, int]]:
    parent = list(range(G.n_vertices + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = set()
    for u, v in list(first) + [(u, v) for u, v, _ in G.edges]:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            tree.add(_edge_key(u, v))
    return tree


def kasteleyn_orient_extending(G: PlaneGraph, fixed_arcs: Sequence[tuple[int, int]] = ()) -> Orientation:
    """Kasteleyn orientation keeping the directions of ``fixed_arcs``.

    The fixed edges go into a spanning tree, tree edges are oriented first
    (fixed ones as given, the rest from the lower label), and the remaining
    edges are set face by face from the leaves of the dual tree toward the
    outer face so that each bounded face gets an odd clockwise count.
    """
    if not G.is_connected():
        raise GraphError("Kasteleyn orientation needs a connected graph")
    used = set()
    for t, h in fixed_arcs:
        if not G.has_edge(t, h):
            raise GraphError(f"({t},{h}) is not an edge")
        if t in used or h in used:
            raise GraphError("fixed edges must be independent")
        used.update((t, h))
    direction = {_edge_key(t, h): (t, h) for t, h in fixed_arcs}
    tree = _spanning_tree(G, fixed_arcs)
    for key in tree:
        direction.setdefault(key, key)
    if not G.edges:
        return Orientation(())

    faces = G.faces()
    outer = G.outer()
    face_of = {}
    for f, walk in enumerate(faces, start=1):
        for d in walk:
            face_of[d] = f
    dual = {f: [] for f in range(1, len(faces) + 1)}
    for u, v, _ in G.edges:
        key = _edge_key(u, v)
        if key in tree:
            continue
        f1, f2 = face_of[(u, v)], face_of[(v, u)]
        dual[f1].append((f2, key))
        dual[f2].append((f1, key))

    order = [outer]
    parent_edge = {outer: None}
    for f in order:
        for g, key in dual[f]:
            if g not in parent_edge:
                parent_edge[g] = key
                order.append(g)
    if len(order) != len(faces):
        raise GraphError("dual of the cotree is not a spanning tree; rotation system is inconsistent")

    for f in reversed(order[1:]):
        key = parent_edge[f]
        cw = 0
        dart_on_f = None
        for d in faces[f - 1]:
            k = _edge_key(*d)
            if k == key:
                dart_on_f = d
            elif direction.get(k) == d:
                cw += 1
        # orient the remaining edge along the walk iff that makes the count odd
        direction[key] = dart_on_f if cw % 2 == 0 else (dart_on_f[1], dart_on_f[0])
    return Orientation(tuple(direction[_edge_key(u, v)] for u, v, _ in G.edges))


def kasteleyn_orient(G: PlaneGraph) -> Orientation:
    """Orientation with an odd number of clockwise edges on every bounded face."""
    return kasteleyn_orient_extending(G, ())


# --- oracle ------------------------------------------------------------------------------


def _check_cap(G: PlaneGraph, cap: int) -> None:
    if G.n_vertices > cap:
        raise OracleSizeError(f"oracle is capped at {cap} vertices, graph has {G.n_vertices}")


def enumerate_matchings(G: PlaneGraph, max_vertices: int = ORACLE_MAX_VERTICES) -> list[tuple[tuple[int, int], ...]]:
    """All perfect matchings, branching on the lowest uncovered vertex."""
    _check_cap(G, max_vertices)
    n = G.n_vertices
    if n % 2:
        return []
    adj = [sorted(G.neighbors(v)) for v in range(n + 1)] if n else [[]]
    covered = [False] * (n + 1)
    out = []
    chosen = []

    def rec(start):
        v = start
        while v <= n and covered[v]:
            v += 1
        if v > n:
            out.append(tuple(chosen))
            return
        covered[v] = True
        for u in adj[v]:
            if not covered[u]:
                covered[u] = True
                chosen.append((v, u))
                rec(v + 1)
                chosen.pop()
                covered[u] = False
        covered[v] = False

    rec(1)
    return out


def _matching_sum_adj(adj: dict[int, dict[int, Fraction]], vertices: Iterable[int]) -> Fraction:
    verts = sorted(vertices)
    if len(verts) % 2:
        return ZERO
    bit = {v: 1 << k for k, v in enumerate(verts)}
    nbr = [[(bit[u], w) for u, w in adj[v].items() if u in bit and w != 0] for v in verts]
    memo = {0: ONE}

    def rec(mask: int) -> Fraction:
        got = memo.get(mask)
        if got is not None:
            return got
        low = mask & -mask
        rest = mask ^ low
        total = ZERO
        for b, w in nbr[low.bit_length() - 1]:
            if rest & b:
                total += w * rec(rest ^ b)
        memo[mask] = total
        return total

    return rec((1 << len(verts)) - 1)


def matching_sum(G: PlaneGraph, max_vertices: int = ORACLE_MAX_VERTICES) -> Fraction:
    """``M(G)``: sum over perfect matchings of the product of edge weights."""
    _check_cap(G, max_vertices)
    return _matching_sum_adj(G.adjacency(), range(1, G.n_vertices + 1))


def M(G: PlaneGraph, vertices: Iterable[int] = (), edges: Iterable[tuple[int, int]] = ()) -> Fraction:
    """Oracle ``M(G - vertices - edges)`` without relabelling."""
    _check_cap(G, ORACLE_MAX_VERTICES)
    drop_v = set(vertices)
    drop_e = {_edge_key(u, v) for u, v in edges}
    for v in drop_v:
        if not 1 <= v <= G.n_vertices:
            raise GraphError(f"vertex {v} does not exist")
    adj = G.adjacency()
    for u, v in drop_e:
        if v not in adj.get(u, {}):
            raise GraphError(f"edge ({u},{v}) does not exist")
        del adj[u][v]
        del adj[v][u]
    return _matching_sum_adj(adj, [v for v in adj if v not in drop_v])


# --- Pfaffian counting -------------------------------------------------------------------


def _check_weights(G: PlaneGraph) -> None:
    for u, v, w in G.edges:
        if w < 0:
            raise GraphError(f"edge ({u},{v}) has negative weight {w}; counting needs nonnegative weights")


def _pf_count_connected(G: PlaneGraph) -> Fraction:
    if G.n_vertices == 0:
        return ONE
    if G.n_vertices % 2:
        return ZERO
    return abs(pf_eliminate(skew_adjacency(G, kasteleyn_orient(G))))


def count_via_pfaffian(G: PlaneGraph) -> Fraction:
    """``M(G) = |Pf(A(G^e))|`` for a Kasteleyn orientation ``G^e``."""
    if not G.is_connected():
        raise GraphError("count_via_pfaffian needs a connected graph")
    _check_weights(G)
    return _pf_count_connected(G)


def has_perfect_matching(G: PlaneGraph) -> bool:
    """Does ``G`` have a perfect matching using only positive-weight edges?

    Unit weights on a Kasteleyn orientation make ``|Pf|`` the number of
    perfect matchings, so the test is an integer Pfaffian per component.
    """
    zero = [(u, v) for u, v, w in G.edges if w == 0]
    if zero:
        G = G.subgraph((), zero)
    everything = set(range(1, G.n_vertices + 1))
    for comp in G.components():
        if len(comp) % 2:
            return False
        H = G.subgraph(everything - set(comp)) if len(comp) < G.n_vertices else G
        n = H.n_vertices
        B = [[0] * n for _ in range(n)]
        for t, h in kasteleyn_orient(H).arcs:
            B[t - 1][h - 1] = 1
            B[h - 1][t - 1] = -1
        if pf_integer(B) == 0:
            return False
    return True


def count_components(G: PlaneGraph) -> Fraction:
    """Pfaffian count of a possibly disconnected graph, as a product over components."""
    _check_weights(G)
    total = ONE
    for comp in G.components():
        if len(comp) % 2:
            return ZERO
        drop = set(range(1, G.n_vertices + 1)) - set(comp)
        total *= _pf_count_connected(G.subgraph(drop))
        if total == 0:
            return ZERO
    return total


# --- three-arc subdivision -------------------------------------------------------------------


def bar_construction(
    G: PlaneGraph, o: Orientation, e: tuple[int, int], literal: bool = False
) -> tuple[PlaneGraph, Orientation]:
    """Replace arc ``t -> h`` of weight ``w`` by ``t -> n+1 -> n+2 -> h``.

    Weights are ``(w, 1, 1)``, or ``(r, 1, r)`` with ``literal=True`` when
    ``w = r**2`` is a rational square.  The Pfaffian of the skew adjacency
    matrix is unchanged.
    """
    if not G.has_edge(*e):
        raise GraphError(f"{e} is not an edge")
    t, h = o.as_dict()[_edge_key(*e)]
    w = G.weight(t, h)
    if w < 0:
        raise GraphError("bar construction needs a nonnegative weight")
    try:
        w1, w2, w3 = _split_weight(w, literal)
    except HypothesisError as exc:
        raise GraphError(str(exc)) from None
    n = G.n_vertices
    a, b = n + 1, n + 2
    edges, arcs = [], []
    for (u, v, wt), arc in zip(G.edges, o.arcs):
        if _edge_key(u, v) == _edge_key(t, h):
            continue
        edges.append((u, v, wt))
        arcs.append(arc)
    edges += [(t, a, w1), (a, b, w2), (b, h, w3)]
    arcs += [(t, a), (a, b), (b, h)]
    rotation = []
    for v in range(1, n + 1):
        r = G.rotation[v - 1]
        if v == t:
            r = tuple(a if y == h else y for y in r)
        elif v == h:
            r = tuple(b if y == t else y for y in r)
        rotation.append(r)
    rotation += [(t, b), (a, h)]
    coords = None
    if G.coords is not None:
        (x1, y1), (x2, y2) = G.coords[t - 1], G.coords[h - 1]
        coords = G.coords + (
            (x1 + (x2 - x1) / 3, y1 + (y2 - y1) / 3),
            (x1 + 2 * (x2 - x1) / 3, y1 + 2 * (y2 - y1) / 3),
        )
    Gb = PlaneGraph(n + 2, tuple(edges), tuple(rotation), None, coords)
    if G.edges and coords is None:
        # the old outer face survives with the subdivided edge lengthened
        for d in G.faces()[G.outer() - 1]:
            if _edge_key(*d) != _edge_key(t, h):
                Gb = Gb.with_outer(_face_containing(Gb, d))
                break
    return Gb, Orientation(tuple(arcs))


def _face_containing(G: PlaneGraph, dart) -> int:
    for f, walk in enumerate(G.faces(), start=1):
        if dart in walk:
            return f
    raise GraphError(f"dart {dart} not found")


# --- hypothesis checks ------------------------------------------------------------------------


def _face_in_order(G: PlaneGraph, vertices: Sequence[int], either_direction: bool = True) -> int:
    for v in vertices:
        if not 1 <= v <= G.n_vertices:
            raise HypothesisError(f"vertex {v} does not exist")
    if len(set(vertices)) != len(vertices):
        raise HypothesisError("vertices must be distinct")
    f = G.find_face_with_cyclic_order(vertices)
    if f is None and either_direction:
        f = G.find_face_with_cyclic_order(list(reversed(vertices)))
    if f is None:
        raise HypothesisError(f"vertices {list(vertices)} do not appear in cyclic order on a common face")
    return f


def _bipartite_pattern(G: PlaneGraph, same: Sequence[int], other: Sequence[int]) -> None:
    color = G.bipartition()
    if color is None:
        raise HypothesisError("graph is not bipartite")
    ones = sum(color.values())
    if 2 * ones != G.n_vertices:
        raise HypothesisError("colour classes have different sizes")
    c = color[same[0]]
    if any(color[x] != c for x in same) or any(color[x] == c for x in other):
        raise HypothesisError("vertices do not follow the required colour pattern")


def _is_four_cycle_face(G: PlaneGraph, a, b, c, d) -> bool:
    for walk in G.faces():
        if len(walk) != 4:
            continue
        vs = [u for u, _ in walk]
        for seq in ([a, b, c, d], [d, c, b, a]):
            if any(vs[k:] + vs[:k] == seq for k in range(4)):
                return True
    return False


# --- vertex condensation ------------------------------------------------------------------------


def residual_propp(G: PlaneGraph, a: int, b: int, c: int, d: int) -> Fraction:
    """Propp's condensation on a 4-cycle face ``abcd`` of a balanced bipartite graph."""
    _bipartite_pattern(G, (a, c), (b, d))
    if not _is_four_cycle_face(G, a, b, c, d):
        raise HypothesisError(f"{a},{b},{c},{d} is not a 4-cycle face")
    return M(G) * M(G, (a, b, c, d)) - M(G, (a, b)) * M(G, (c, d)) - M(G, (a, d)) * M(G, (b, c))


def residual_kuo(G: PlaneGraph, a: int, b: int, c: int, d: int, case: int = 1) -> Fraction:
    """Kuo's condensation for four vertices in cyclic order on a face."""
    if case == 1:
        _bipartite_pattern(G, (a, c), (b, d))
    elif case == 2:
        _bipartite_pattern(G, (a, b), (c, d))
    else:
        raise HypothesisError("case must be 1 or 2")
    _face_in_order(G, (a, b, c, d))
    if case == 1:
        return M(G) * M(G, (a, b, c, d)) - M(G, (a, b)) * M(G, (c, d)) - M(G, (a, d)) * M(G, (b, c))
    return M(G, (a, d)) * M(G, (b, c)) - M(G) * M(G, (a, b, c, d)) - M(G, (a, c)) * M(G, (b, d))


def residual_kenyon(G: PlaneGraph, a: int, b: int, c: int, d: int) -> Fraction:
    """Kenyon's relation for four vertices in cyclic order on one face."""
    _face_in_order(G, (a, b, c, d))
    return (
        M(G) * M(G, (a, b, c, d))
        + M(G, (a, c)) * M(G, (b, d))
        - M(G, (a, b)) * M(G, (c, d))
        - M(G, (a, d)) * M(G, (b, c))
    )


def residual_yyz_vertex(G: PlaneGraph, A_set: Sequence[int], B_set: Sequence[int], j: int) -> Fraction:
    """Odd-subset versus even-subset condensation over ``a_1 b_1 ... a_k b_k`` on a face."""
    k = len(A_set)
    if len(B_set) != k:
        raise HypothesisError("A and B must have the same size")
    if G.n_vertices % 2:
        raise HypothesisError("graph must have an even number of vertices")
    if not 2 <= k <= G.n_vertices // 2:
        raise HypothesisError(f"k={k} outside [2, {G.n_vertices // 2}]")
    if k > YYZ_MAX_K:
        raise HypothesisError(f"k={k} exceeds the subset-sum guard {YYZ_MAX_K}")
    if not 1 <= j <= k:
        raise HypothesisError(f"j={j} not in [1, {k}]")
    order = [x for pair in zip(A_set, B_set) for x in pair]
    _face_in_order(G, order)
    A, B = list(A_set), list(B_set)
    aj = A[j - 1]
    others = [x for x in A if x != aj]
    lhs = rhs = ZERO
    for r in range(k + 1):
        for Y in combinations(B, r):
            rest = [x for x in B if x not in Y]
            if r % 2:
                lhs += M(G, (aj, *Y)) * M(G, (*others, *rest))
            else:
                rhs += M(G, Y) * M(G, (*A, *rest))
    return lhs - rhs


# --- edge condensation ----------------------------------------------------------------------------


def _check_edge_family(G: PlaneGraph, X: Sequence[tuple[int, int]]) -> int:
    k = len(X)
    if k < 2:
        raise HypothesisError("need at least two edges")
    if G.n_vertices % 2:
        raise HypothesisError("graph must have an even number of vertices")
    flat = [x for e in X for x in e]
    if len(set(flat)) != len(flat):
        raise HypothesisError("edges must be independent")
    for a, b in X:
        if not G.has_edge(a, b):
            raise HypothesisError(f"({a},{b}) is not an edge")
    keys = {_edge_key(a, b) for a, b in X}
    for f, walk in enumerate(G.faces(), start=1):
        on = {_edge_key(*d) for d in walk}
        if keys <= on:
            vs = [u for u, _ in walk]
            if cyclic_subsequence(vs, flat) or cyclic_subsequence(vs, flat[::-1]):
                return f
    raise HypothesisError("edges do not lie on a common face with a_1 b_1 a_2 b_2 ... in cyclic order")


def residual_edge_condensation(G: PlaneGraph, X: Sequence[tuple[int, int]], j: int) -> Fraction:
    """Edge-condensation identity for independent edges ``e_i = a_i b_i`` on one face."""
    _check_edge_family(G, X)
    k = len(X)
    if not 1 <= j <= k:
        raise HypothesisError(f"j={j} not in [1, {k}]")
    X = [tuple(e) for e in X]
    aj, bj = X[j - 1]
    rest = [e for e in X if e != X[j - 1]]
    lhs = M(G) * M(G, (), X)
    rhs = M(G, (), [X[j - 1]]) * M(G, (), rest)
    s = ZERO
    for i, (ai, bi) in enumerate(X, start=1):
        if i == j:
            continue
        s += G.weight(ai, bi) * (
            M(G, (bj, ai)) * M(G, (aj, bi), X) - M(G, (bj, bi)) * M(G, (aj, ai), X)
        )
    return lhs - rhs - G.weight(aj, bj) * s


def same_sign_products(G: PlaneGraph, a: int, b: int, c: int, d: int, relabel: bool = True) -> list[Fraction]:
    """The four products ``Pf(A_abcd)Pf(A)``, ``Pf(A_ab)Pf(A_cd)``, ``Pf(A_ac)Pf(A_bd)``, ``Pf(A_ad)Pf(A_bc)``.

    ``A`` is the skew adjacency matrix of a Kasteleyn orientation.  With
    ``relabel`` the vertices are first renumbered so that ``a, b, c, d``
    become ``1, 2, 3, 4``; the sign pattern of the four-term expansion that
    relates these products assumes labels increasing along the cyclic order.
    """
    vs = G.face_vertices(G.outer())
    if len({a, b, c, d}) != 4:
        raise HypothesisError("vertices must be distinct")
    if not (cyclic_subsequence(vs, (a, b, c, d)) or cyclic_subsequence(vs, (d, c, b, a))):
        raise HypothesisError("vertices must appear in cyclic order on the unbounded face")
    A = skew_adjacency(G, kasteleyn_orient(G))
    if relabel:
        order = [a, b, c, d] + [v for v in range(1, G.n_vertices + 1) if v not in (a, b, c, d)]
        A = SkewMatrix._trusted(tuple(tuple(A[i, j] for j in order) for i in order), G.n_vertices)
        a, b, c, d = 1, 2, 3, 4
    return [
        pf_delete(A, (a, b, c, d)) * pf_eliminate(A),
        pf_delete(A, (a, b)) * pf_delete(A, (c, d)),
        pf_delete(A, (a, c)) * pf_delete(A, (b, d)),
        pf_delete(A, (a, d)) * pf_delete(A, (b, c)),
    ]


def same_sign_check(G: PlaneGraph, a: int, b: int, c: int, d: int) -> bool:
    """Are the four Pfaffian products sign-compatible (zero matches anything)?"""
    signs = {1 if x > 0 else -1 for x in same_sign_products(G, a, b, c, d) if x != 0}
    return len(signs) <= 1


# --- condensation-driven counting -----------------------------------------------------------------


@dataclass
class CondenseResult:
    value: Fraction
    fallbacks: int
    states: int


class _Condenser:
    def __init__(self, G: PlaneGraph):
        _check_weights(G)
        self.G = G
        self.adj = G.adjacency()
        self.memo: dict = {}
        self.fallbacks = 0

    def _degree(self, v, S, D):
        return sum(1 for u in self.adj[v] if u in S and _edge_key(u, v) not in D)

    def simplify(self, S: frozenset, D: frozenset):
        """Apply forced moves; returns (factor, S, D) or (0, ...) when M vanishes."""
        S = set(S)
        factor = ONE
        changed = True
        while changed and S:
            changed = False
            for v in sorted(S):
                if v not in S:
                    continue
                nb = [u for u in self.adj[v] if u in S and _edge_key(u, v) not in D]
                if not nb:
                    return ZERO, frozenset(), frozenset()
                if len(nb) == 1:
                    u = nb[0]
                    factor *= self.adj[v][u]
                    S.discard(v)
                    S.discard(u)
                    changed = True
                    if factor == 0:
                        return ZERO, frozenset(), frozenset()
        D = frozenset(e for e in D if e[0] in S and e[1] in S)
        return factor, frozenset(S), D

    def _components(self, S, D):
        S = set(S)
        comps = []
        while S:
            s = min(S)
            comp = {s}
            stack = [s]
            S.discard(s)
            while stack:
                x = stack.pop()
                for u in self.adj[x]:
                    if u in S and _edge_key(u, x) not in D:
                        S.discard(u)
                        comp.add(u)
                        stack.append(u)
            comps.append(frozenset(comp))
        return comps

    def count(self, S: frozenset, D: frozenset = frozenset()) -> Fraction:
        factor, S, D = self.simplify(S, D)
        if factor == 0:
            return ZERO
        if len(S) % 2:
            return ZERO
        if not S:
            return factor
        comps = self._components(S, D)
        if len(comps) > 1:
            total = factor
            for comp in comps:
                sub = frozenset(e for e in D if e[0] in comp)
                total *= self.count(comp, sub)
                if total == 0:
                    return ZERO
            return total
        return factor * self._count_connected(S, D)

    def _state_graph(self, S, D):
        drop = set(range(1, self.G.n_vertices + 1)) - S
        H = self.G.subgraph(drop, D)
        labels = sorted(S)
        return H, labels

    def _candidates(self, H: PlaneGraph, labels):
        """Pairs of independent edges on a face walk.

        Pairs whose edges both have an endpoint of degree 2 come first: after
        forced moves their states are induced subgraphs again.
        """
        outer = H.outer()
        order = [outer] + [f for f in range(1, len(H.faces()) + 1) if f != outer]
        seen = set()
        for tier in (True, False):
            for f in order:
                yield from self._face_pairs(H, labels, H.faces()[f - 1], tier, seen)

    def _face_pairs(self, H, labels, walk, tier, seen):
            vs = [u for u, _ in walk]
            counts = {}
            for v in vs:
                counts[v] = counts.get(v, 0) + 1
            darts = [
                (u, v) for u, v in walk
                if counts[u] == 1 and counts[v] == 1 and (not tier or H.degree(u) == 2 or H.degree(v) == 2)
            ]
            for x in range(len(darts)):
                for y in range(x + 1, len(darts)):
                    (a1, b1), (a2, b2) = darts[x], darts[y]
                    if len({a1, b1, a2, b2}) < 4:
                        continue
                    cand = tuple((labels[a - 1], labels[b - 1]) for a, b in ((a1, b1), (a2, b2)))
                    key = frozenset(_edge_key(*e) for e in cand)
                    if key in seen:
                        continue
                    seen.add(key)
                    yield cand

    def _vanishes(self, S: frozenset, D: frozenset) -> bool:
        """Cheap test for ``M = 0``, used only to choose a usable edge pair."""
        factor, S, D = self.simplify(S, D)
        if factor == 0 or len(S) % 2:
            return True
        if not S:
            return False
        drop = set(range(1, self.G.n_vertices + 1)) - S
        return not has_perfect_matching(self.G.subgraph(drop, D))

    def _count_connected(self, S: frozenset, D: frozenset) -> Fraction:
        key = (S, D)
        if key in self.memo:
            return self.memo[key]
        if len(S) <= CONDENSE_BASE_VERTICES:
            adj = {v: {u: w for u, w in self.adj[v].items() if u in S and _edge_key(u, v) not in D} for v in S}
            value = _matching_sum_adj(adj, S)
            self.memo[key] = value
            return value
        H, labels = self._state_graph(S, D)
        value = None
        for (a1, b1), (a2, b2) in self._candidates(H, labels):
            e1, e2 = _edge_key(a1, b1), _edge_key(a2, b2)
            if self._vanishes(S, D | {e1, e2}):
                continue
            denom = self.count(S, D | {e1, e2})
            w1, w2 = self.adj[a1][b1], self.adj[a2][b2]
            num = self.count(S, D | {e1}) * self.count(S, D | {e2})
            num += w1 * w2 * (
                self.count(S - {b1, a2}, D) * self.count(S - {a1, b2}, D | {e1, e2})
                - self.count(S - {b1, b2}, D) * self.count(S - {a1, a2}, D | {e1, e2})
            )
            value = num / denom
            break
        if value is None and self._vanishes(S, D):
            value = ZERO
        if value is None:
            self.fallbacks += 1
            log.info("condensation fallback to the Pfaffian count on a %d-vertex state", len(S))
            value = _pf_count_connected(H)
        self.memo[key] = value
        return value


def condense_count_detailed(G: PlaneGraph) -> CondenseResult:
    c = _Condenser(G)
    value = c.count(frozenset(range(1, G.n_vertices + 1)))
    return CondenseResult(value, c.fallbacks, len(c.memo))


def condense_count(G: PlaneGraph) -> Fraction:
    """``M(G)`` by recursing on the edge-condensation identity with ``k = 2``.

    Each step picks two independent edges on a face, each with an endpoint
    of degree 2, so that every graph in the recursion reduces to an induced
    subgraph after forced moves.  States are memoised; when no usable pair
    exists or ``M(G - X)`` vanishes the Pfaffian count is used instead.
    """
    return condense_count_detailed(G).value
