"""Weighted plane graphs given by a rotation system.

Vertices are ``1..n``.  ``rotation[v-1]`` lists the neighbours of ``v`` in
clockwise order around ``v``; since graphs are simple, a neighbour names an
edge.  Faces are traced so that every bounded face of a geometric
embedding is walked clockwise (the face lies to the right of each dart).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence

from .matrix import format_scalar, to_scalar

Dart = tuple[int, int]


class GraphError(ValueError):
    pass


def _edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class PlaneGraph:
    n_vertices: int
    edges: tuple[tuple[int, int, Fraction], ...]
    rotation: tuple[tuple[int, ...], ...]
    outer_face: int | None = None
    coords: tuple[tuple[Fraction, Fraction], ...] | None = None
    _weights: dict = field(init=False, repr=False, compare=False, hash=False)
    _faces: list = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        n = self.n_vertices
        weights = {}
        edges = []
        for u, v, w in self.edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphError(f"edge ({u},{v}) has an endpoint outside [1, {n}]")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            key = _edge_key(u, v)
            if key in weights:
                raise GraphError(f"multiple edge {key}")
            w = to_scalar(w)
            weights[key] = w
            edges.append((u, v, w))
        object.__setattr__(self, "edges", tuple(edges))
        if len(self.rotation) != n:
            raise GraphError("rotation must list every vertex")
        rot = tuple(tuple(r) for r in self.rotation)
        object.__setattr__(self, "rotation", rot)
        nbrs = [set() for _ in range(n + 1)]
        for u, v in weights:
            nbrs[u].add(v)
            nbrs[v].add(u)
        for v in range(1, n + 1):
            r = rot[v - 1]
            if len(r) != len(set(r)) or set(r) != nbrs[v]:
                raise GraphError(f"rotation at vertex {v} does not list its incident edges exactly once")
        if self.coords is not None and len(self.coords) != n:
            raise GraphError("coords must give one point per vertex")
        object.__setattr__(self, "_weights", weights)
        object.__setattr__(self, "_faces", None)
        self._check_euler()
        if self.outer_face is not None and not 1 <= self.outer_face <= len(self.faces()):
            raise GraphError(f"outer face {self.outer_face} does not exist")

    # -- basic queries

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def weight(self, u: int, v: int) -> Fraction:
        return self._weights[_edge_key(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return _edge_key(u, v) in self._weights

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.rotation[v - 1]

    def degree(self, v: int) -> int:
        return len(self.rotation[v - 1])

    def edge_keys(self) -> list[tuple[int, int]]:
        return [_edge_key(u, v) for u, v, _ in self.edges]

    def adjacency(self) -> dict[int, dict[int, Fraction]]:
        adj = {v: {} for v in range(1, self.n_vertices + 1)}
        for u, v, w in self.edges:
            adj[u][v] = w
            adj[v][u] = w
        return adj

    def components(self) -> list[list[int]]:
        seen = set()
        comps = []
        for s in range(1, self.n_vertices + 1):
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            stack = [s]
            while stack:
                x = stack.pop()
                for y in self.rotation[x - 1]:
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        stack.append(y)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n_vertices <= 1 or len(self.components()) == 1

    # -- faces

    def next_dart(self, dart: Dart) -> Dart:
        u, v = dart
        r = self.rotation[v - 1]
        return (v, r[r.index(u) - 1])

    def faces(self) -> list[list[Dart]]:
        """Face boundary walks as lists of darts, in a deterministic order."""
        if self._faces is None:
            seen = set()
            faces = []
            for u, v, _ in self.edges:
                for start in ((u, v), (v, u)):
                    if start in seen:
                        continue
                    walk = []
                    d = start
                    while d not in seen:
                        seen.add(d)
                        walk.append(d)
                        d = self.next_dart(d)
                    faces.append(walk)
            object.__setattr__(self, "_faces", faces)
        return self._faces

    def _check_euler(self) -> None:
        comps = [c for c in self.components() if len(c) > 1]
        if not comps:
            return
        comp_of = {}
        for k, c in enumerate(comps):
            for v in c:
                comp_of[v] = k
        nf = [0] * len(comps)
        for walk in self.faces():
            nf[comp_of[walk[0][0]]] += 1
        ne = [0] * len(comps)
        for u, _, _ in self.edges:
            ne[comp_of[u]] += 1
        for k, c in enumerate(comps):
            if len(c) - ne[k] + nf[k] != 2:
                raise GraphError("rotation system is not planar (Euler characteristic != 2)")

    def face_area2(self, walk: Sequence[Dart]) -> Fraction:
        """Twice the signed area of a face walk (needs coordinates)."""
        if self.coords is None:
            raise GraphError("graph has no coordinates")
        tot = Fraction(0)
        for u, v in walk:
            (x1, y1), (x2, y2) = self.coords[u - 1], self.coords[v - 1]
            tot += x1 * y2 - x2 * y1
        return tot

    def outer(self) -> int:
        """1-based id of the unbounded face."""
        if self.outer_face is not None:
            return self.outer_face
        faces = self.faces()
        if not faces:
            raise GraphError("graph has no edges, hence no faces")
        if self.coords is not None:
            areas = [self.face_area2(w) for w in faces]
            return max(range(len(faces)), key=lambda k: (areas[k], -k)) + 1
        return max(range(len(faces)), key=lambda k: (len(faces[k]), -k)) + 1

    def face_vertices(self, face: int) -> list[int]:
        return [u for u, _ in self.faces()[face - 1]]

    def find_face_with_cyclic_order(self, vertices: Sequence[int], prefer: int | None = None) -> int | None:
        """Id of a face on whose walk ``vertices`` appear in this cyclic order."""
        faces = self.faces()
        order = list(range(1, len(faces) + 1))
        if prefer is not None:
            order.remove(prefer)
            order.insert(0, prefer)
        for f in order:
            if cyclic_subsequence(self.face_vertices(f), vertices):
                return f
        return None

    def with_outer(self, face: int) -> "PlaneGraph":
        return PlaneGraph(self.n_vertices, self.edges, self.rotation, face, self.coords)

    # -- derived graphs

    def subgraph(self, drop_vertices: Iterable[int] = (), drop_edges: Iterable[tuple[int, int]] = ()) -> "PlaneGraph":
        """Delete vertices and edges; remaining vertices are relabelled in order."""
        dv = set(drop_vertices)
        de = {_edge_key(u, v) for u, v in drop_edges}
        for v in dv:
            if not 1 <= v <= self.n_vertices:
                raise GraphError(f"vertex {v} does not exist")
        for e in de:
            if e not in self._weights:
                raise GraphError(f"edge {e} does not exist")
        keep = [v for v in range(1, self.n_vertices + 1) if v not in dv]
        new = {v: k for k, v in enumerate(keep, start=1)}
        edges = [
            (new[u], new[v], w)
            for u, v, w in self.edges
            if u in new and v in new and _edge_key(u, v) not in de
        ]
        rotation = [
            tuple(new[y] for y in self.rotation[v - 1] if y in new and _edge_key(v, y) not in de)
            for v in keep
        ]
        coords = None if self.coords is None else tuple(self.coords[v - 1] for v in keep)
        g = PlaneGraph(len(keep), tuple(edges), tuple(rotation), None, coords)
        if self.edges and g.edges:
            # deletions only merge faces, so a surviving dart of the old outer walk is still outer
            for u, v in self.faces()[self.outer() - 1]:
                if u in new and v in new and _edge_key(u, v) not in de:
                    dart = (new[u], new[v])
                    for f, walk in enumerate(g.faces(), start=1):
                        if dart in walk:
                            return g.with_outer(f)
        return g

    def reweighted(self, weights: dict[tuple[int, int], object]) -> "PlaneGraph":
        edges = tuple(
            (u, v, weights.get(_edge_key(u, v), w)) for u, v, w in self.edges
        )
        return PlaneGraph(self.n_vertices, edges, self.rotation, self.outer_face, self.coords)

    def bipartition(self) -> dict[int, int] | None:
        color = {}
        for comp in self.components():
            color[comp[0]] = 0
            stack = [comp[0]]
            while stack:
                x = stack.pop()
                for y in self.rotation[x - 1]:
                    if y not in color:
                        color[y] = 1 - color[x]
                        stack.append(y)
                    elif color[y] == color[x]:
                        return None
        return color


def cyclic_subsequence(walk: Sequence[int], targets: Sequence[int]) -> bool:
    """Do ``targets`` occur along the cyclic sequence ``walk`` in this order?"""
    m = len(walk)
    if not targets:
        return True
    if len(set(targets)) != len(targets):
        return False
    for start in (k for k, x in enumerate(walk) if x == targets[0]):
        pos = 0
        ok = True
        for t in targets[1:]:
            for step in range(pos + 1, m):
                if walk[(start + step) % m] == t:
                    pos = step
                    break
            else:
                ok = False
                break
        if ok:
            return True
    return False


# --- embedding from integer coordinates ---------------------------------------------------


def _half(dx, dy) -> int:
    # 0 for directions in [0, pi), 1 for [pi, 2pi)
    return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1


def _ccw_cmp(a, b) -> int:
    ha, hb = _half(*a), _half(*b)
    if ha != hb:
        return ha - hb
    cross = a[0] * b[1] - a[1] * b[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def from_coordinates(
    points: Sequence[tuple], edges: Iterable[tuple[int, int, object]]
) -> PlaneGraph:
    """Straight-line plane graph; rotations are read off exactly from the points."""
    pts = tuple((Fraction(x), Fraction(y)) for x, y in points)
    edges = tuple(edges)
    n = len(pts)
    nbrs = [[] for _ in range(n + 1)]
    for u, v, _ in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    rotation = []
    for v in range(1, n + 1):
        x0, y0 = pts[v - 1]
        key = cmp_to_key(lambda a, b: _ccw_cmp((pts[a - 1][0] - x0, pts[a - 1][1] - y0), (pts[b - 1][0] - x0, pts[b - 1][1] - y0)))
        ccw = sorted(nbrs[v], key=key)
        rotation.append(tuple(reversed(ccw)))
    return PlaneGraph(n, edges, tuple(rotation), None, pts)


def _orient(p, q, r) -> int:
    c = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (c > 0) - (c < 0)


def _on_segment(p, q, r) -> bool:
    """Is ``r`` strictly inside the segment ``pq`` (assuming collinearity)?"""
    return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1]) and r not in (p, q)


def _segments_clash(p1, p2, q1, q2) -> bool:
    """Do two segments meet anywhere other than a shared endpoint?"""
    shared = {p1, p2} & {q1, q2}
    if shared:
        # collinear overlap beyond the shared endpoint
        other_p = p2 if p1 in shared else p1
        other_q = q2 if q1 in shared else q1
        s = next(iter(shared))
        return _orient(s, other_p, other_q) == 0 and (
            (other_p[0] - s[0]) * (other_q[0] - s[0]) + (other_p[1] - s[1]) * (other_q[1] - s[1]) > 0
        )
    o1, o2 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    o3, o4 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    return (
        (o1 == 0 and _on_segment(p1, p2, q1))
        or (o2 == 0 and _on_segment(p1, p2, q2))
        or (o3 == 0 and _on_segment(q1, q2, p1))
        or (o4 == 0 and _on_segment(q1, q2, p2))
    )


def random_plane_graph(rng, n: int, box: int | None = None, extra: float = 0.5, weights=None) -> PlaneGraph:
    """Connected straight-line plane graph on ``n`` random integer points.

    Candidate segments are tried in random order and kept when they cross no
    kept segment and pass through no other point.  Insertion stops once the
    graph is connected and a further ``extra`` fraction of the remaining
    admissible segments has been offered.  ``weights`` is an optional
    callable returning the weight of each new edge.
    """
    if n < 1:
        raise GraphError("need at least one vertex")
    box = box if box is not None else max(3, 2 * n)
    if (box + 1) ** 2 < n:
        raise GraphError("box too small for the requested number of points")
    pts = []
    seen = set()
    while len(pts) < n:
        p = (rng.randint(0, box), rng.randint(0, box))
        if p not in seen:
            seen.add(p)
            pts.append(p)
    cand = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    rng.shuffle(cand)
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    kept = []
    pieces = n
    for u, v in cand:
        a, b = pts[u - 1], pts[v - 1]
        if any(_orient(a, b, c) == 0 and _on_segment(a, b, c) for c in pts):
            continue
        if any(_segments_clash(a, b, pts[x - 1], pts[y - 1]) for x, y in kept):
            continue
        if pieces == 1 and rng.random() > extra:
            continue
        kept.append((u, v))
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            pieces -= 1
    edges = [(u, v, weights() if weights else 1) for u, v in kept]
    return from_coordinates(pts, edges)


# --- generators ----------------------------------------------------------------------------


def grid(m: int, n: int, weight=1) -> PlaneGraph:
    """``m`` rows by ``n`` columns; vertex ``r*n + c + 1`` sits at ``(c, -r)``."""
    if m < 1 or n < 1:
        raise GraphError("grid dimensions must be positive")
    vid = lambda r, c: r * n + c + 1
    pts = [(c, -r) for r in range(m) for c in range(n)]
    edges = []
    for r in range(m):
        for c in range(n):
            if c + 1 < n:
                edges.append((vid(r, c), vid(r, c + 1), weight))
            if r + 1 < m:
                edges.append((vid(r, c), vid(r + 1, c), weight))
    return _with_outer(from_coordinates(pts, edges))


def triangular_patch(m: int, n: int, weight=1) -> PlaneGraph:
    """Grid with one diagonal in every square; not bipartite."""
    g = grid(m, n, weight)
    vid = lambda r, c: r * n + c + 1
    edges = list(g.edges)
    for r in range(m - 1):
        for c in range(n - 1):
            edges.append((vid(r, c), vid(r + 1, c + 1), weight))
    return _with_outer(from_coordinates(g.coords, edges))


def aztec(order: int, weight=1) -> PlaneGraph:
    """Dual graph of the Aztec diamond of the given order (``2n(n+1)`` vertices)."""
    if order < 0:
        raise GraphError("order must be nonnegative")
    cells = [
        (x, y)
        for y in range(order - 1, -order - 1, -1)
        for x in range(-order, order)
        if abs(2 * x + 1) + abs(2 * y + 1) <= 2 * order
    ]
    ids = {c: k for k, c in enumerate(cells, start=1)}
    edges = []
    for (x, y), k in ids.items():
        for nb in ((x + 1, y), (x, y - 1)):
            if nb in ids:
                edges.append((k, ids[nb], weight))
    pts = [(2 * x + 1, 2 * y + 1) for x, y in cells]
    return _with_outer(from_coordinates(pts, edges))


def cycle(n: int, weight=1) -> PlaneGraph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    # regular polygon vertices replaced by a convex lattice polygon keeps arithmetic exact
    pts = _convex_points(n)
    edges = [(k, k % n + 1, weight) for k in range(1, n + 1)]
    return _with_outer(from_coordinates(pts, edges))


def path(n: int, weight=1) -> PlaneGraph:
    pts = [(k, 0) for k in range(n)]
    edges = [(k, k + 1, weight) for k in range(1, n)]
    g = from_coordinates(pts, edges)
    return _with_outer(g) if edges else g


def _convex_points(n: int) -> list[tuple[int, int]]:
    # points on the parabola y = x^2 are in convex position; order them counterclockwise
    xs = list(range(n))
    lower = [(x, x * x) for x in xs]
    lower.sort()
    # walk left to right along the parabola, closing back over the top chord
    return [(x, -y) for x, y in reversed(lower)]


def _with_outer(g: PlaneGraph) -> PlaneGraph:
    if not g.edges:
        return g
    return g.with_outer(g.outer())


# --- text format ---------------------------------------------------------------------------


def format_graph(g: PlaneGraph) -> str:
    index = {}
    lines = [f"v {g.n_vertices}"]
    for k, (u, v, w) in enumerate(g.edges, start=1):
        index[_edge_key(u, v)] = k
        lines.append(f"e {u} {v} {format_scalar(w)}")
    for v in range(1, g.n_vertices + 1):
        es = " ".join(str(index[_edge_key(v, y)]) for y in g.rotation[v - 1])
        lines.append(f"r {v} {es}".rstrip())
    if g.edges:
        lines.append(f"outer {g.outer()}")
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> PlaneGraph:
    n = None
    edges = []
    rot = {}
    outer = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        ln = raw.split("#", 1)[0].split()
        if not ln:
            continue
        tag = ln[0]
        try:
            if tag == "v":
                n = int(ln[1])
            elif tag == "e":
                edges.append((int(ln[1]), int(ln[2]), Fraction(ln[3]) if len(ln) > 3 else Fraction(1)))
            elif tag == "r":
                rot[int(ln[1])] = [int(t) for t in ln[2:]]
            elif tag == "outer":
                outer = int(ln[1])
            else:
                raise GraphError(f"line {lineno}: unknown record {tag!r}")
        except (IndexError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphError(f"line {lineno}: malformed {tag!r} record") from None
    if n is None:
        raise GraphError("missing 'v n' line")
    rotation = []
    for v in range(1, n + 1):
        es = rot.get(v, [])
        nb = []
        for k in es:
            if not 1 <= k <= len(edges):
                raise GraphError(f"rotation at {v} names unknown edge {k}")
            a, b, _ = edges[k - 1]
            if v not in (a, b):
                raise GraphError(f"edge {k} is not incident to vertex {v}")
            nb.append(b if a == v else a)
        rotation.append(tuple(nb))
    return PlaneGraph(n, tuple(edges), tuple(rotation), outer)
