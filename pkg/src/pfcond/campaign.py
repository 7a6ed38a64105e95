"""Seeded verification campaigns over the identity catalogue.

Every trial draws a fresh instance from ``random.Random`` seeded by a hash of
the root seed, the identity name and the trial index, so trials are
independent, can run in any order, and replay exactly.  A failing instance is
serialised as JSON and can be fed back through :func:`replay`.
"""

from __future__ import annotations

import hashlib
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from . import identities as ids
from . import matching as mt
from .graph import PlaneGraph, _edge_key, aztec, format_graph, grid, parse_graph, triangular_patch
from .matrix import Matrix, PairSet, SkewMatrix, format_scalar, to_scalar

PF_SIZES = (4, 6, 8, 10)
DET_SIZES = (3, 4, 5, 6)
GRAPH_SIZES = (12, 16, 20, 24)
DEFAULT_ENTRY_BOUND = 9


class UsageError(ValueError):
    pass


def trial_seed(root: int, identity: str, trial: int) -> int:
    h = hashlib.blake2b(f"{root}:{identity}:{trial}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


# --- random building blocks ------------------------------------------------------


def rand_scalar(rng: random.Random, bound: int) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.choice((1, 1, 1, 2, 3)))


def rand_skew(rng: random.Random, n: int, bound: int) -> SkewMatrix:
    grid_ = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = rand_scalar(rng, bound)
            grid_[i][j] = x
            grid_[j][i] = -x
    return SkewMatrix(grid_)


def rand_matrix(rng: random.Random, n: int, bound: int) -> Matrix:
    return Matrix([[rand_scalar(rng, bound) for _ in range(n)] for _ in range(n)])


def rand_weights(rng: random.Random, G: PlaneGraph, bound: int) -> PlaneGraph:
    return G.reweighted(
        {_edge_key(u, v): Fraction(rng.randint(1, max(bound, 1)), rng.choice((1, 2, 3))) for u, v, _ in G.edges}
    )


def _subset(rng, pool, size):
    return sorted(rng.sample(list(pool), size))


# --- graph instances ---------------------------------------------------------------------


def graph_shapes(n: int, bipartite_only: bool) -> list[tuple[str, Callable[[], PlaneGraph]]]:
    out = []
    for r in range(2, n + 1):
        if n % r == 0 and r <= n // r:
            c = n // r
            out.append((f"grid {r}x{c}", lambda r=r, c=c: grid(r, c)))
            if not bipartite_only:
                out.append((f"triangular {r}x{c}", lambda r=r, c=c: triangular_patch(r, c)))
    for order in range(1, 4):
        if 2 * order * (order + 1) == n:
            out.append((f"aztec {order}", lambda order=order: aztec(order)))
    return out


def rand_graph(rng: random.Random, n: int, bound: int, bipartite_only: bool = False) -> PlaneGraph:
    if n % 2:
        raise UsageError("graph identities need an even vertex count")
    if n > mt.ORACLE_MAX_VERTICES:
        raise UsageError(f"graph identities use the oracle, capped at {mt.ORACLE_MAX_VERTICES} vertices")
    shapes = graph_shapes(n, bipartite_only)
    if not shapes:
        raise UsageError(f"no built-in graph family has {n} vertices")
    _, make = rng.choice(shapes)
    return rand_weights(rng, make(), bound)


def _face_cycle(G: PlaneGraph, f: int) -> list[int]:
    """Vertices met once on the walk of face ``f``, in walk order."""
    vs = G.face_vertices(f)
    return [v for v in vs if vs.count(v) == 1]


def _pick_face(rng, G: PlaneGraph, need: int) -> int:
    faces = [f for f in range(1, len(G.faces()) + 1) if len(_face_cycle(G, f)) >= need]
    if not faces:
        raise UsageError(f"no face has {need} distinct boundary vertices")
    outer = G.outer()
    if outer in faces and rng.random() < 0.75:
        return outer
    return rng.choice(faces)


def cyclic_vertices(rng, G: PlaneGraph, m: int, face: int | None = None) -> list[int]:
    """``m`` vertices in cyclic order on one face, from a random starting point."""
    f = _pick_face(rng, G, m) if face is None else face
    cyc = _face_cycle(G, f)
    pos = sorted(rng.sample(range(len(cyc)), m))
    picked = [cyc[p] for p in pos]
    shift = rng.randrange(m)
    picked = picked[shift:] + picked[:shift]
    if rng.random() < 0.5:
        picked.reverse()
    return picked


def _independent_darts(rng, darts, k):
    for _ in range(100):
        chosen = [darts[p] for p in sorted(rng.sample(range(len(darts)), k))]
        flat = [x for d in chosen for x in d]
        if len(set(flat)) == 2 * k:
            shift = rng.randrange(k)
            return chosen[shift:] + chosen[:shift]
    return None


def boundary_edges(rng, G: PlaneGraph, k: int, face: int | None = None) -> list[tuple[int, int]]:
    """``k`` independent edges on one face, oriented and listed in walk order."""
    if face is not None:
        faces = [face]
    else:
        faces = list(range(1, len(G.faces()) + 1))
        rng.shuffle(faces)
        if rng.random() < 0.75:
            faces.remove(G.outer())
            faces.insert(0, G.outer())
    for f in faces:
        walk = G.faces()[f - 1]
        vs = [u for u, _ in walk]
        darts = [d for d in walk if vs.count(d[0]) == 1 and vs.count(d[1]) == 1]
        if len(darts) < k:
            continue
        chosen = _independent_darts(rng, darts, k)
        if chosen is not None:
            return chosen
    raise UsageError(f"no face carries {k} independent edges")


def propp_instance(rng, G: PlaneGraph) -> dict:
    quads = [f for f, w in enumerate(G.faces(), start=1) if len(w) == 4 and len({u for u, _ in w}) == 4]
    if not quads:
        raise UsageError("graph has no 4-cycle face")
    a, b, c, d = cyclic_vertices(rng, G, 4, rng.choice(quads))
    return {"G": G, "a": a, "b": b, "c": c, "d": d}


def kuo_instance(rng, G: PlaneGraph, case: int) -> dict:
    color = G.bipartition()
    for _ in range(500):
        a, b, c, d = cyclic_vertices(rng, G, 4)
        ok = (
            color[a] == color[c] != color[b] == color[d]
            if case == 1
            else color[a] == color[b] != color[c] == color[d]
        )
        if ok:
            return {"G": G, "a": a, "b": b, "c": c, "d": d, "case": case}
    raise UsageError("no vertices with the required colour pattern found")


def vertex_instance(rng, G: PlaneGraph) -> dict:
    a, b, c, d = cyclic_vertices(rng, G, 4)
    return {"G": G, "a": a, "b": b, "c": c, "d": d}


def yyz_instance(rng, G: PlaneGraph, k: int) -> dict:
    order = cyclic_vertices(rng, G, 2 * k)
    return {"G": G, "A_set": order[0::2], "B_set": order[1::2], "j": rng.randint(1, k)}


def edge_instance(rng, G: PlaneGraph, k: int) -> dict:
    return {"G": G, "X": boundary_edges(rng, G, k), "j": rng.randint(1, k)}


def same_sign_instance(rng, G: PlaneGraph) -> dict:
    a, b, c, d = cyclic_vertices(rng, G, 4, G.outer())
    return {"G": G, "a": a, "b": b, "c": c, "d": d}


# --- matrix instances ----------------------------------------------------------------------


def skew_pairs(rng, n: int, k: int) -> PairSet:
    all_pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return PairSet(rng.sample(all_pairs, min(k, len(all_pairs))))


def general_pairs(rng, n: int, k: int) -> PairSet:
    all_pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    return PairSet(rng.sample(all_pairs, min(k, len(all_pairs))), skew=False)


def interleaved_pairs(rng, n: int, k: int) -> PairSet:
    if 2 * k > n:
        raise UsageError(f"an interleaved set of {k} pairs needs n >= {2 * k}")
    while True:
        flat = sorted(rng.sample(range(1, n + 1), 2 * k))
        pairs = list(zip(flat[0::2], flat[1::2]))
        if len({(i + j) % 2 for i, j in pairs}) == 1:
            return PairSet(pairs)


def _odd_subset(rng, n):
    size = rng.choice([s for s in range(1, n + 1, 2)])
    return _subset(rng, range(1, n + 1), size)


def gen_wenzel(rng, n, k, bound):
    return {"A": rand_skew(rng, n, bound), "I1": _odd_subset(rng, n), "I2": _odd_subset(rng, n)}


def gen_expansion(rng, n, k, bound):
    p = max(1, min(k, n // 2))
    beta = _subset(rng, range(1, n + 1), 2 * p)
    rest = [x for x in range(1, n + 1) if x not in beta]
    alpha = _subset(rng, rest, 2 * rng.randint(0, len(rest) // 2))
    return {"A": rand_skew(rng, n, bound), "alpha": alpha, "beta": beta, "s": rng.randint(1, 2 * p)}


def gen_plucker4(rng, n, k, bound):
    i, j, kk, l = _subset(rng, range(1, n + 1), 4)
    return {"A": rand_skew(rng, n, bound), "i": i, "j": j, "k": kk, "l": l}


def gen_dodgson(rng, n, k, bound):
    return {"M": rand_matrix(rng, n, bound)}


def gen_godsil(rng, n, k, bound):
    return {"M": rand_matrix(rng, n, bound)}


def gen_lemma24(rng, n, k, bound):
    A = rand_skew(rng, n, bound)
    i, j = rng.sample(range(1, n + 1), 2)
    literal = rng.random() < 0.5
    if literal:
        r = Fraction(rng.randint(1, bound), rng.randint(1, 3))
        x = r * r if rng.random() < 0.5 else -r * r
        rows = [list(row) for row in A.rows]
        rows[i - 1][j - 1], rows[j - 1][i - 1] = x, -x
        A = SkewMatrix(rows)
    return {"A": A, "i": i, "j": j, "literal": literal}


def gen_mask(rng, n, k, bound):
    E = skew_pairs(rng, n, k)
    return {"A": rand_skew(rng, n, bound), "E": E, "p": rng.randint(1, len(E))}


def gen_cor33(rng, n, k, bound):
    return {"A": rand_skew(rng, n, bound), "E": interleaved_pairs(rng, n, min(k, n // 2))}


def gen_det_mask(rng, n, k, bound):
    E = general_pairs(rng, n, k)
    return {"M": rand_matrix(rng, n, bound), "E": E, "p": rng.randint(1, len(E))}


def gen_propp(rng, n, k, bound):
    return propp_instance(rng, rand_graph(rng, n, bound, bipartite_only=True))


def gen_kuo(rng, n, k, bound):
    case = k if k in (1, 2) else rng.randint(1, 2)
    return kuo_instance(rng, rand_graph(rng, n, bound, bipartite_only=True), case)


def gen_kenyon(rng, n, k, bound):
    return vertex_instance(rng, rand_graph(rng, n, bound))


def gen_yyz(rng, n, k, bound):
    return yyz_instance(rng, rand_graph(rng, n, bound), max(2, min(k, mt.YYZ_MAX_K, n // 2)))


def gen_edge(rng, n, k, bound):
    return edge_instance(rng, rand_graph(rng, n, bound), max(2, k))


def gen_same_sign(rng, n, k, bound):
    return same_sign_instance(rng, rand_graph(rng, n, bound))


def _same_sign_residual(G, a, b, c, d):
    return Fraction(0) if mt.same_sign_check(G, a, b, c, d) else Fraction(1)


# --- catalogue -----------------------------------------------------------------------------


@dataclass(frozen=True)
class Identity:
    name: str
    kind: str  # "pf", "det" or "graph"
    generate: Callable
    evaluate: Callable
    sizes: tuple[int, ...]
    k_range: tuple[int, int] = (1, 4)
    schema: dict = field(default_factory=dict)


_PF = {"A": "skew"}
_DET = {"M": "matrix"}
_V4 = {"G": "graph", "a": "int", "b": "int", "c": "int", "d": "int"}

CATALOGUE: dict[str, Identity] = {
    ident.name: ident
    for ident in [
        Identity("wenzel", "pf", gen_wenzel, ids.residual_wenzel, PF_SIZES, (1, 1),
                 {**_PF, "I1": "indices", "I2": "indices"}),
        Identity("expansion", "pf", gen_expansion, ids.residual_expansion, PF_SIZES, (1, 4),
                 {**_PF, "alpha": "indices", "beta": "indices", "s": "int"}),
        Identity("plucker4", "pf", gen_plucker4, ids.residual_plucker4, PF_SIZES, (1, 1),
                 {**_PF, "i": "int", "j": "int", "k": "int", "l": "int"}),
        Identity("dodgson", "det", gen_dodgson, ids.residual_dodgson, DET_SIZES, (1, 1), dict(_DET)),
        Identity("godsil", "det", gen_godsil, ids.residual_godsil, DET_SIZES, (1, 1), dict(_DET)),
        Identity("lemma24", "pf", gen_lemma24, ids.residual_lemma24, PF_SIZES, (1, 1),
                 {**_PF, "i": "int", "j": "int", "literal": "bool"}),
        Identity("thm31", "pf", gen_mask, ids.residual_thm31, PF_SIZES, (1, 4),
                 {**_PF, "E": "pairs", "p": "int"}),
        Identity("cor32", "pf", gen_mask, ids.residual_cor32, PF_SIZES, (1, 4),
                 {**_PF, "E": "pairs", "p": "int"}),
        Identity("cor33", "pf", gen_cor33, ids.residual_cor33, PF_SIZES, (1, 4), {**_PF, "E": "pairs"}),
        Identity("thm42", "det", gen_det_mask, ids.residual_thm42, DET_SIZES, (1, 4),
                 {**_DET, "E": "general_pairs", "p": "int"}),
        Identity("thm43", "det", gen_det_mask, ids.residual_thm43, DET_SIZES, (1, 4),
                 {**_DET, "E": "general_pairs", "p": "int"}),
        Identity("cor44", "det", gen_det_mask, ids.residual_cor44_det, DET_SIZES, (1, 4),
                 {**_DET, "E": "general_pairs", "p": "int"}),
        Identity("propp", "graph", gen_propp, mt.residual_propp, GRAPH_SIZES, (1, 1), dict(_V4)),
        Identity("kuo", "graph", gen_kuo, mt.residual_kuo, GRAPH_SIZES, (1, 2), {**_V4, "case": "int"}),
        Identity("kenyon", "graph", gen_kenyon, mt.residual_kenyon, GRAPH_SIZES, (1, 1), dict(_V4)),
        Identity("yyz", "graph", gen_yyz, mt.residual_yyz_vertex, GRAPH_SIZES, (2, 3),
                 {"G": "graph", "A_set": "indices_ordered", "B_set": "indices_ordered", "j": "int"}),
        Identity("edge_condensation", "graph", gen_edge, mt.residual_edge_condensation, GRAPH_SIZES, (2, 3),
                 {"G": "graph", "X": "edges", "j": "int"}),
        Identity("same_sign", "graph", gen_same_sign, _same_sign_residual, GRAPH_SIZES, (1, 1), dict(_V4)),
    ]
}


# --- serialisation ---------------------------------------------------------------------------

_ENCODE = {
    "int": int,
    "bool": bool,
    "indices": list,
    "indices_ordered": list,
    "skew": lambda A: [[format_scalar(x) for x in row] for row in A.rows],
    "matrix": lambda M: [[format_scalar(x) for x in row] for row in M.rows],
    "pairs": lambda E: [list(p) for p in E],
    "general_pairs": lambda E: [list(p) for p in E],
    "edges": lambda X: [list(e) for e in X],
    "graph": format_graph,
}

_DECODE = {
    "int": int,
    "bool": bool,
    "indices": lambda v: [int(x) for x in v],
    "indices_ordered": lambda v: [int(x) for x in v],
    "skew": lambda v: SkewMatrix([[to_scalar(x) for x in row] for row in v]),
    "matrix": lambda v: Matrix([[to_scalar(x) for x in row] for row in v]),
    "pairs": lambda v: PairSet([tuple(p) for p in v]),
    "general_pairs": lambda v: PairSet([tuple(p) for p in v], skew=False),
    "edges": lambda v: [tuple(e) for e in v],
    "graph": parse_graph,
}


def _residual_text(r) -> str:
    if isinstance(r, tuple):
        return ", ".join(format_scalar(x) for x in r)
    return format_scalar(r)


def _is_zero(r) -> bool:
    return all(x == 0 for x in r) if isinstance(r, tuple) else r == 0


@dataclass
class ResidualReport:
    identity: str
    root_seed: int
    trial: int
    trial_seed: int
    n: int
    k: int
    params: dict
    residual: object

    def to_json(self) -> str:
        schema = CATALOGUE[self.identity].schema
        body = {
            "identity": self.identity,
            "root_seed": self.root_seed,
            "trial": self.trial,
            "trial_seed": self.trial_seed,
            "n": self.n,
            "k": self.k,
            "params": {name: {"type": schema[name], "value": _ENCODE[schema[name]](v)} for name, v in self.params.items()},
            "residual": None if self.residual is None else _residual_text(self.residual),
        }
        return json.dumps(body, indent=1, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "ResidualReport":
        body = json.loads(text)
        if body.get("identity") not in CATALOGUE:
            raise UsageError(f"unknown identity {body.get('identity')!r}")
        params = {name: _DECODE[spec["type"]](spec["value"]) for name, spec in body["params"].items()}
        return ResidualReport(
            body["identity"], body["root_seed"], body["trial"], body["trial_seed"], body["n"], body["k"],
            params, body.get("residual"),
        )


# --- running ------------------------------------------------------------------------------------


@dataclass(frozen=True)
class VerifyConfig:
    identity: str
    n: int | None = None
    k: int | None = None
    trials: int = 100
    seed: int = 0
    entry_bound: int = DEFAULT_ENTRY_BOUND

    def validate(self) -> Identity:
        if self.identity not in CATALOGUE:
            raise UsageError(f"unknown identity {self.identity!r}; choose from {', '.join(CATALOGUE)}")
        ident = CATALOGUE[self.identity]
        if self.trials < 1:
            raise UsageError("trials must be at least 1")
        if self.entry_bound < 1:
            raise UsageError("entry bound must be positive")
        if self.n is not None:
            if ident.kind in ("pf", "graph") and self.n % 2:
                raise UsageError(f"{self.identity} needs an even n")
            minimum = {"pf": 4, "det": 2, "graph": 4}[ident.kind]
            if self.n < minimum:
                raise UsageError(f"{self.identity} needs n >= {minimum}")
            if ident.kind == "pf" and self.n > 16:
                raise UsageError("Pfaffian identities are capped at n = 16")
        if self.k is not None and self.k < 1:
            raise UsageError("k must be positive")
        return ident


def make_instance(cfg: VerifyConfig, trial: int) -> ResidualReport:
    ident = CATALOGUE[cfg.identity]
    ts = trial_seed(cfg.seed, cfg.identity, trial)
    rng = random.Random(ts)
    n = cfg.n if cfg.n is not None else rng.choice(ident.sizes)
    k = cfg.k if cfg.k is not None else rng.randint(*ident.k_range)
    params = ident.generate(rng, n, k, cfg.entry_bound)
    return ResidualReport(cfg.identity, cfg.seed, trial, ts, n, k, params, None)


def evaluate(report: ResidualReport) -> ResidualReport:
    report.residual = CATALOGUE[report.identity].evaluate(**report.params)
    return report


def _run_trial(args) -> ResidualReport:
    cfg, trial = args
    return evaluate(make_instance(cfg, trial))


@dataclass
class CampaignResult:
    config: VerifyConfig
    passed: int
    failure: ResidualReport | None

    def summary(self) -> str:
        c = self.config
        head = f"{c.identity}: seed={c.seed} trials={c.trials} n={c.n if c.n is not None else 'mixed'} " \
               f"k={c.k if c.k is not None else 'mixed'} entry_bound={c.entry_bound}"
        if self.failure is None:
            return f"{head}\nPASS {self.passed}/{c.trials} residuals zero"
        f = self.failure
        return (
            f"{head}\nFAIL at trial {f.trial} (trial seed {f.trial_seed}) after {self.passed} passes; "
            f"residual {_residual_text(f.residual)}"
        )


def run_campaign(cfg: VerifyConfig, jobs: int = 1) -> CampaignResult:
    """Run trials in index order and stop at the first nonzero residual.

    With ``jobs > 1`` trials are evaluated in a process pool; results are
    still consumed in trial order so the outcome does not depend on timing.
    """
    cfg.validate()
    tasks = ((cfg, t) for t in range(cfg.trials))
    passed = 0
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for rep in pool.map(_run_trial, tasks, chunksize=8):
                if not _is_zero(rep.residual):
                    pool.shutdown(cancel_futures=True)
                    return CampaignResult(cfg, passed, rep)
                passed += 1
        return CampaignResult(cfg, passed, None)
    for task in tasks:
        rep = _run_trial(task)
        if not _is_zero(rep.residual):
            return CampaignResult(cfg, passed, rep)
        passed += 1
    return CampaignResult(cfg, passed, None)


def replay(text: str) -> ResidualReport:
    """Re-evaluate a serialised instance."""
    return evaluate(ResidualReport.from_json(text))


def iter_instances(cfg: VerifyConfig) -> Iterable[ResidualReport]:
    for t in range(cfg.trials):
        yield make_instance(cfg, t)
