"""Graphs, graph readers, and the catalog of graph problems.

Every catalog constructor returns a ``ProblemInstance`` holding the discrete
formulation (a pair of set functions f, g with the optimization sense), the
continuous reformulation (closed-form F, G) and a ``RatioProblem`` for the
iterative solvers.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any, Callable, Optional

import numpy as np

from . import lovasz
from .setfn import DomainError, SetFunction, pair_decode, popcounts, ternary_weights


class GraphFormatError(ValueError):
    """Malformed graph input; the message carries the line number."""


class Graph:
    """Simple weighted undirected graph, optionally signed.

    Edges are stored as (i, j, w, s) with i < j, w > 0 and s in {+1, -1}.
    """

    def __init__(self, n: int, edges=(), name: str = ""):
        if n < 1:
            raise ValueError("graph needs at least one vertex")
        self.n = int(n)
        self.name = name
        seen = {}
        for e in edges:
            i, j = int(e[0]), int(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0
            s = int(e[3]) if len(e) > 3 else 1
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i},{j}) outside 0..{n - 1}")
            if not w > 0:
                raise ValueError("edge weights must be positive")
            if s not in (1, -1):
                raise ValueError("edge signs must be +1 or -1")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen[key] = (w, s)
        self.edges = [(i, j, w, s) for (i, j), (w, s) in sorted(seen.items())]
        self._adj = [[] for _ in range(n)]
        for i, j, w, s in self.edges:
            self._adj[i].append(j)
            self._adj[j].append(i)
        for a in self._adj:
            a.sort()

    # -- basic accessors
    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_arrays(self):
        I = np.array([e[0] for e in self.edges], dtype=np.int64)
        J = np.array([e[1] for e in self.edges], dtype=np.int64)
        W = np.array([e[2] for e in self.edges], dtype=float)
        return I, J, W

    def signs(self) -> np.ndarray:
        return np.array([e[3] for e in self.edges], dtype=np.int64)

    @property
    def is_signed(self) -> bool:
        return any(e[3] < 0 for e in self.edges)

    @property
    def is_unweighted(self) -> bool:
        return all(e[2] == 1.0 for e in self.edges)

    def neighbors(self, i: int) -> list[int]:
        return self._adj[i]

    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n)
        for i, j, w, _ in self.edges:
            d[i] += w
            d[j] += w
        return d

    def vol(self, A) -> float:
        d = self.degrees()
        return float(sum(d[i] for i in A))

    def adjacency(self) -> np.ndarray:
        M = np.zeros((self.n, self.n))
        for i, j, w, _ in self.edges:
            M[i, j] = M[j, i] = w
        return M

    def is_connected(self) -> bool:
        seen, stack = {0}, [0]
        while stack:
            v = stack.pop()
            for u in self._adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.n

    def _wcast(self, t):
        # integer tables for unit-weight graphs keep everything exact
        if self.is_unweighted:
            return np.rint(t).astype(np.int64)
        return t

    # -- vectorized set-function tables over all 2^n masks
    def _bits(self):
        masks = np.arange(1 << self.n, dtype=np.int64)
        return [(masks >> i) & 1 for i in range(self.n)]

    def cut_table(self, which: str = "all") -> np.ndarray:
        """w(E(A, V-A)) for every mask; which in {all, pos, neg} by edge sign."""
        b = self._bits()
        t = np.zeros(1 << self.n)
        for i, j, w, s in self.edges:
            if which == "pos" and s < 0 or which == "neg" and s > 0:
                continue
            t += w * (b[i] != b[j])
        return self._wcast(t)

    def inner_table(self, which: str = "all") -> np.ndarray:
        """w(E(A)) (edges with both ends in A) for every mask."""
        b = self._bits()
        t = np.zeros(1 << self.n)
        for i, j, w, s in self.edges:
            if which == "pos" and s < 0 or which == "neg" and s > 0:
                continue
            t += w * (b[i] & b[j])
        return self._wcast(t)

    def vol_table(self) -> np.ndarray:
        b = self._bits()
        d = self.degrees()
        t = np.zeros(1 << self.n)
        for i in range(self.n):
            t += d[i] * b[i]
        return self._wcast(t)

    def between_table(self, pos: np.ndarray, neg: np.ndarray) -> np.ndarray:
        """w(E(A, B)) for arrays of disjoint masks."""
        t = np.zeros(pos.shape)
        for i, j, w, _ in self.edges:
            ai, aj = (pos >> i) & 1, (pos >> j) & 1
            bi, bj = (neg >> i) & 1, (neg >> j) & 1
            t += w * ((ai & bj) | (aj & bi))
        return self._wcast(t)

    def vertex_boundary_table(self, kind: str = "ver") -> np.ndarray:
        """Vertex-boundary sizes of every mask A.

        int: vertices of A with a neighbour outside A
        ext: vertices outside A with a neighbour in A
        ver: vertices incident to a cut edge (int + ext)
        """
        b = self._bits()
        size = 1 << self.n
        touch_out = [np.zeros(size, dtype=np.int64) for _ in range(self.n)]
        touch_in = [np.zeros(size, dtype=np.int64) for _ in range(self.n)]
        for i in range(self.n):
            for j in self._adj[i]:
                touch_out[i] |= 1 - b[j]
                touch_in[i] |= b[j]
        inner = sum(b[i] & touch_out[i] for i in range(self.n))
        outer = sum((1 - b[i]) & touch_in[i] for i in range(self.n))
        if kind == "int":
            return inner
        if kind == "ext":
            return outer
        if kind == "ver":
            return inner + outer
        raise ValueError(f"unknown vertex boundary {kind!r}")

    # -- derived graphs
    def induced(self, vertices) -> tuple["Graph", list[int]]:
        vs = sorted(vertices)
        pos = {v: r for r, v in enumerate(vs)}
        es = [(pos[i], pos[j], w, s) for i, j, w, s in self.edges if i in pos and j in pos]
        return Graph(len(vs), es), vs

    def line_graph(self) -> "Graph":
        es = []
        for a, b in itertools.combinations(range(self.m), 2):
            if set(self.edges[a][:2]) & set(self.edges[b][:2]):
                es.append((a, b))
        return Graph(max(self.m, 1), es)

    def power(self, k: int) -> "Graph":
        """Graph joining vertices at distance 1..k."""
        D = self.distances()
        es = [(i, j) for i in range(self.n) for j in range(i + 1, self.n) if D[i, j] <= k]
        return Graph(self.n, es)

    def distances(self) -> np.ndarray:
        D = np.full((self.n, self.n), np.inf)
        for s in range(self.n):
            D[s, s] = 0
            frontier = [s]
            while frontier:
                nxt = []
                for v in frontier:
                    for u in self._adj[v]:
                        if D[s, u] == np.inf:
                            D[s, u] = D[s, v] + 1
                            nxt.append(u)
                frontier = nxt
        return D

    def switch(self, v: int) -> "Graph":
        """Negate the signs of all edges at v."""
        es = [(i, j, w, -s if v in (i, j) else s) for i, j, w, s in self.edges]
        return Graph(self.n, es, self.name)

    def to_json(self) -> dict:
        return {"n": self.n, "name": self.name,
                "edges": [[i, j, w, s] for i, j, w, s in self.edges]}

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m}{', ' + self.name if self.name else ''})"


# ---------------------------------------------------------------------------
# readers


def parse_edge_list(text: str, base: int = 0, n: Optional[int] = None, name: str = "") -> Graph:
    """Whitespace separated ``u v [w] [s]`` lines; ``#`` starts a comment."""
    edges, seen, top = [], set(), -1
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 2 or len(parts) > 4:
            raise GraphFormatError(f"line {lineno}: expected 'u v [w] [s]'")
        try:
            u, v = int(parts[0]) - base, int(parts[1]) - base
            w = float(parts[2]) if len(parts) > 2 else 1.0
            s = int(float(parts[3])) if len(parts) > 3 else 1
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-numeric field") from None
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: vertex index below base {base}")
        if u == v:
            raise GraphFormatError(f"line {lineno}: loop at vertex {u + base}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"line {lineno}: duplicate edge")
        if not w > 0:
            raise GraphFormatError(f"line {lineno}: weight must be positive")
        if s not in (1, -1):
            raise GraphFormatError(f"line {lineno}: sign must be 1 or -1")
        seen.add(key)
        edges.append((u, v, w, s))
        top = max(top, u, v)
    size = top + 1 if n is None else n
    if size < 1:
        raise GraphFormatError("empty graph")
    return Graph(size, edges, name)


def parse_dimacs(text: str, name: str = "") -> Graph:
    """DIMACS ``p edge n m`` header with 1-based ``e u v`` lines."""
    n, edges, seen = None, [], set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if len(parts) < 4 or parts[1] not in ("edge", "col"):
                raise GraphFormatError(f"line {lineno}: bad problem line")
            n = int(parts[2])
        elif parts[0] == "e":
            if n is None:
                raise GraphFormatError(f"line {lineno}: edge before problem line")
            if len(parts) < 3:
                raise GraphFormatError(f"line {lineno}: bad edge line")
            u, v = int(parts[1]) - 1, int(parts[2]) - 1
            if u == v:
                raise GraphFormatError(f"line {lineno}: loop")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"line {lineno}: vertex out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(f"line {lineno}: duplicate edge")
            seen.add(key)
            edges.append(key)
        else:
            raise GraphFormatError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise GraphFormatError("missing problem line")
    return Graph(n, edges, name)


BUNDLED = ("k3", "p3", "p4", "c4", "c5", "k4", "petersen", "neg_k3")


def bundled_graph(name: str) -> Graph:
    stem = name[:-3] if name.endswith(".el") else name
    if stem not in BUNDLED:
        raise KeyError(f"no bundled graph {name!r}")
    text = resources.files("lovx").joinpath("data", f"{stem}.el").read_text()
    return parse_edge_list(text, name=stem)


def read_graph(source: str, fmt: Optional[str] = None, base: int = 0) -> Graph:
    """Read a bundled graph name, a file path, or literal text."""
    stem = source[:-3] if source.endswith(".el") else source
    if stem in BUNDLED and not os.path.exists(source):
        return bundled_graph(stem)
    if os.path.exists(source):
        with open(source) as fh:
            text = fh.read()
        name = os.path.splitext(os.path.basename(source))[0]
        if fmt is None:
            fmt = "dimacs" if source.endswith((".col", ".dimacs")) else "edge-list"
    else:
        text, name = source, ""
        if fmt is None:
            fmt = "dimacs" if text.lstrip().startswith(("p ", "c ")) else "edge-list"
    if fmt == "dimacs":
        return parse_dimacs(text, name)
    if fmt == "edge-list":
        return parse_edge_list(text, base=base, name=name)
    raise ValueError(f"unknown format {fmt!r}")


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2), f"k{n}")


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)], f"p{n}")


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)], f"c{n}")


def random_graph(n: int, p: float, rng: np.random.Generator, signed: bool = False,
                 connected: bool = True, weighted: bool = False) -> Graph:
    """Erdos-Renyi graph, resampled until connected when asked."""
    while True:
        es = []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < p:
                    w = float(rng.integers(1, 4)) if weighted else 1.0
                    s = int(rng.choice([-1, 1])) if signed else 1
                    es.append((i, j, w, s))
        g = Graph(n, es)
        if not connected or g.is_connected():
            return g


# ---------------------------------------------------------------------------
# problem catalog


@dataclass
class ProblemInstance:
    """A graph problem as a ratio of set functions plus its continuous form.

    The discrete problem is  opt f(a)/g(a)  over arguments a with g(a) > 0
    (and in ``family`` when given).  The reported quantity is
    ``scale * ratio + offset``.  ``F`` and ``G`` are closed forms of the
    extensions (batch callables); ``components`` = (f1, f2, g1, g2) wires
    the problem into the iterative solvers.
    """
    problem_id: str
    graph: Graph
    params: dict
    f: SetFunction
    g: SetFunction
    sense: str
    family: Optional[np.ndarray] = None
    F: Optional[Callable] = None
    G: Optional[Callable] = None
    domain: Optional[Callable] = None
    sampler: Optional[Callable] = None
    offset: Any = 0
    scale: Any = 1
    components: Optional[tuple] = None
    generalized: bool = False
    extras: dict = field(default_factory=dict)
    exact_oracle: Optional[Callable] = None
    ground: Optional[list] = None

    @property
    def kind(self) -> str:
        return self.f.kind if self.f is not None else "partition"

    @property
    def dim(self) -> int:
        return self.f.n * self.f.k if self.f is not None else self.graph.n

    def value(self, ratio):
        return self.scale * ratio + self.offset

    def discrete_optimum(self):
        """(reported value, OracleResult) by enumeration."""
        from .oracle import optimize_subsets
        if self.exact_oracle is not None:
            res = self.exact_oracle()
        else:
            res = optimize_subsets(self.f, self.g, self.sense, family_mask=self.family)
        return self.value(res.optimum), res

    def feasible_indices(self) -> np.ndarray:
        keep = self.g.table() > 0
        keep[0] = False
        if self.family is not None:
            keep &= self.family
        return np.nonzero(keep)[0]

    def indicator_matrix(self, idx) -> np.ndarray:
        from .setfn import decode, indicator
        f = self.f
        return np.array([indicator(decode(f.kind, f.n, f.k, int(i)), f.n, f.kind) for i in idx])

    def sample_points(self, rng: np.random.Generator, m: int) -> np.ndarray:
        if self.sampler is not None:
            return self.sampler(rng, m)
        return rng.standard_normal((m, self.dim))

    def ratio_problem(self, prox_weight: float = 0.0, ball: str = "linf"):
        from .fracprog import RatioProblem
        if self.components is None:
            raise NotImplementedError(f"{self.problem_id} has no iterative formulation")
        f1, f2, g1, g2 = self.components
        return RatioProblem(self.dim, f1, f2, g1, g2, sense=self.sense, ball=ball,
                            prox_weight=prox_weight, f=self.f, g=self.g, family=self.family,
                            offset=self.offset, name=self.problem_id)

    def to_json(self) -> dict:
        return {"problem": self.problem_id, "graph": self.graph.name or None,
                "n": self.graph.n, "m": self.graph.m, "kind": self.kind, "dim": self.dim,
                "sense": self.sense, "params": {k: _plain(v) for k, v in self.params.items()},
                "ground": self.ground}


def _plain(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (list, tuple)):
        return [_plain(u) for u in v]
    if isinstance(v, np.ndarray):
        return v.tolist()
    return v


# -- small helpers


def _batch(fn):
    def F(x):
        X = np.asarray(x, dtype=float)
        if X.ndim == 1:
            return fn(X[None, :])[0]
        return fn(X)
    return F


def _const_table(size: int, c) -> np.ndarray:
    t = np.full(size, c)
    t[0] = 0
    return t


def _pair_tables(n: int):
    pos, neg = pair_decode(n)
    return pos, neg, pos | neg


def _components(graph: Graph, which: str = "all", ground=None):
    """Edge arrays restricted to a sign class."""
    I, J, W = graph.edge_arrays()
    s = graph.signs()
    if which == "pos":
        keep = s > 0
    elif which == "neg":
        keep = s < 0
    else:
        keep = np.ones(len(I), dtype=bool)
    return I[keep], J[keep], W[keep]


def _tv(X, I, J, W):
    if len(I) == 0:
        return np.zeros(len(X))
    return np.abs(X[:, I] - X[:, J]) @ W


def _require_unweighted(graph: Graph, what: str):
    if not graph.is_unweighted:
        raise DomainError(f"{what} needs an unweighted graph")


def _nonneg_sampler(dim):
    return lambda rng, m: np.abs(rng.standard_normal((m, dim)))


# -- cuts


def maxcut(graph: Graph, p: float = 1.0, form: str = "primal") -> ProblemInstance:
    """max_S |dS| as a disjoint-pair ratio over 2|x|_inf.

    form "primal": f(A,B) = cut(A) + cut(B); "dual": f(A,B) = 2 w(E(A,B)).
    The p-power forms are exposed as ``extras['continuous_p']``.
    """
    from . import fracprog as fp
    if p < 1:
        raise ValueError("p must be >= 1")
    n = graph.n
    I, J, W = graph.edge_arrays()
    pos, neg, _ = _pair_tables(n)
    cut = graph.cut_table()
    d = graph.degrees()
    g = SetFunction(n, "pair", table=_const_table(3 ** n, 2), name="2")
    G = _batch(lambda X: 2 * np.abs(X).max(axis=1))
    if form == "primal":
        f = SetFunction(n, "pair", table=cut[pos] + cut[neg], name="pair_cut")
        F = _batch(lambda X: _tv(X, I, J, W))
        comps = (fp.edge_tv(n, I, J, W), fp.zero(n), fp.linf(n, 2.0), fp.zero(n))

        def Fp(X):
            X = np.atleast_2d(X)
            return (np.abs(X[:, I] - X[:, J]) ** p) @ W / (2 * np.abs(X).max(axis=1)) ** p
    elif form == "dual":
        f = SetFunction(n, "pair", table=2 * graph.between_table(pos, neg), name="2E(A,B)")
        F = _batch(lambda X: np.abs(X) @ d - np.abs(X[:, I] + X[:, J]) @ W)
        comps = (fp.weighted_l1(d), fp.edge_tv(n, I, J, W, s=-np.ones(len(I))), fp.linf(n, 2.0),
                 fp.zero(n))

        def Fp(X):
            X = np.atleast_2d(X)
            t = np.abs(X[:, I]) + np.abs(X[:, J]) - np.abs(X[:, I] + X[:, J])
            return (t ** p) @ W / (2 * np.abs(X).max(axis=1)) ** p
    else:
        raise ValueError("form must be primal or dual")
    return ProblemInstance("maxcut", graph, {"p": p, "form": form}, f, g, "max", F=F, G=G,
                           components=comps if p == 1 else None,
                           extras={"continuous_p": _batch(Fp)})


def maxcut_theta_forms(graph: Graph, theta) -> tuple[float, float]:
    """(1/4 sum w (cos ti - cos tj)^2, sum w sin^2((ti-tj)/2) sin^2((ti+tj)/2))."""
    I, J, W = graph.edge_arrays()
    t = np.asarray(theta, dtype=float)
    a = 0.25 * np.sum(W * (np.cos(t[I]) - np.cos(t[J])) ** 2)
    b = np.sum(W * np.sin((t[I] - t[J]) / 2) ** 2 * np.sin((t[I] + t[J]) / 2) ** 2)
    return float(a), float(b)


def mincut(graph: Graph) -> ProblemInstance:
    """min over proper nonempty S of |dS|.

    Original extension with g = 1 on proper subsets: F = TV(x),
    G = max x - min x.  On the slice min x + max x = 0 this is the
    TV/(2|x|_inf) form (exposed as ``extras['symmetric']``).
    """
    from . import fracprog as fp
    n = graph.n
    I, J, W = graph.edge_arrays()
    gt = np.ones(1 << n, dtype=np.int64)
    gt[(1 << n) - 1] = 0
    f = SetFunction(n, table=graph.cut_table(), name="cut")
    g = SetFunction(n, table=gt, name="proper")
    F = _batch(lambda X: _tv(X, I, J, W))
    G = _batch(lambda X: X.max(axis=1) - X.min(axis=1))
    sym = _batch(lambda X: _tv(X, I, J, W) / (2 * np.abs(X).max(axis=1)))
    on_slice = lambda x: abs(np.min(x) + np.max(x)) <= 1e-12
    comps = (fp.edge_tv(n, I, J, W), fp.zero(n), fp.max_minus_min(n), fp.zero(n))
    return ProblemInstance("mincut", graph, {}, f, g, "min", F=F, G=G, components=comps,
                           extras={"symmetric": sym, "symmetric_domain": on_slice})


def _kway_blocks(n: int, k: int):
    idx = np.arange(1 << (n * k), dtype=np.int64)
    full = (1 << n) - 1
    return [(idx >> (n * l)) & full for l in range(k)]


def _disjoint(blocks, n):
    pc = popcounts(n)
    union = np.zeros_like(blocks[0])
    total = np.zeros_like(blocks[0])
    for b in blocks:
        union |= b
        total += pc[b]
    return pc[union] == total, union


def _disjoint_support_sampler(n: int, k: int):
    def sample(rng, m):
        X = np.zeros((m, n * k))
        lab = rng.integers(0, k + 1, size=(m, n))      # label k = unused vertex
        val = np.abs(rng.standard_normal((m, n)))
        for l in range(k):
            X[:, l * n:(l + 1) * n] = np.where(lab == l, val, 0.0)
        empty = ~X.any(axis=1)
        X[empty, 0] = 1.0
        return X
    return sample


def max_kcut(graph: Graph, k: int, variant: str = "plain") -> ProblemInstance:
    """MaxC_k: the largest total weight between parts of a k-partition.

    variant "plain": k-way f(A_1..A_k) = sum_l cut(A_l), g = 2, over
    disjoint tuples; "composition": (k-1)-way tuples with the extra term
    cut(A_1 u .. u A_{k-1}), whose extension carries the max-composition
    boundary term.
    """
    from . import fracprog as fp
    from .oracle import optimize_partitions
    n = graph.n
    if not 2 <= k <= n:
        raise ValueError("need 2 <= k <= n")
    b = k if variant == "plain" else k - 1
    if variant not in ("plain", "composition"):
        raise ValueError("variant must be plain or composition")
    I, J, W = graph.edge_arrays()
    cut = graph.cut_table()

    def F(X):
        v = sum(_tv(X[:, l * n:(l + 1) * n], I, J, W) for l in range(b))
        if variant == "composition":
            M = np.max(np.stack([X[:, l * n:(l + 1) * n] for l in range(b)]), axis=0)
            v = v + _tv(M, I, J, W)
        return v

    def exact():
        # each cut edge is counted from both sides
        def objective(blocks):
            tot = sum(cut[m].item() for m in blocks)
            return Fraction(tot, 2) if isinstance(tot, int) else tot / 2
        return optimize_partitions(objective, n, k, "max", exact_k=False)

    f = g = fam = None
    if n * b <= 18:
        blocks = _kway_blocks(n, b)
        ok, union = _disjoint(blocks, n)
        t = sum(cut[m] for m in blocks)
        if variant == "composition":
            t = t + cut[union]
        f = SetFunction(n, "kway", b, table=t, name=f"maxcut{k}")
        g = SetFunction(n, "kway", b, table=_const_table(1 << (n * b), 2), name="2")
        fam = ok
    comps = None
    if f is not None and variant == "plain":
        Ib = np.concatenate([I + l * n for l in range(b)])
        Jb = np.concatenate([J + l * n for l in range(b)])
        comps = (fp.edge_tv(n * b, Ib, Jb, np.tile(W, b)), fp.zero(n * b),
                 fp.max_coord(n * b, 2.0), fp.zero(n * b))
    inst = ProblemInstance(f"max{k}cut", graph, {"k": k, "variant": variant}, f, g, "max",
                           family=fam, F=_batch(F), G=_batch(lambda X: 2 * X.max(axis=1)),
                           sampler=_disjoint_support_sampler(n, b), components=comps,
                           exact_oracle=exact if f is None else None)
    inst.extras["partition_oracle"] = exact
    return inst


# -- Cheeger constants


def _min_vol_table(vol: np.ndarray, n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    return np.minimum(vol, vol[((1 << n) - 1) ^ masks])


def cheeger_cut(graph: Graph, A=None) -> ProblemInstance:
    """Neumann Cheeger constant of the subgraph A (whole graph by default).

    Ground set A u dA; edges with an endpoint in A count; denominators use
    the degrees in the whole graph, restricted to A.
    """
    from . import fracprog as fp
    if A is None:
        A = list(range(graph.n))
    A = sorted(set(A))
    if not A:
        raise DomainError("A must be nonempty")
    inA = set(A)
    delta = sorted({j for i in A for j in graph.neighbors(i)} - inA)
    ground = A + delta
    pos = {v: r for r, v in enumerate(ground)}
    es = [(pos[i], pos[j], w) for i, j, w, _ in graph.edges
          if (i in inA or j in inA) and i in pos and j in pos]
    sub = Graph(len(ground), es)
    n = sub.n
    d = np.zeros(n)
    dG = graph.degrees()
    for v in A:
        d[pos[v]] = dG[v]
    bits = [(np.arange(1 << n, dtype=np.int64) >> i) & 1 for i in range(n)]
    volA = sum(d[i] * bits[i] for i in range(n))
    gt = _min_vol_table(volA, n)
    if graph.is_unweighted:
        gt = np.rint(gt).astype(np.int64)
    f = SetFunction(n, table=sub.cut_table(), name="cut")
    g = SetFunction(n, table=gt, name="min_vol")
    I, J, W = sub.edge_arrays()
    F = _batch(lambda X: _tv(X, I, J, W))
    G = _batch(lambda X: lovasz.weighted_median_l1(X, d))
    comps = (fp.edge_tv(n, I, J, W), fp.zero(n), fp.from_setfn(g), fp.zero(n))
    pid = "cheeger" if not delta and len(A) == graph.n else "neumann_cheeger"
    return ProblemInstance(pid, graph, {"A": A}, f, g, "min", F=F, G=G, components=comps,
                           ground=ground)


def dirichlet_cheeger(graph: Graph, A) -> ProblemInstance:
    """h_1(A) = min over nonempty S in A of |d_A S| / vol(S), as a pair ratio on A."""
    from . import fracprog as fp
    A = sorted(set(A))
    if not A:
        raise DomainError("A must be nonempty")
    inA = set(A)
    pos_of = {v: r for r, v in enumerate(A)}
    sub, _ = graph.induced(A)
    n = sub.n
    dG = graph.degrees()
    d = np.array([dG[v] for v in A])
    p = np.zeros(n)
    for i, j, w, _ in graph.edges:
        if (i in inA) != (j in inA):
            p[pos_of[i if i in inA else j]] += w
    ppos, pneg, union = _pair_tables(n)
    cut = sub.cut_table()
    bits = [(np.arange(1 << n, dtype=np.int64) >> i) & 1 for i in range(n)]
    pt = sum(p[i] * bits[i] for i in range(n))
    vt = sum(d[i] * bits[i] for i in range(n))
    ft = cut[ppos] + cut[pneg] + pt[union]
    gt = vt[union]
    if graph.is_unweighted:
        ft, gt = np.rint(ft).astype(np.int64), np.rint(gt).astype(np.int64)
    f = SetFunction(n, "pair", table=ft, name="dirichlet_cut")
    g = SetFunction(n, "pair", table=gt, name="vol")
    I, J, W = sub.edge_arrays()
    F = _batch(lambda X: _tv(X, I, J, W) + np.abs(X) @ p)
    G = _batch(lambda X: np.abs(X) @ d)
    comps = (fp.combine([(1.0, fp.edge_tv(n, I, J, W)), (1.0, fp.weighted_l1(p))], n),
             fp.zero(n), fp.weighted_l1(d), fp.zero(n))
    return ProblemInstance("dirichlet_cheeger", graph, {"A": A}, f, g, "min", F=F, G=G,
                           components=comps, ground=A)


# -- independence, matching, covers


def _union_lift(t: np.ndarray, n: int, name: str) -> SetFunction:
    _, _, union = _pair_tables(n)
    return SetFunction(n, "pair", table=t[union], name=name)


def independence_number(graph: Graph, form: str = "difference") -> ProblemInstance:
    """alpha(G) as a max over disjoint pairs of h(A u B) / c.

    form "difference": h = 2(#S - #E(S)), c = 2, with the closed form
    (2|x|_1 + I^-(x) + I^+(x) - 2|x|_{1,deg}) / (2|x|_inf).
    form "product": h = #S (1 - #E(S)), c = 1 (generic extension).
    """
    from . import fracprog as fp
    _require_unweighted(graph, "independence number")
    n = graph.n
    size = popcounts(n)
    inner = graph.inner_table()
    I, J, W = graph.edge_arrays()
    d = graph.degrees()
    if form == "difference":
        f = _union_lift(2 * (size - inner), n, "2(#S-#E(S))")
        g = SetFunction(n, "pair", table=_const_table(3 ** n, 2), name="2")

        def F(X):
            Ax = np.abs(X)
            return (2 * Ax.sum(axis=1) + np.abs(X[:, I] - X[:, J]).sum(axis=1)
                    + np.abs(X[:, I] + X[:, J]).sum(axis=1) - 2 * Ax @ d)
        G = _batch(lambda X: 2 * np.abs(X).max(axis=1))
        comps = (fp.combine([(2.0, fp.weighted_l1(np.ones(n))), (1.0, fp.edge_tv(n, I, J, W)),
                             (1.0, fp.edge_tv(n, I, J, W, s=-np.ones(len(I))))], n),
                 fp.weighted_l1(2 * d), fp.linf(n, 2.0), fp.zero(n))

        def eq23(X):
            Ax = np.abs(X)
            return ((Ax.sum(axis=1) - np.minimum(Ax[:, I], Ax[:, J]).sum(axis=1))
                    / Ax.max(axis=1))

        def deg_prime(X):
            Ax = np.abs(X)
            return ((np.abs(X[:, I] - X[:, J]).sum(axis=1) + np.abs(X[:, I] + X[:, J]).sum(axis=1)
                     - 2 * Ax @ (d - 1)) / (2 * Ax.max(axis=1)))
        extras = {"eq23": _batch(eq23), "deg_prime": _batch(deg_prime)}
        F = _batch(F)
    elif form == "product":
        f = _union_lift(size * (1 - inner), n, "#S(1-#E(S))")
        g = SetFunction(n, "pair", table=_const_table(3 ** n, 1), name="1")
        F = lovasz.extension(f)
        G = _batch(lambda X: np.abs(X).max(axis=1))
        comps, extras = None, {}
    else:
        raise ValueError("form must be difference or product")
    h = SetFunction(n, table=f.table()[ternary_weights(n)], name=f.name)
    c = SetFunction(n, table=g.table()[ternary_weights(n)], name=g.name)
    return ProblemInstance("independence", graph, {"form": form}, f, g, "max", F=F, G=G,
                           components=comps, generalized=True, extras=extras,
                           exact_oracle=lambda: _union_oracle(h, c))


def _union_oracle(h: SetFunction, c: SetFunction):
    # f(A,B) = h(A u B) and g constant, so the pair optimum is attained at some (S, empty)
    from .oracle import optimize_subsets
    res = optimize_subsets(h, c, "max")
    res.witnesses = [(int(w), 0) for w in res.witnesses]
    return res


def k_independence_number(graph: Graph, k: int) -> ProblemInstance:
    """Largest set with pairwise distances > k: independence number of G^k."""
    inst = independence_number(graph.power(k), "difference")
    inst.problem_id = "k_independence"
    inst.graph = graph
    inst.params = {"k": k}
    inst.extras["literal"] = _batch(lambda X: k_independence_literal(graph, k, X))
    return inst


def k_independence_literal(graph: Graph, k: int, X) -> np.ndarray:
    """The distance form read literally: pairs with dist <= k include i = j,
    and deg_k(i) = #{j : dist(i, j) <= k} counts i itself."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    D = graph.distances()
    iu, ju = np.nonzero(np.triu(D <= k))                 # unordered, diagonal included
    degk = (D <= k).sum(axis=1)
    num = (np.abs(X[:, iu] - X[:, ju]) + np.abs(X[:, iu] + X[:, ju])).sum(axis=1) \
        - 2 * np.abs(X) @ (degk - 1)
    return num / (2 * np.abs(X).max(axis=1))


def motzkin_straus_ratio(graph: Graph, y, k: int = 1) -> float:
    """|y|_1^2 / (|y|_1^2 - 2 sum_{dist(i,j) > k} y_i y_j); max over y >= 0 is alpha_k."""
    y = np.asarray(y, dtype=float)
    D = graph.distances()
    far = np.triu(D > k, 1)
    s = y.sum() ** 2 if np.all(y >= 0) else np.abs(y).sum() ** 2
    return float(s / (s - 2 * (y @ (far * 1.0) @ y)))


def matching_number(graph: Graph) -> ProblemInstance:
    """Maximum matching = independence number of the line graph."""
    if graph.m == 0:
        raise DomainError("graph has no edges")
    inst = independence_number(graph.line_graph(), "difference")
    inst.problem_id = "matching"
    inst.graph = graph
    inst.params = {}
    inst.extras["ratio"] = lambda y: matching_ratio(graph, y)
    return inst


def matching_ratio(graph: Graph, y) -> float:
    """|y|_1^2 / (|y|_1^2 - 2 sum over disjoint edge pairs y_e y_e'); max over y >= 0 is nu."""
    y = np.asarray(y, dtype=float)
    s = y.sum() ** 2
    acc = 0.0
    for a, b in itertools.combinations(range(graph.m), 2):
        if not set(graph.edges[a][:2]) & set(graph.edges[b][:2]):
            acc += y[a] * y[b]
    return float(s / (s - 2 * acc))


def _kelley_lp(n_var, blocks, A_ub, b_ub, A_eq, b_eq, bounds, max_rounds=500):
    """min sum_b F_b(x[block]) for convex PL F_b given by (eval, subgrad) oracles."""
    from scipy.optimize import linprog
    nb = len(blocks)
    cuts = [[] for _ in range(nb)]
    x = np.zeros(n_var)
    for bi, (sl, F) in enumerate(blocks):
        for p0 in (np.ones(sl.stop - sl.start), np.zeros(sl.stop - sl.start)):
            cuts[bi].append(F[1](p0))
    for _ in range(max_rounds):
        rows, rhs = [], []
        for bi, (sl, F) in enumerate(blocks):
            for u in cuts[bi]:
                r = np.zeros(n_var + nb)
                r[sl] = u
                r[n_var + bi] = -1.0
                rows.append(r)
                rhs.append(0.0)
        Aub = np.vstack([np.hstack([A_ub, np.zeros((len(A_ub), nb))])] + [np.array(rows)]) \
            if len(A_ub) else np.array(rows)
        bub = np.concatenate([b_ub, rhs]) if len(A_ub) else np.array(rhs)
        Aeq = np.hstack([A_eq, np.zeros((len(A_eq), nb))]) if len(A_eq) else None
        c = np.concatenate([np.zeros(n_var), np.ones(nb)])
        res = linprog(c, A_ub=Aub, b_ub=bub, A_eq=Aeq, b_eq=b_eq if len(A_eq) else None,
                      bounds=list(bounds) + [(None, None)] * nb, method="highs")
        if res.status != 0:
            raise RuntimeError(f"relaxation LP failed: {res.message}")
        x, s = res.x[:n_var], res.x[n_var:]
        added = False
        total = 0.0
        for bi, (sl, F) in enumerate(blocks):
            v = F[0](x[sl])
            total += v
            if v > s[bi] + 1e-9 * max(1.0, abs(v)):
                cuts[bi].append(F[1](x[sl]))
                added = True
        if not added:
            return total, x
    return total, x


def vertex_cover(graph: Graph, f: Optional[SetFunction] = None) -> ProblemInstance:
    """min f(S) over vertex covers S; f = #S by default.

    ``extras['relaxation']()`` returns the convex relaxation bound
    min f^L(x) over {x >= 0, x_i + x_j >= 1}, a lower bound on the optimum.
    """
    from .setfn import is_submodular
    n = graph.n
    if f is None:
        f = SetFunction(n, table=popcounts(n), name="#S")
    if f.kind != "powerset" or f.n != n:
        raise DomainError("f must be a set function on the vertices")
    if not is_submodular(f):
        raise DomainError("f must be submodular")
    masks = np.arange(1 << n, dtype=np.int64)
    cover = np.ones(1 << n, dtype=bool)
    for i, j, _, _ in graph.edges:
        cover &= (((masks >> i) | (masks >> j)) & 1).astype(bool)
    g = SetFunction(n, table=_const_table(1 << n, 1), name="1")
    fam = cover.copy()
    if graph.m == 0:
        fam[0] = True
    ext = lovasz.extension_with_grad(f)
    oracle_fn = (lambda x: float(ext(x)[0]), lambda x: np.asarray(ext(x)[1], dtype=float))

    def relaxation():
        A = np.zeros((graph.m, n))
        for r, (i, j, _, _) in enumerate(graph.edges):
            A[r, i] = A[r, j] = -1.0
        return _kelley_lp(n, [(slice(0, n), oracle_fn)], A, -np.ones(graph.m),
                          np.zeros((0, n)), np.zeros(0), [(0, 1)] * n)[0]

    def exact():
        from .oracle import OracleResult
        t = f.table()
        idx = np.nonzero(cover)[0]
        best = t[idx].min()
        win = idx[t[idx] == best]
        return OracleResult(best.item(), [int(w) for w in win[:16]], len(idx))
    return ProblemInstance("vertex_cover", graph, {"f": f.name}, f, g, "min", family=fam,
                           exact_oracle=exact, extras={"relaxation": relaxation})


def multiway_partition(graph: Graph, terminals, f: Optional[SetFunction] = None) -> ProblemInstance:
    """min sum_l f(V_l) over partitions with terminal t_l in V_l (f = cut by default).

    ``extras['relaxation']()`` solves the k-way relaxation over
    {x >= 0, sum_l x^l_v = 1, x^l_{t_l} = 1}.
    """
    from .oracle import optimize_partitions
    from .setfn import is_submodular
    n = graph.n
    terminals = [int(t) for t in terminals]
    k = len(terminals)
    if len(set(terminals)) != k:
        raise DomainError("terminals must be distinct")
    if k > n or k < 1:
        raise DomainError("need 1 <= k <= n terminals")
    if f is None:
        f = SetFunction(n, table=graph.cut_table(), name="cut")
    if not is_submodular(f):
        raise DomainError("f must be submodular")
    t = f.table()

    def exact():
        def objective(blocks):
            return sum(t[m].item() for m in blocks)

        def ok(blocks):
            # blocks are relabelled; each terminal in its own block
            owner = [next(b for b, m in enumerate(blocks) if m >> v & 1) for v in terminals]
            return len(set(owner)) == k
        res = optimize_partitions(objective, n, k, "min", exact_k=True, constraint=ok)
        return res

    ext = lovasz.extension_with_grad(f)
    oracle_fn = (lambda x: float(ext(x)[0]), lambda x: np.asarray(ext(x)[1], dtype=float))

    def relaxation():
        nv = n * k
        A_eq, b_eq = [], []
        for v in range(n):
            r = np.zeros(nv)
            r[[l * n + v for l in range(k)]] = 1.0
            A_eq.append(r)
            b_eq.append(1.0)
        bounds = [(0, 1)] * nv
        for l, tv in enumerate(terminals):
            bounds[l * n + tv] = (1, 1)
        blocks = [(slice(l * n, (l + 1) * n), oracle_fn) for l in range(k)]
        return _kelley_lp(nv, blocks, np.zeros((0, nv)), np.zeros(0), np.array(A_eq),
                          np.array(b_eq), bounds)[0]

    g = SetFunction(n, table=_const_table(1 << n, 1), name="1")
    return ProblemInstance("multiway_partition", graph, {"terminals": terminals}, f, g, "min",
                           exact_oracle=exact, extras={"relaxation": relaxation})


# -- chromatic number


MAX_CHROMATIC_CONTINUOUS_N = 3


def chromatic_number(graph: Graph, continuous: bool = False) -> ProblemInstance:
    """gamma(G) by partitions into independent sets.

    With ``continuous`` (n <= 3), the n-way disjoint-pair formulation with
    f = n sum #E(U_i) + sum sgn #U_i + n (n - #U U_i) + n^2 (nonempty
    tuples), U_i = A_i u B_i, and g = 1 is built; its extension is the
    closed form in ``F``.
    """
    from .oracle import optimize_partitions
    _require_unweighted(graph, "chromatic number")
    n = graph.n
    inner = graph.inner_table()

    def exact():
        return optimize_partitions(lambda blocks: len(blocks) if all(inner[b] == 0 for b in blocks)
                                   else n + 1, n, None, "min")

    I, J, _ = graph.edge_arrays()
    d = graph.degrees()

    def F(X):
        m = len(X)
        Y = X.reshape(m, n, n)                     # [row, colour i, vertex j]
        A = np.abs(Y)
        t = n * n * A.reshape(m, -1).max(axis=1)
        t += n * np.einsum("rij,j->r", A, d)
        t -= n * 0.5 * (np.abs(Y[:, :, I] + Y[:, :, J]) + np.abs(Y[:, :, I] - Y[:, :, J])).sum(axis=(1, 2))
        t += A.max(axis=2).sum(axis=1)
        t -= n * A.max(axis=1).sum(axis=1)
        return t

    f = g = None
    if continuous:
        if n > MAX_CHROMATIC_CONTINUOUS_N:
            raise DomainError(f"continuous chromatic form is n^2-dimensional; n <= "
                              f"{MAX_CHROMATIC_CONTINUOUS_N} supported")
        _, _, union = _pair_tables(n)
        size = popcounts(n)
        base = 3 ** n
        idx = np.arange(base ** n, dtype=np.int64)
        U = [union[(idx // base ** l) % base] for l in range(n)]
        allu = np.zeros_like(idx)
        t = np.full(idx.shape, n * n, dtype=np.int64)
        for u in U:
            t += n * inner[u] + (u > 0)
            allu |= u
        t -= n * size[allu]
        f = SetFunction(n, "kway-pair", n, table=t, name="chromatic")
        g = SetFunction(n, "kway-pair", n, table=_const_table(base ** n, 1), name="1")
    inst = ProblemInstance("chromatic", graph, {}, f, g, "min", F=_batch(F),
                           G=_batch(lambda X: np.abs(X).max(axis=1)), exact_oracle=exact)
    return inst


# -- signed graphs


def frustration_index(graph: Graph, form: str = "pair") -> ProblemInstance:
    """Frustrated-edge count min over +-1 x of #{ij : x_i != s_ij x_j} (weighted).

    form "pair": f(A,B) = h(A) + h(B) + 2 W_-, g = 2, with h = cut_+ - cut_-;
    extension (sum_{E+}|x_i - x_j| - sum_{E-}|x_i - x_j| + 2 W_- |x|_inf) / 2|x|_inf,
    nonnegative.  form "indefinite": f = h(A) + h(B), offset W_-.
    The raw equation value is twice the count.
    """
    from . import fracprog as fp
    if not graph.is_signed:
        raise DomainError("frustration needs a signed graph (at least one negative edge)")
    n = graph.n
    pos, neg, _ = _pair_tables(n)
    h = graph.cut_table("pos") - graph.cut_table("neg")
    Wneg = sum(e[2] for e in graph.edges if e[3] < 0)
    if graph.is_unweighted:
        Wneg = int(Wneg)
    Ip, Jp, Wp = _components(graph, "pos")
    In, Jn, Wn = _components(graph, "neg")
    g = SetFunction(n, "pair", table=_const_table(3 ** n, 2), name="2")
    G = _batch(lambda X: 2 * np.abs(X).max(axis=1))
    tvp, tvn = fp.edge_tv(n, Ip, Jp, Wp), fp.edge_tv(n, In, Jn, Wn)
    if form == "pair":
        f = SetFunction(n, "pair", table=h[pos] + h[neg] + _const_table(3 ** n, 2 * Wneg),
                        name="frustration")
        F = _batch(lambda X: _tv(X, Ip, Jp, Wp) - _tv(X, In, Jn, Wn)
                   + 2 * Wneg * np.abs(X).max(axis=1))
        comps = (fp.combine([(1.0, tvp), (1.0, fp.linf(n, 2.0 * Wneg))], n), tvn,
                 fp.linf(n, 2.0), fp.zero(n))
        offset, gen = 0, False
    elif form == "indefinite":
        f = SetFunction(n, "pair", table=h[pos] + h[neg], name="frustration_indef")
        F = _batch(lambda X: _tv(X, Ip, Jp, Wp) - _tv(X, In, Jn, Wn))
        comps = (tvp, tvn, fp.linf(n, 2.0), fp.zero(n))
        offset, gen = Wneg, True
    else:
        raise ValueError("form must be pair or indefinite")

    def exact():
        from .oracle import OracleResult, optimize_signs
        res = optimize_signs(lambda S: frustration_counts(graph, S), n, "min")
        return OracleResult(res.optimum - offset if offset else res.optimum,
                            res.witnesses, res.evaluations)

    def alpha_form(X, alpha):
        X = np.atleast_2d(X)
        m = 2 * np.abs(X).max(axis=1)
        a = (np.abs(X[:, Ip] - X[:, Jp]) ** alpha) @ Wp
        b = ((m[:, None] - np.abs(X[:, In] - X[:, Jn])) ** alpha) @ Wn
        return (a + b) / m ** alpha

    def sign_form(X):
        X = np.atleast_2d(X)
        m = 2 * np.abs(X).max(axis=1)
        a = (np.abs(X[:, Ip] - X[:, Jp]) > 0) @ Wp
        b = ((m[:, None] - np.abs(X[:, In] - X[:, Jn])) > 0) @ Wn
        return a + b

    def first_form(X):
        # printed form: |E-| + (sum_{E+}|xi-xj| + sum deg|x| - sum_{E-}(|xi-xj|+|xi+xj|))/|x|_inf;
        # at +-1 vectors it gives 2 cut_+ + 2|E+| + |E-|, not the count (kept for reference)
        X = np.atleast_2d(X)
        d = graph.degrees()
        num = (_tv(X, Ip, Jp, Wp) + np.abs(X) @ d - _tv(X, In, Jn, Wn)
               - (np.abs(X[:, In] + X[:, Jn]) @ Wn if len(In) else 0))
        return Wneg + num / np.abs(X).max(axis=1)

    return ProblemInstance("frustration" if form == "pair" else "frustration_indefinite",
                           graph, {"form": form}, f, g, "min", F=F, G=G, offset=offset,
                           components=comps, generalized=gen, exact_oracle=None,
                           extras={"alpha_form": alpha_form, "sign_form": _batch(sign_form),
                                   "first_form_raw": _batch(first_form),
                                   "sign_oracle": exact, "raw_scale": 2})


def frustration_counts(graph: Graph, S: np.ndarray) -> np.ndarray:
    """Weighted frustrated-edge count for each row of a +-1 matrix."""
    S = np.atleast_2d(S)
    I, J, W = graph.edge_arrays()
    s = graph.signs()
    bad = S[:, I] != s * S[:, J]
    v = bad @ W
    return np.rint(v).astype(np.int64) if graph.is_unweighted else v


# -- modularity


def _modularity_weights(graph: Graph):
    """c_ij = d_i d_j / vol - w_ij over unordered pairs i < j (as Fractions when exact)."""
    n = graph.n
    d = graph.degrees()
    vol = d.sum()
    Wm = graph.adjacency()
    iu, ju = np.triu_indices(n, 1)
    c = d[iu] * d[ju] / vol - Wm[iu, ju]
    return iu, ju, c


def modularity_table(graph: Graph) -> np.ndarray:
    """Q(A) = sum_{i,j in A} w_ij - vol(A)^2 / vol(V) (ordered pairs) for every mask."""
    vol = graph.vol_table().astype(float)
    V = vol[-1]
    return 2 * graph.inner_table().astype(float) - vol ** 2 / V


def modularity(graph: Graph, mu=None) -> ProblemInstance:
    """max Q(A) as a disjoint-pair ratio: f(A,B) = 2Q(A) + 2Q(B), g = 4.

    The extension is sum_{i,j} (d_i d_j/vol - w_ij)|x_i - x_j| (ordered
    pairs) over 4|x|_inf.  With vertex weights ``mu`` the normalized form
    max Q(A)/(mu(A) mu(V-A)) over proper A is built instead (original kind).
    """
    from . import fracprog as fp
    n = graph.n
    if graph.degrees().sum() <= 0:
        raise DomainError("modularity needs vol(V) > 0")
    Q = modularity_table(graph)
    iu, ju, c = _modularity_weights(graph)
    D = np.zeros((len(iu), n))
    D[np.arange(len(iu)), iu] = 1.0
    D[np.arange(len(iu)), ju] = -1.0

    def F(X):
        return 2 * np.abs(X[:, iu] - X[:, ju]) @ c

    cp, cn = np.clip(c, 0, None), np.clip(-c, 0, None)
    F1 = fp.abs_sum(D, 2 * cp) if np.any(cp > 0) else fp.zero(n)
    F2 = fp.abs_sum(D, 2 * cn) if np.any(cn > 0) else fp.zero(n)
    if mu is None:
        pos, neg, _ = _pair_tables(n)
        f = SetFunction(n, "pair", table=2 * Q[pos] + 2 * Q[neg], name="2Q+2Q")
        g = SetFunction(n, "pair", table=_const_table(3 ** n, 4), name="4")
        return ProblemInstance("modularity", graph, {}, f, g, "max", F=_batch(F),
                               G=_batch(lambda X: 4 * np.abs(X).max(axis=1)),
                               components=(F1, F2, fp.linf(n, 4.0), fp.zero(n)),
                               generalized=True, extras={"Q": Q})
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (n,) or np.any(mu < 0):
        raise DomainError("mu must be a nonnegative vertex weight vector")
    bits = [(np.arange(1 << n, dtype=np.int64) >> i) & 1 for i in range(n)]
    mt = sum(mu[i] * bits[i] for i in range(n))
    gt = 2 * mt * (mt[-1] - mt)
    f = SetFunction(n, table=2 * Q, name="2Q")
    g = SetFunction(n, table=gt, name="2mu mu")
    mw = mu[iu] * mu[ju]
    G = _batch(lambda X: 2 * np.abs(X[:, iu] - X[:, ju]) @ mw)
    return ProblemInstance("modularity_mu", graph, {"mu": mu.tolist()}, f, g, "max", F=_batch(F),
                           G=G, components=(F1, F2, fp.abs_sum(D, 2 * mw), fp.zero(n)),
                           generalized=True, extras={"Q": Q})


def modularity_box_check(graph: Graph, a: float, b: float):
    """(max over the vertices {-a,b}^n of 1/2 sum_{i,j} c_ij |x_i - x_j|, (a + b) max Q)."""
    n = graph.n
    iu, ju, c = _modularity_weights(graph)
    masks = np.arange(1 << n, dtype=np.int64)
    X = np.where(((masks[:, None] >> np.arange(n)) & 1) == 1, b, -a).astype(float)
    lhs = float((np.abs(X[:, iu] - X[:, ju]) @ c).max())      # ordered sum / 2 = unordered
    rhs = (a + b) * float(modularity_table(graph).max())
    return lhs, rhs


def modularity_frustration_check(graph: Graph):
    """Exact (frustration of w~ in equation scale, 2(sum_{w~<0}|w~| - max Q)).

    w~_ij = w_ij - d_i d_j / vol over unordered pairs i < j; both sides are
    computed with fractions.
    """
    n = graph.n
    if not graph.is_unweighted:
        raise DomainError("exact check needs integer weights")
    d = [Fraction(int(v)) for v in graph.degrees()]
    vol = sum(d)
    Wm = graph.adjacency()
    wt = {(i, j): Fraction(int(Wm[i, j])) - d[i] * d[j] / vol
          for i in range(n) for j in range(i + 1, n)}
    neg_total = sum(-v for v in wt.values() if v < 0)
    best = None
    for signs in itertools.product((1, -1), repeat=n):
        tot = Fraction(0)
        for (i, j), v in wt.items():
            s = 1 if v > 0 else -1
            if v != 0 and signs[i] != s * signs[j]:
                tot += 2 * abs(v)
        best = tot if best is None or tot < best else best
    Q = []
    for mask in range(1 << n):
        A = [i for i in range(n) if mask >> i & 1]
        inner = sum(Fraction(int(Wm[i, j])) for i in A for j in A)
        Q.append(inner - sum(d[i] for i in A) ** 2 / vol)
    return best, 2 * (neg_total - max(Q))


# -- Cheeger variants


def _vb_forms(graph: Graph, kind: str):
    nbr = [np.array(sorted(set(graph.neighbors(i)) | {i})) for i in range(graph.n)]

    def F(X):
        if kind == "ext":
            return sum(X[:, nb].max(axis=1) - X[:, i] for i, nb in enumerate(nbr))
        if kind == "int":
            return sum(X[:, i] - X[:, nb].min(axis=1) for i, nb in enumerate(nbr))
        return sum(X[:, nb].max(axis=1) - X[:, nb].min(axis=1) for nb in nbr)

    def pieces():
        n = graph.n
        E = np.eye(n)
        out = []
        for i, nb in enumerate(nbr):
            if kind in ("ext", "ver"):
                out.append(np.array([E[j] - (E[i] if kind == "ext" else 0) for j in nb]))
            if kind in ("int", "ver"):
                out.append(np.array([(E[i] if kind == "int" else 0) - E[j] for j in nb]))
        return out
    return F, pieces


def poincare_quotient(graph: Graph, X) -> np.ndarray:
    """sum_i max_{j ~ i} |x_i - x_j| / |x|_1 (not a Lovász extension)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    num = np.zeros(len(X))
    for i in range(graph.n):
        nb = graph.neighbors(i)
        if nb:
            num += np.abs(X[:, [i]] - X[:, nb]).max(axis=1)
    return num / np.abs(X).sum(axis=1)


def cheeger_variants(graph: Graph, variant: str, **params) -> ProblemInstance:
    """Cheeger-type constants.

    normalized_cut: min cut(A) / (#A #(V-A))
    sparsest_cut:   min w-cut(A) / mu-cut(A), ``mu`` a symmetric matrix
    isoperimetric_profile: min over 1 <= #A <= k of cut(A)/#A (pair form)
    vertex_boundary: min #d_X A / min(#A, #(V-A)), X = ``boundary`` in int/ext/ver
    cheeger_like:   max over edges of c_i + c_j (c = 1/deg), on the edge set
    dual_cheeger:   max over pairs of 2 E(A,B) / vol(A u B)
    """
    from . import fracprog as fp
    n = graph.n
    I, J, W = graph.edge_arrays()
    cut = graph.cut_table()
    size = popcounts(n)
    masks = np.arange(1 << n, dtype=np.int64)
    if variant == "normalized_cut":
        g = SetFunction(n, table=size * (n - size), name="#A#B")
        f = SetFunction(n, table=cut, name="cut")
        iu, ju = np.triu_indices(n, 1)
        D = np.zeros((len(iu), n))
        D[np.arange(len(iu)), iu] = 1.0
        D[np.arange(len(iu)), ju] = -1.0
        return ProblemInstance("normalized_cut", graph, {}, f, g, "min",
                               F=_batch(lambda X: _tv(X, I, J, W)),
                               G=_batch(lambda X: np.abs(X[:, iu] - X[:, ju]).sum(axis=1)),
                               components=(fp.edge_tv(n, I, J, W), fp.zero(n), fp.abs_sum(D),
                                           fp.zero(n)))
    if variant == "sparsest_cut":
        mu = params.get("mu")
        mu = np.ones((n, n)) - np.eye(n) if mu is None else np.asarray(mu, dtype=float)
        if mu.shape != (n, n) or np.any(mu < 0) or not np.allclose(mu, mu.T):
            raise DomainError("mu must be a symmetric nonnegative matrix")
        iu, ju = np.triu_indices(n, 1)
        mw = mu[iu, ju]
        keep = mw > 0
        bits = (masks[:, None] >> np.arange(n)) & 1
        gt = ((bits[:, iu] != bits[:, ju]) * 1.0) @ mw
        if np.all(mw == np.rint(mw)):
            gt = np.rint(gt).astype(np.int64)
        f = SetFunction(n, table=cut, name="cut")
        g = SetFunction(n, table=gt, name="mu-cut")
        comps = (fp.edge_tv(n, I, J, W), fp.zero(n), fp.edge_tv(n, iu[keep], ju[keep], mw[keep]),
                 fp.zero(n))
        return ProblemInstance("sparsest_cut", graph, {"mu": mu.tolist()}, f, g, "min",
                               F=_batch(lambda X: _tv(X, I, J, W)),
                               G=_batch(lambda X: np.abs(X[:, iu] - X[:, ju]) @ mw),
                               components=comps)
    if variant == "isoperimetric_profile":
        k = int(params.get("k", n // 2))
        if not 1 <= k <= n:
            raise DomainError("need 1 <= k <= n")
        pos, neg, union = _pair_tables(n)
        f = SetFunction(n, "pair", table=cut[pos] + cut[neg], name="pair_cut")
        g = SetFunction(n, "pair", table=size[union], name="#A+#B")
        fam = size[union] <= k

        def sample(rng, m):
            X = rng.standard_normal((m, n))
            for r in range(m):
                keep = rng.permutation(n)[:rng.integers(1, k + 1)]
                mask = np.zeros(n, dtype=bool)
                mask[keep] = True
                X[r, ~mask] = 0.0
            return X
        return ProblemInstance("isoperimetric_profile", graph, {"k": k}, f, g, "min", family=fam,
                               F=_batch(lambda X: _tv(X, I, J, W)),
                               G=_batch(lambda X: np.abs(X).sum(axis=1)), sampler=sample,
                               components=(fp.edge_tv(n, I, J, W), fp.zero(n),
                                           fp.weighted_l1(np.ones(n)), fp.zero(n)))
    if variant == "vertex_boundary":
        kind = params.get("boundary", "ver")
        if kind not in ("int", "ext", "ver"):
            raise DomainError("boundary must be int, ext or ver")
        f = SetFunction(n, table=graph.vertex_boundary_table(kind), name=f"d_{kind}")
        g = SetFunction(n, table=np.minimum(size, n - size), name="min#")
        F, pieces = _vb_forms(graph, kind)
        comps = (fp.from_pieces(pieces(), f"d_{kind}"), fp.zero(n), fp.from_setfn(g), fp.zero(n))
        return ProblemInstance(f"vertex_boundary_{kind}", graph, {"boundary": kind}, f, g, "min",
                               F=_batch(F), G=_batch(lambda X: lovasz.weighted_median_l1(X, np.ones(n))),
                               components=comps)
    if variant == "cheeger_like":
        if graph.m == 0:
            raise DomainError("graph has no edges")
        m = graph.m
        d = graph.degrees()
        c = np.array([1 / d[i] + 1 / d[j] for i, j, _, _ in graph.edges])
        if "c" in params:
            cv = np.asarray(params["c"], dtype=float)
            c = np.array([cv[i] + cv[j] for i, j, _, _ in graph.edges])
        emask = np.arange(1 << m, dtype=np.int64)
        bits = (emask[:, None] >> np.arange(m)) & 1
        f = SetFunction(m, table=bits @ c, name="sum c")
        g = SetFunction(m, table=popcounts(m), name="#E'")
        inc = np.zeros((graph.n, m))
        cvert = 1 / d if "c" not in params else np.asarray(params["c"], dtype=float)
        for e, (i, j, _, _) in enumerate(graph.edges):
            inc[i, e] = inc[j, e] = 1.0

        def raw(X):
            X = np.atleast_2d(X)
            return (np.abs(X @ inc.T) @ cvert) / np.abs(X).sum(axis=1)
        return ProblemInstance("cheeger_like", graph, {}, f, g, "max",
                               F=_batch(lambda X: X @ c), G=_batch(lambda X: X.sum(axis=1)),
                               sampler=_nonneg_sampler(m), extras={"raw": _batch(raw)})
    if variant == "dual_cheeger":
        pos, neg, union = _pair_tables(n)
        d = graph.degrees()
        vol = graph.vol_table()
        f = SetFunction(n, "pair", table=2 * graph.between_table(pos, neg), name="2E(A,B)")
        g = SetFunction(n, "pair", table=vol[union], name="vol")
        comps = (fp.weighted_l1(d), fp.edge_tv(n, I, J, W, s=-np.ones(len(I))), fp.weighted_l1(d),
                 fp.zero(n))
        return ProblemInstance("dual_cheeger", graph, {}, f, g, "max",
                               F=_batch(lambda X: np.abs(X) @ d - np.abs(X[:, I] + X[:, J]) @ W),
                               G=_batch(lambda X: np.abs(X) @ d), components=comps)
    raise ValueError(f"unknown variant {variant!r}")


# -- registry used by the CLI


def build_problem(name: str, graph: Graph, **params) -> ProblemInstance:
    """Construct a catalog problem by name."""
    table = {
        "maxcut": lambda: maxcut(graph, float(params.get("p", 1.0)), params.get("form", "primal")),
        "mincut": lambda: mincut(graph),
        "maxkcut": lambda: max_kcut(graph, int(params.get("k", 3)), params.get("variant", "plain")),
        "cheeger": lambda: cheeger_cut(graph, params.get("A")),
        "dirichlet": lambda: dirichlet_cheeger(graph, params["A"]),
        "independence": lambda: independence_number(graph, params.get("form", "difference")),
        "k-independence": lambda: k_independence_number(graph, int(params.get("k", 2))),
        "matching": lambda: matching_number(graph),
        "vertex-cover": lambda: vertex_cover(graph),
        "multiway": lambda: multiway_partition(graph, params["terminals"]),
        "chromatic": lambda: chromatic_number(graph, bool(params.get("continuous", False))),
        "frustration": lambda: frustration_index(graph, params.get("form", "pair")),
        "modularity": lambda: modularity(graph, params.get("mu")),
        "normalized-cut": lambda: cheeger_variants(graph, "normalized_cut"),
        "sparsest-cut": lambda: cheeger_variants(graph, "sparsest_cut", mu=params.get("mu")),
        "isoperimetric": lambda: cheeger_variants(graph, "isoperimetric_profile",
                                                  k=int(params.get("k", graph.n // 2))),
        "vertex-boundary": lambda: cheeger_variants(graph, "vertex_boundary",
                                                    boundary=params.get("boundary", "ver")),
        "cheeger-like": lambda: cheeger_variants(graph, "cheeger_like"),
        "dual-cheeger": lambda: cheeger_variants(graph, "dual_cheeger"),
    }
    if name not in table:
        raise KeyError(f"unknown problem {name!r}; choose from {', '.join(sorted(table))}")
    return table[name]()


PROBLEMS = ("maxcut", "mincut", "maxkcut", "cheeger", "dirichlet", "independence",
            "k-independence", "matching", "vertex-cover", "multiway", "chromatic", "frustration",
            "modularity", "normalized-cut", "sparsest-cut", "isoperimetric", "vertex-boundary",
            "cheeger-like", "dual-cheeger")
