"""Lovász extensions: original, disjoint-pair and k-way variants.

The k-way extension of a function on k-tuples of subsets is the original
extension on the n*k element set (block l, vertex i) -> n*l + i, and the
k-way disjoint-pair extension is the disjoint-pair extension on the same
flattened set.  The table encodings of ``setfn`` are chosen so that this
holds index for index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .setfn import (DomainError, EnumerationLimitError, SetFunction, decode,
                    indicator, pair_decode, popcounts)

MAX_MOBIUS_N = 16
MAX_SUBDIFF_N = 8


@dataclass
class PLValue:
    """Value of a PL extension at a point with the canonical piece gradient.

    ``chain`` lists (level set argument, interval length) pairs, outermost
    level set first.
    """
    value: float
    subgradient: np.ndarray
    chain: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# batch kernels on flat tables


def _as_batch(x) -> tuple[np.ndarray, bool]:
    X = np.asarray(x)
    if X.ndim == 1:
        return X[None, :], True
    return X, False


def _original_batch(t: np.ndarray, X: np.ndarray, grad: bool = False):
    """Sum form of the original extension for each row of X."""
    m, n = X.shape
    order = np.argsort(X, axis=1, kind="stable")
    xs = np.take_along_axis(X, order, axis=1)
    full = (1 << n) - 1
    bits = np.left_shift(np.int64(1), order.astype(np.int64))
    # S[:, i] = elements after sorted position i; S[:, 0] = V
    S = np.empty((m, n + 1), dtype=np.int64)
    S[:, 0] = full
    S[:, 1:] = full - np.cumsum(bits, axis=1)
    fv = t[S]
    steps = np.diff(np.concatenate([np.zeros((m, 1), dtype=xs.dtype), xs], axis=1), axis=1)
    val = np.sum(steps * fv[:, :n], axis=1)
    if not grad:
        return val
    G = np.empty((m, n), dtype=np.result_type(fv.dtype, float))
    np.put_along_axis(G, order, fv[:, :n] - fv[:, 1:], axis=1)
    return val, G


def _pair_batch(t: np.ndarray, X: np.ndarray, grad: bool = False):
    """Sum form of the disjoint-pair extension (sort by |x|, zeros count as +)."""
    m, n = X.shape
    A = np.abs(X)
    order = np.argsort(A, axis=1, kind="stable")
    a_s = np.take_along_axis(A, order, axis=1)
    neg = np.take_along_axis(X < 0, order, axis=1)
    p3 = np.power(np.int64(3), order.astype(np.int64))
    digit = np.where(neg, 2 * p3, p3)
    # code of the pair formed by sorted positions i+1..n
    C = np.zeros((m, n + 1), dtype=np.int64)
    C[:, :n] = np.cumsum(digit[:, ::-1], axis=1)[:, ::-1]
    fv = t[C]
    steps = np.diff(np.concatenate([np.zeros((m, 1), dtype=a_s.dtype), a_s], axis=1), axis=1)
    val = np.sum(steps * fv[:, :n], axis=1)
    if not grad:
        return val
    sgn = np.where(neg, -1, 1)
    G = np.empty((m, n), dtype=np.result_type(fv.dtype, float))
    np.put_along_axis(G, order, sgn * (fv[:, :n] - fv[:, 1:]), axis=1)
    return val, G


def _flat_kind(f: SetFunction) -> str:
    return "original" if f.kind in ("powerset", "kway") else "pair"


def _check_point(f: SetFunction, X: np.ndarray):
    if X.shape[1] != f.n * f.k:
        raise DomainError(f"point length {X.shape[1]} does not match {f.n}*{f.k}")


def extension(f: SetFunction) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized evaluator x -> f^L(x) (rows of a 2-d array, or one vector)."""
    t = f.table()
    kern = _original_batch if _flat_kind(f) == "original" else _pair_batch

    def F(x):
        X, single = _as_batch(x)
        _check_point(f, X)
        v = kern(t, X)
        return v[0] if single else v
    return F


def extension_with_grad(f: SetFunction):
    t = f.table()
    kern = _original_batch if _flat_kind(f) == "original" else _pair_batch

    def F(x):
        X, single = _as_batch(x)
        _check_point(f, X)
        v, g = kern(t, X, grad=True)
        return (v[0], g[0]) if single else (v, g)
    return F


# ---------------------------------------------------------------------------
# single-point evaluators


def _chain_original(t, x):
    n = x.size
    order = np.argsort(x, kind="stable")
    full = (1 << n) - 1
    chain, S, prev = [], full, 0
    for i in range(n):
        step = x[order[i]] - prev
        chain.append((S, step))
        S &= ~(1 << int(order[i]))
        prev = x[order[i]]
    return chain


def _require(f: SetFunction, kinds: tuple[str, ...]):
    if f.kind not in kinds:
        raise DomainError(f"{f.kind} function not accepted here (need {kinds})")


def eval_original(f: SetFunction, x) -> PLValue:
    """Original extension: sort ascending, sum of increments times f(level set)."""
    _require(f, ("powerset",))
    x = np.asarray(x)
    v, g = _original_batch(f.table(), x[None, :], grad=True)
    chain = [(s, _num(step)) for s, step in _chain_original(f.table(), x)]
    return PLValue(_num(v[0]), g[0], chain)


def eval_original_integral(f: SetFunction, x) -> float:
    """Integral of f({x > t}) over [min x, max x] plus f(V) min x."""
    _require(f, ("powerset",))
    x = np.asarray(x)
    t = f.table()
    n = x.size
    vals = np.unique(x)
    weights = 1 << np.arange(n, dtype=np.int64)
    total = t[(1 << n) - 1] * vals[0]
    for lo, hi in zip(vals[:-1], vals[1:]):
        mask = int(np.sum(weights[x > lo]))
        total = total + (hi - lo) * t[mask]
    return _num(total)


def mobius(f: SetFunction) -> np.ndarray:
    """Möbius coefficients a(A) = sum over B in A of (-1)^{|A-B|} f(B)."""
    _require(f, ("powerset",))
    if f.n > MAX_MOBIUS_N:
        raise EnumerationLimitError(f"n={f.n} exceeds {MAX_MOBIUS_N}")
    a = f.table().copy()
    n = f.n
    for i in range(n):
        b = 1 << i
        a = a.reshape(-1, 2 * b)
        a[:, b:] -= a[:, :b]
    return a.reshape(-1)


def subset_minima(X: np.ndarray) -> np.ndarray:
    """M[r, A] = min over i in A of X[r, i] (M[:, 0] = 0)."""
    m, n = X.shape
    M = np.empty((m, 1 << n), dtype=np.result_type(X.dtype, float))
    M[:, 0] = np.inf
    for i in range(n):
        b = 1 << i
        M[:, b:2 * b] = np.minimum(M[:, :b], X[:, i:i + 1])
    M[:, 0] = 0
    return M


def eval_original_mobius(f: SetFunction, x) -> float:
    """Sum over A of a(A) * min_{i in A} x_i."""
    a = mobius(f)
    X, single = _as_batch(np.asarray(x))
    M = subset_minima(X)
    v = M[:, 1:] @ a[1:]
    return _num(v[0]) if single else v


def eval_disjoint_pair(f: SetFunction, x) -> PLValue:
    """Disjoint-pair extension: sort by |x|, level sets (V+^t, V-^t)."""
    _require(f, ("pair",))
    x = np.asarray(x)
    v, g = _pair_batch(f.table(), x[None, :], grad=True)
    return PLValue(_num(v[0]), g[0], _pair_chain(x))


def _pair_chain(x):
    order = np.argsort(np.abs(x), kind="stable")
    pos = sum(1 << i for i in range(x.size) if x[i] >= 0)
    neg = sum(1 << i for i in range(x.size) if x[i] < 0)
    chain, prev = [], 0
    for i in order:
        step = abs(x[i]) - prev
        chain.append(((pos, neg), _num(step)))
        pos &= ~(1 << int(i))
        neg &= ~(1 << int(i))
        prev = abs(x[i])
    return chain


def eval_disjoint_pair_integral(f: SetFunction, x) -> float:
    """Integral of f(V+^t, V-^t) over t in [0, |x|_inf]."""
    _require(f, ("pair",))
    x = np.asarray(x)
    t = f.table()
    p3 = 3 ** np.arange(x.size, dtype=np.int64)
    vals = np.unique(np.concatenate([[0], np.abs(x)]))
    total = 0
    for lo, hi in zip(vals[:-1], vals[1:]):
        code = int(np.sum(p3[x > lo]) + 2 * np.sum(p3[-x > lo]))
        total = total + (hi - lo) * t[code]
    return _num(total)


def eval_kway(f: SetFunction, x, disjoint: Optional[bool] = None) -> PLValue:
    """k-way (disjoint-pair) extension; x is the concatenation of k blocks."""
    _require(f, ("kway", "kway-pair"))
    if disjoint is None:
        disjoint = f.kind == "kway-pair"
    if disjoint != (f.kind == "kway-pair"):
        raise DomainError("disjoint flag does not match the function kind")
    x = np.asarray(x)
    if x.size != f.n * f.k:
        raise DomainError("layout mismatch")
    t = f.table()
    kern = _pair_batch if disjoint else _original_batch
    v, g = kern(t, x[None, :], grad=True)
    if disjoint:
        chain = [(decode("kway-pair", f.n, f.k, _code3(p, q)), s) for (p, q), s in _pair_chain(x)]
    else:
        chain = [(decode("kway", f.n, f.k, S), _num(s)) for S, s in _chain_original(t, x)]
    return PLValue(_num(v[0]), g[0], chain)


def _code3(pos: int, neg: int) -> int:
    code, p3 = 0, 1
    while pos or neg:
        if pos & 1:
            code += p3
        elif neg & 1:
            code += 2 * p3
        pos >>= 1
        neg >>= 1
        p3 *= 3
    return code


def evaluate_extension(f: SetFunction, x):
    """Value of the extension matching f's kind."""
    return extension(f)(np.asarray(x))


def subgradient_at(f: SetFunction, x, kind: Optional[str] = None) -> np.ndarray:
    """Canonical piece gradient at x (stable ascending sort, ties by index)."""
    if kind is not None:
        expect = {"original": ("powerset",), "disjoint-pair": ("pair",),
                  "k-way": ("kway",), "k-way-disjoint-pair": ("kway-pair",)}[kind]
        _require(f, expect)
    return extension_with_grad(f)(np.asarray(x, dtype=float))[1]


def _num(v):
    if isinstance(v, np.generic):
        return v.item()
    return v


# ---------------------------------------------------------------------------
# subdifferential at indicator points


def subdifferential_vertices(f: SetFunction, a) -> np.ndarray:
    """Distinct piece gradients of f^L at the indicator of ``a``.

    These are the gradients of all linear pieces whose closure contains the
    indicator point; their convex hull is the Clarke subdifferential there.
    For a set pair (A, B) the sort order puts the zero coordinates first in
    any order and with any sign (this realizes every intermediate pair
    containing (A, B)), followed by the support in any order.  Rows of the
    returned array are sorted lexicographically.
    """
    N = f.n * f.k
    if N > MAX_SUBDIFF_N:
        raise EnumerationLimitError(f"dimension {N} exceeds {MAX_SUBDIFF_N}")
    x = indicator(a, f.n, f.kind)
    t = f.table()
    supp = [i for i in range(N) if x[i] != 0]
    zero = [i for i in range(N) if x[i] == 0]
    top = [i for i in range(N) if x[i] > 0]
    bottom = [i for i in range(N) if x[i] < 0 or x[i] == 0]
    if _flat_kind(f) == "original":
        # ascending order: entries equal to 0 first, then entries equal to 1
        perms = _block_perms([bottom, top])
        Y = np.empty(perms.shape, dtype=float)
        np.put_along_axis(Y, perms, np.arange(N, dtype=float)[None, :].repeat(len(perms), 0), axis=1)
        _, G = _original_batch(t, Y, grad=True)
    else:
        perms = _block_perms([zero, supp])
        nz = len(zero)
        rows = []
        for signs in itertools.product((1.0, -1.0), repeat=nz):
            s = x.copy()
            s[zero] = signs
            Y = np.empty(perms.shape, dtype=float)
            mags = np.arange(1, N + 1, dtype=float)[None, :].repeat(len(perms), 0)
            np.put_along_axis(Y, perms, mags, axis=1)
            rows.append(Y * s[None, :])
        Y = np.concatenate(rows, axis=0)
        _, G = _pair_batch(t, Y, grad=True)
    return np.unique(G.astype(float), axis=0)


def _block_perms(blocks: list[list[int]]) -> np.ndarray:
    parts = [list(itertools.permutations(b)) for b in blocks]
    out = [sum(map(list, combo), []) for combo in itertools.product(*parts)]
    return np.array(out, dtype=np.int64).reshape(len(out), -1)


# ---------------------------------------------------------------------------
# original to disjoint-pair transforms


def transform_original_to_pair(h: SetFunction, rule: str, sign: int = 1) -> SetFunction:
    """Disjoint-pair functions built from a set function h.

    a: f(A,B) = h(A) + h(V-B) - h(V)           f^L = h^L
    b: f(A,B) = h(A) + h(B), h symmetric        f^L(x) = h^L(x) on all x
    c: f(A,B) = h(A)                            f^L = h^L on x >= 0
    d: f(A,B) = h(A u B)                        f^L(x) = h^L(|x|)
    e: f(A,B) = h(A) + sign * h(B)              f^L(x) = h^L(x+) + sign h^L(x-)
    """
    _require(h, ("powerset",))
    n = h.n
    t = h.table()
    full = (1 << n) - 1
    pos, neg = pair_decode(n)
    if rule == "a":
        tab = t[pos] + t[full & ~neg] - t[full]
    elif rule == "b":
        comp = t[full ^ np.arange(1 << n)]
        if not np.array_equal(comp, t) and not np.allclose(comp, t, atol=1e-12):
            raise DomainError("rule (b) needs a symmetric h")
        tab = t[pos] + t[neg]
    elif rule == "c":
        tab = t[pos]
    elif rule == "d":
        tab = t[pos | neg]
    elif rule == "e":
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        tab = t[pos] + sign * t[neg]
    else:
        raise ValueError(f"unknown rule {rule!r}")
    return SetFunction(n, "pair", table=tab, name=f"pair[{rule}]({h.name})")


# ---------------------------------------------------------------------------
# lattice operations and comonotonic additivity


def lattice_join_meet(x, y, sense: str = "S2"):
    """(join, meet): componentwise max/min for "S2", sign-aware ops for "BS2"."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("length mismatch")
    if sense == "S2":
        return np.maximum(x, y), np.minimum(x, y)
    if sense != "BS2":
        raise ValueError(f"unknown sense {sense!r}")
    nonneg = (x >= 0) & (y >= 0)
    nonpos = (x <= 0) & (y <= 0)
    join = np.where(nonneg, np.maximum(x, y), np.where(nonpos, np.minimum(x, y), 0.0))
    meet = np.where(nonneg, np.minimum(x, y), np.where(nonpos, np.maximum(x, y), 0.0))
    return join, meet


@dataclass
class AdditivityReport:
    ok: bool
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.ok


def sample_comonotonic_pair(n: int, rng: np.random.Generator, absolute: bool = False):
    """Two random vectors sharing an ordering (and a sign pattern if absolute)."""
    perm = rng.permutation(n)
    a = np.sort(rng.standard_normal(n))
    b = np.sort(rng.standard_normal(n))
    # random ties make the sampler hit boundaries too
    if n > 1 and rng.random() < 0.3:
        k = rng.integers(1, n)
        a[k] = a[k - 1]
        b[k] = b[k - 1]
    x = np.empty(n)
    y = np.empty(n)
    if absolute:
        a, b = np.abs(a), np.abs(b)
        a.sort()
        b.sort()
        s = rng.choice([-1.0, 1.0], size=n)
        x[perm] = a
        y[perm] = b
        return x * s, y * s
    x[perm] = a
    y[perm] = b
    return x, y


def check_comonotonic_additivity(F: Callable, n: int, trials: int = 500,
                                 absolute: bool = False, seed: int = 0,
                                 tol: float = 1e-9) -> AdditivityReport:
    """Refute F(x)+F(y) = F(x+y) on sampled (absolutely) comonotonic pairs."""
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        x, y = sample_comonotonic_pair(n, rng, absolute)
        lhs = float(F(x)) + float(F(y))
        rhs = float(F(x + y))
        if abs(lhs - rhs) > tol * max(1.0, abs(lhs)):
            return AdditivityReport(False, (x, y))
    return AdditivityReport(True)


# ---------------------------------------------------------------------------
# closed forms from the two extension tables


TABLE1 = ("cut", "constant", "volume", "min_volume", "size_product",
          "size_power", "volume_power", "vertex_boundary")
TABLE2 = ("pair_cut", "edges_between", "pair_constant", "pair_volume",
          "pair_min_volume", "edges_within", "size_edges_within", "pair_size_product")


def weighted_median_l1(X: np.ndarray, d: np.ndarray) -> np.ndarray:
    """min over t of sum_i d_i |x_i - t| for each row (attained at a coordinate)."""
    X, single = _as_batch(X)
    D = np.abs(X[:, :, None] - X[:, None, :])      # [row, candidate, i]
    v = np.min(np.einsum("rci,i->rc", D, d), axis=1)
    return v[0] if single else v


def _power_min_sum(X: np.ndarray, w: np.ndarray, k: int) -> np.ndarray:
    """sum over (i_1..i_k) of w_{i_1}..w_{i_k} min(x_{i_1},..,x_{i_k})."""
    m, n = X.shape
    if n ** k <= 200_000:
        idx = np.array(list(itertools.product(range(n), repeat=k)), dtype=np.int64)
        wt = np.prod(w[idx], axis=1)
        mins = np.min(X[:, idx], axis=2)
        return mins @ wt
    # tuples whose minimum sits at sorted position r (ties by position)
    order = np.argsort(X, axis=1, kind="stable")
    xs = np.take_along_axis(X, order, axis=1)
    ws = w[order]
    tail = np.cumsum(ws[:, ::-1], axis=1)[:, ::-1]
    nxt = np.concatenate([tail[:, 1:], np.zeros((m, 1))], axis=1)
    return np.sum(xs * (tail ** k - nxt ** k), axis=1)


def closed_form(entry: str, graph, **params) -> Callable[[np.ndarray], np.ndarray]:
    """Closed-form extension of a catalogued graph set function.

    Entries of the original table: cut, constant (C), volume, min_volume,
    size_product, size_power (k), volume_power (k), vertex_boundary.
    Entries of the disjoint-pair table: pair_cut, edges_between,
    pair_constant (C), pair_volume, pair_min_volume, edges_within,
    size_edges_within, pair_size_product.
    Returned callables accept a vector or a 2-d batch of row vectors.
    """
    I, J, W = graph.edge_arrays()
    d = graph.degrees()
    n = graph.n
    C = params.get("C", 1.0)
    k = int(params.get("k", 2))
    nbr = [np.array(sorted(set(graph.neighbors(i)) | {i})) for i in range(n)]

    def wrap(fn):
        def F(x):
            X, single = _as_batch(np.asarray(x, dtype=float))
            v = fn(X)
            return v[0] if single else v
        return F

    forms = {
        "cut": lambda X: np.abs(X[:, I] - X[:, J]) @ W,
        "constant": lambda X: C * X.max(axis=1),
        "volume": lambda X: X @ d,
        "min_volume": lambda X: weighted_median_l1(X, d),
        "size_product": lambda X: np.abs(X[:, :, None] - X[:, None, :]).sum(axis=(1, 2)) / 2,
        "size_power": lambda X: _power_min_sum(X, np.ones(n), k),
        "volume_power": lambda X: _power_min_sum(X, d, k),
        "vertex_boundary": lambda X: sum(X[:, nb].max(axis=1) - X[:, nb].min(axis=1) for nb in nbr),
        "pair_cut": lambda X: np.abs(X[:, I] - X[:, J]) @ W,
        "edges_between": lambda X: 0.5 * (np.abs(X) @ d - np.abs(X[:, I] + X[:, J]) @ W),
        "pair_constant": lambda X: C * np.abs(X).max(axis=1),
        "pair_volume": lambda X: np.abs(X) @ d,
        "pair_min_volume": lambda X: weighted_median_l1(X, d),
        "edges_within": lambda X: np.minimum(np.abs(X[:, I]), np.abs(X[:, J])) @ W,
        "size_edges_within": lambda X: np.sum(
            np.minimum(np.abs(X)[:, :, None], np.minimum(np.abs(X[:, I]), np.abs(X[:, J]))[:, None, :]) @ W,
            axis=1),
        "pair_size_product": lambda X: np.abs(np.abs(X)[:, :, None] - np.abs(X)[:, None, :]).sum(axis=(1, 2)) / 2,
    }
    if entry not in forms:
        raise KeyError(f"unknown table entry {entry!r}")
    return wrap(forms[entry])


def catalog_setfunction(entry: str, graph, **params) -> SetFunction:
    """The set (pair) function whose extension ``closed_form(entry)`` is."""
    n = graph.n
    C = params.get("C", 1)
    k = int(params.get("k", 2))
    full = (1 << n) - 1
    masks = np.arange(1 << n, dtype=np.int64)
    cut = graph.cut_table()
    vol = graph.vol_table()
    size = popcounts(n)
    inner = graph.inner_table()
    if entry in TABLE1:
        if entry == "cut":
            t = cut
        elif entry == "constant":
            t = np.full(1 << n, C)
        elif entry == "volume":
            t = vol
        elif entry == "min_volume":
            t = np.minimum(vol, vol[full ^ masks])
        elif entry == "size_product":
            t = size * (n - size)
        elif entry == "size_power":
            t = size ** k
        elif entry == "volume_power":
            t = vol ** k
        else:
            t = graph.vertex_boundary_table("ver")
        return SetFunction(n, table=t, name=entry)
    if entry not in TABLE2:
        raise KeyError(f"unknown table entry {entry!r}")
    pos, neg = pair_decode(n)
    union = pos | neg
    if entry == "pair_cut":
        t = cut[pos] + cut[neg]
    elif entry == "edges_between":
        t = graph.between_table(pos, neg)
    elif entry == "pair_constant":
        t = np.full(3 ** n, C)
    elif entry == "pair_volume":
        t = vol[pos] + vol[neg]
    elif entry == "pair_min_volume":
        mv = np.minimum(vol, vol[full ^ masks])
        t = mv[pos] + mv[neg]
    elif entry == "edges_within":
        t = inner[union]
    elif entry == "size_edges_within":
        t = size[union] * inner[union]
    else:
        t = size[union] * (n - size[union])
    return SetFunction(n, "pair", table=t, name=entry)


# ---------------------------------------------------------------------------
# Lipschitz constants


def lipschitz_bounds(f: SetFunction) -> tuple[float, float]:
    """(L1, Linf) with |f^L(x)-f^L(y)| <= L1 |x-y|_1 and <= Linf |x-y|_inf.

    Both follow from the sum form: each piece gradient coordinate is a
    difference of two table values, and the gradient coordinates telescope.
    """
    t = np.abs(f.table()).astype(float)
    return 2 * float(t.max()), 2 * float(t.sum())
