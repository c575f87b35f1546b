"""Combinatorial eigenvalue problem of a pair of PL extensions.

(lambda, a) is an eigenpair of (f, g) when the subdifferentials of f^L and
g^L at the indicator of ``a`` satisfy  grad f(a)  meets  lambda * grad g(a).
Both subdifferentials are convex hulls of finitely many piece gradients
(see ``lovasz.subdifferential_vertices``), so the test is a small LP:
minimize the sup-norm gap between a convex combination of f-vertices and
lambda times a convex combination of g-vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

import numpy as np
from scipy.optimize import linprog

from .lovasz import MAX_SUBDIFF_N, extension, subdifferential_vertices
from .setfn import (DomainError, EnumerationLimitError, SetFunction, decode,
                    indicator, pair_decode, popcounts)

TOL = 1e-8


class HypothesisError(DomainError):
    """Input violates a structural hypothesis (symmetry, monotonicity, ...)."""


@dataclass
class EigenCertificate:
    lam: Any
    eigenset: Any
    witness: Optional[np.ndarray]
    residual: float
    accepted: bool
    mode: str = "exact"

    def __bool__(self):
        return self.accepted

    def to_json(self) -> dict:
        return {"lambda": float(self.lam), "eigenset": _jsonable(self.eigenset),
                "residual": self.residual, "accepted": self.accepted, "mode": self.mode,
                "witness": None if self.witness is None else [float(v) for v in self.witness]}


def _jsonable(a):
    if isinstance(a, tuple):
        return [_jsonable(x) for x in a]
    return int(a)


def hull_gap(U: np.ndarray, W: np.ndarray, lam: float):
    """min over simplex weights of |U^T alpha - lam W^T beta|_inf.

    Returns (gap, witness point U^T alpha).
    """
    p, N = U.shape
    q = W.shape[0]
    # variables: alpha (p), beta (q), t
    D = np.hstack([U.T, -lam * W.T])                     # N x (p+q)
    ones = np.ones((N, 1))
    A_ub = np.vstack([np.hstack([D, -ones]), np.hstack([-D, -ones])])
    b_ub = np.zeros(2 * N)
    A_eq = np.zeros((2, p + q + 1))
    A_eq[0, :p] = 1
    A_eq[1, p:p + q] = 1
    c = np.zeros(p + q + 1)
    c[-1] = 1
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1, 1],
                  bounds=[(0, None)] * (p + q + 1), method="highs")
    if res.status != 0:
        raise RuntimeError(f"LP failed: {res.message}")
    alpha = res.x[:p]
    return float(res.x[-1]), alpha @ U


def _sample_vertices(f: SetFunction, a, count: int, rng: np.random.Generator) -> np.ndarray:
    """Random piece gradients at the indicator of a (for large n)."""
    from .lovasz import extension_with_grad
    x = indicator(a, f.n, f.kind)
    N = x.size
    F = extension_with_grad(f)
    rows = []
    pair = f.kind in ("pair", "kway-pair")
    for _ in range(count):
        eps = rng.random(N) * 1e-3
        if pair:
            s = np.where(x != 0, np.sign(x), rng.choice([-1.0, 1.0], size=N))
            y = s * (np.abs(x) + eps)
        else:
            y = x + eps
        rows.append(F(y)[1])
    return np.unique(np.array(rows), axis=0)


def verify_eigenpair(f: SetFunction, g: SetFunction, lam, a, tol: float = TOL,
                     samples: int = 256, seed: int = 0,
                     _cache: Optional[dict] = None) -> EigenCertificate:
    """Decide whether grad f(a) and lam * grad g(a) intersect.

    Exact vertex enumeration up to dimension 8; beyond that random piece
    gradients are used, so an acceptance is sound and a rejection only
    means "not certified".
    """
    if (f.kind, f.n, f.k) != (g.kind, g.n, g.k):
        raise DomainError("f and g must share a domain")
    N = f.n * f.k
    exact = N <= MAX_SUBDIFF_N
    key = a
    if _cache is not None and key in _cache:
        U, W = _cache[key]
    else:
        if exact:
            U, W = subdifferential_vertices(f, a), subdifferential_vertices(g, a)
        else:
            rng = np.random.default_rng(seed)
            U = _sample_vertices(f, a, samples, rng)
            W = _sample_vertices(g, a, samples, rng)
        if _cache is not None:
            _cache[key] = (U, W)
    gap, wit = hull_gap(U, W, float(lam))
    ok = gap <= tol
    return EigenCertificate(lam, a, wit if ok else None, gap, ok,
                            "exact" if exact else "sampled")


def _all_arguments(f: SetFunction):
    return [decode(f.kind, f.n, f.k, i) for i in range(1, f.size)]


def enumerate_eigenvalues(f: SetFunction, g: SetFunction, tol: float = TOL,
                          candidates: Optional[list] = None) -> list[tuple[Any, Any]]:
    """All eigenvalues with a representative indicator eigenvector.

    Every eigenvalue is a ratio f(a)/g(a) at some indicator eigenvector, so
    the candidates are those ratios; for each distinct value the arguments
    realizing it are tried, largest support first, until one certifies.
    """
    N = f.n * f.k
    if N > MAX_SUBDIFF_N:
        raise EnumerationLimitError(f"dimension {N} exceeds {MAX_SUBDIFF_N}")
    ft, gt = f.table(), g.table()
    exact = ft.dtype.kind in "iu" and gt.dtype.kind in "iu"
    groups: dict = {}
    idxs = np.arange(1, f.size) if candidates is None else np.asarray(candidates)
    if f.kind == "pair":
        # the subdifferentials at (B,A) are the negatives of those at (A,B),
        # so for swap-symmetric f and g one argument of each mirror pair suffices
        pos, neg = pair_decode(f.n)
        from .setfn import ternary_weights
        t3 = ternary_weights(f.n)
        mirror = t3[neg] + 2 * t3[pos]
        if np.array_equal(ft, ft[mirror]) and np.array_equal(gt, gt[mirror]):
            idxs = idxs[idxs <= mirror[idxs]]
        support = popcounts(f.n)[pos | neg]
    else:
        support = np.zeros(f.size, dtype=np.int64)
    # full-support arguments first: they certify most often
    idxs = idxs[np.argsort(-support[idxs], kind="stable")]
    for i in idxs.tolist():
        gi = gt[i].item()
        if gi == 0:
            continue
        lam = Fraction(int(ft[i]), int(gi)) if exact else round(ft[i].item() / gi, 12)
        groups.setdefault(lam, []).append(i)
    cache: dict = {}
    out = []
    for lam in sorted(groups):
        for i in groups[lam]:
            a = decode(f.kind, f.n, f.k, i)
            cert = verify_eigenpair(f, g, lam, a, tol, _cache=cache)
            if cert.accepted:
                out.append((lam, a))
                break
    return out


# ---------------------------------------------------------------------------
# graph pairs


def cut_pair(graph) -> tuple[SetFunction, SetFunction]:
    """f(A,B) = |dA| + |dB| and g = 2 on nonempty pairs: F = sum w|xi-xj|, G = 2|x|_inf."""
    n = graph.n
    cut = graph.cut_table()
    pos, neg = pair_decode(n)
    f = SetFunction(n, "pair", table=cut[pos] + cut[neg], name="cut_pair")
    g = SetFunction(n, "pair", table=np.full(3 ** n, 2, dtype=np.int64), name="two")
    return f, g


def minmaxcut_via_eigen(graph):
    """(mincut, maxcut, eigenvalues) from the eigenvalues of the cut pair."""
    f, g = cut_pair(graph)
    eig = enumerate_eigenvalues(f, g)
    lams = [lam for lam, _ in eig]
    mincut = lams[1] if len(lams) > 1 else lams[0]
    return mincut, lams[-1], lams


@dataclass
class CheegerReport:
    value: Any
    argmin: int
    variational_ok: bool
    samples: int


def _check_cheeger_hypotheses(f: SetFunction, g: SetFunction):
    n = f.n
    full = (1 << n) - 1
    masks = np.arange(1 << n)
    ft, gt = f.table(), g.table()
    if not np.allclose(ft, ft[full ^ masks]):
        raise HypothesisError("f must be symmetric")
    if np.any(gt[1:] <= 0):
        raise HypothesisError("g must be positive on nonempty sets")
    for i in range(n):
        without = masks[(masks >> i) & 1 == 0]
        if np.any(gt[without | 1 << i] < gt[without] - 1e-12):
            raise HypothesisError("g must be non-decreasing")
    from .setfn import is_submodular
    if not is_submodular(g):
        raise HypothesisError("g must be submodular")


def second_eigenvalue_cheeger(f: SetFunction, g: SetFunction, samples: int = 200,
                              seed: int = 0) -> CheegerReport:
    """Ch(f,g) = min over proper A of f(A)/min(g(A), g(V-A)), with a variational cross-check.

    The check samples x orthogonal to 1 and confirms that
    f^L(x) / min_t (g^L((x-t)+) + g^L((x-t)-)) never drops below Ch.
    """
    if f.kind != "powerset" or g.kind != "powerset":
        raise DomainError("powerset functions expected")
    n = f.n
    if n > 12:
        raise EnumerationLimitError("n <= 12 required")
    _check_cheeger_hypotheses(f, g)
    full = (1 << n) - 1
    masks = np.arange(1, full)
    ft, gt = f.table(), g.table()
    den = np.minimum(gt[masks], gt[full ^ masks])
    from .oracle import _best, ratio_value
    win = _best(ft[masks], den, "min", 1e-12)
    i = int(win[0])
    value = ratio_value(ft[masks][i].item(), den[i].item())
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((samples, n))
    X -= X.mean(axis=1, keepdims=True)
    F, G = extension(f), extension(g)
    num = F(X)
    # min over t of the piecewise-linear convex map t -> G((x-t)+) + G((x-t)-)
    # is attained at a coordinate of x
    best = np.full(samples, np.inf)
    for c in range(n):
        Y = X - X[:, c:c + 1]
        best = np.minimum(best, G(np.maximum(Y, 0)) + G(np.maximum(-Y, 0)))
    ok = bool(np.all(num / best >= float(value) - 1e-9))
    return CheegerReport(value, int(masks[i]), ok, samples)


# ---------------------------------------------------------------------------
# signed graphs


@dataclass
class SignedEigenSystem:
    accepted: bool
    lam: float
    z: Optional[np.ndarray]
    d_pos: list
    d_neg: list
    d_zero: list
    violation: float

    def __bool__(self):
        return self.accepted


def signed_eigen_check(graph, lam: float, x, tol: float = TOL) -> SignedEigenSystem:
    """Feasibility of the coordinate-form eigen system of (sum w|xi - s xj|, |x|_inf).

    One variable z_e per edge {i<j} stands for z_ij; z_ji = -s_ij z_ij.
    z_e lies in Sgn(x_i - s x_j); with r_i = sum_j w_ij z_ij the system asks
    r_i = 0 off the extremal set, r_i in lam*sign(x_i)*[0,1] on it and
    sum_i |r_i| = lam.  The LP minimizes the largest violation.
    """
    x = np.asarray(x, dtype=float)
    n = graph.n
    if x.size != n or not np.any(x):
        raise DomainError("x must be a nonzero vector of length n")
    norm = np.abs(x).max()
    d_pos = [i for i in range(n) if x[i] == norm]
    d_neg = [i for i in range(n) if -x[i] == norm]
    d_zero = [i for i in range(n) if abs(x[i]) < norm]
    m = graph.m
    bounds = []
    R = np.zeros((n, m))
    for e, (i, j, w, s) in enumerate(graph.edges):
        d = x[i] - s * x[j]
        bounds.append((1, 1) if d > 0 else (-1, -1) if d < 0 else (-1, 1))
        R[i, e] += w
        R[j, e] += -s * w
    # variables: z (m), t
    rows_ub, rhs_ub = [], []
    rows_eq_soft = []

    def soft_eq(row, val):
        rows_eq_soft.append((row, val))

    for i in d_zero:
        soft_eq(R[i], 0.0)
    for i in d_pos:
        rows_ub.append(-R[i]); rhs_ub.append(0.0)
        rows_ub.append(R[i]); rhs_ub.append(lam)
    for i in d_neg:
        rows_ub.append(R[i]); rhs_ub.append(0.0)
        rows_ub.append(-R[i]); rhs_ub.append(lam)
    total = R[d_pos].sum(axis=0) - R[d_neg].sum(axis=0)
    soft_eq(total, lam)
    A, b = [], []
    for row, rhs in zip(rows_ub, rhs_ub):
        A.append(np.append(row, -1.0)); b.append(rhs)
    for row, val in rows_eq_soft:
        A.append(np.append(row, -1.0)); b.append(val)
        A.append(np.append(-row, -1.0)); b.append(-val)
    c = np.zeros(m + 1)
    c[-1] = 1
    res = linprog(c, A_ub=np.array(A), b_ub=np.array(b),
                  bounds=bounds + [(0, None)], method="highs")
    if res.status != 0:
        raise RuntimeError(f"LP failed: {res.message}")
    viol = float(res.x[-1])
    ok = viol <= tol
    return SignedEigenSystem(ok, lam, res.x[:m] if ok else None, d_pos, d_neg, d_zero, viol)


def signed_pair(graph) -> tuple[SetFunction, SetFunction]:
    """f(A,B) = sum_e w |x_i - s x_j| at 1_A - 1_B, and g = 1 (so G = |x|_inf)."""
    n = graph.n
    pos, neg = pair_decode(n)
    t = np.zeros(3 ** n)
    for i, j, w, s in graph.edges:
        xi = ((pos >> i) & 1) - ((neg >> i) & 1)
        xj = ((pos >> j) & 1) - ((neg >> j) & 1)
        t += w * np.abs(xi - s * xj)
    t = graph._wcast(t)
    g = SetFunction(n, "pair", table=np.ones(3 ** n, dtype=np.int64), name="one")
    return SetFunction(n, "pair", table=t, name="signed_tv"), g
