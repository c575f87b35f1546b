"""Fractional programming for ratios of differences of convex functions.

Problems have the form  opt F/G  with F = F1 - F2 and G = G1 - G2, each
component convex and positively homogeneous.  Solvers:

* ``dinkelbach_solve``: parametric scheme r <- F/G at argopt F - rG.
* ``ipsd_solve``: the mixed inverse-power / steepest-descent scheme; the
  concave parts are linearized by subgradients and a convex inner problem
  is solved over the ball (scheme "ball") or over the whole space followed by
  a normalization (scheme "normalized").
* ``ipsd_solve_generalized``: same, branching on the sign of r so that the
  numerator may change sign.
* ``inverse_power_step_normalized`` / ``normalized_inverse_power``: the
  scheme for p-homogeneous F, G with p > 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional

import numpy as np
from scipy.optimize import linprog, minimize

from . import lovasz
from .setfn import SetFunction, decode, is_bisubmodular, is_submodular

TERMINATIONS = ("converged", "g-vanished", "max-iter")


# ---------------------------------------------------------------------------
# components


@dataclass
class ConvexComponent:
    """A convex, positively homogeneous function with a subgradient oracle.

    ``pieces`` (optional) is a list of matrices M_t with
    F(x) = sum_t max_r (M_t x)_r, which lets the inner solver write an exact
    epigraph LP.  ``polyhedral`` marks functions that equal the max of the
    linear pieces returned by ``subgrad`` (cutting planes are then exact).
    ``quadratic`` (optional) is Q with F(x) = x^T Q x.
    """
    eval: Callable[[np.ndarray], float]
    subgrad: Callable[[np.ndarray], np.ndarray]
    degree: float = 1.0
    pieces: Optional[list] = None
    polyhedral: bool = False
    quadratic: Optional[np.ndarray] = None
    name: str = ""
    is_zero: bool = False

    def __call__(self, x) -> float:
        return float(self.eval(np.asarray(x, dtype=float)))


def zero(n: int) -> ConvexComponent:
    return ConvexComponent(lambda x: 0.0, lambda x: np.zeros(n), pieces=[], polyhedral=True,
                           name="0", is_zero=True)


def from_pieces(pieces: list, name: str = "") -> ConvexComponent:
    pieces = [np.atleast_2d(np.asarray(M, dtype=float)) for M in pieces]
    if not pieces:
        raise ValueError("use zero() for an empty component")
    n = pieces[0].shape[1]
    # stack equal-shaped pieces for a vectorized evaluation
    shapes = {M.shape for M in pieces}
    if len(shapes) == 1:
        T = np.stack(pieces)                      # (terms, rows, n)

        def ev(x):
            return float(np.einsum("trn,n->tr", T, x).max(axis=1).sum())

        def sg(x):
            v = np.einsum("trn,n->tr", T, x)
            r = np.argmax(v, axis=1)
            return T[np.arange(len(T)), r].sum(axis=0)
    else:
        def ev(x):
            return float(sum((M @ x).max() for M in pieces))

        def sg(x):
            g = np.zeros(n)
            for M in pieces:
                g += M[int(np.argmax(M @ x))]
            return g
    return ConvexComponent(ev, sg, pieces=pieces, polyhedral=True, name=name)


def abs_sum(D: np.ndarray, w=None, name: str = "") -> ConvexComponent:
    """sum_e w_e |<D_e, x>|."""
    D = np.atleast_2d(np.asarray(D, dtype=float))
    w = np.ones(len(D)) if w is None else np.asarray(w, dtype=float)
    if np.any(w < 0):
        raise ValueError("abs_sum needs nonnegative weights")
    D = D * w[:, None]
    D = D[np.any(D != 0, axis=1)]
    if len(D) == 0:
        return zero(np.atleast_2d(np.asarray(D)).shape[1] if D.ndim == 2 else 0)
    comp = from_pieces([np.vstack([d, -d]) for d in D], name)
    comp.eval = lambda x: float(np.abs(D @ x).sum())
    comp.subgrad = lambda x: np.where(D @ x >= 0, 1.0, -1.0) @ D
    return comp


def edge_tv(n: int, I, J, W, s=None, name: str = "tv") -> ConvexComponent:
    """sum over edges of w |x_i - s x_j| (s = +1 by default)."""
    I, J, W = np.asarray(I), np.asarray(J), np.asarray(W, dtype=float)
    if len(I) == 0:
        return zero(n)
    s = np.ones(len(I)) if s is None else np.asarray(s, dtype=float)
    D = np.zeros((len(I), n))
    D[np.arange(len(I)), I] += 1.0
    D[np.arange(len(I)), J] -= s
    return abs_sum(D, W, name)


def linf(n: int, c: float = 1.0) -> ConvexComponent:
    """c |x|_inf."""
    if c == 0:
        return zero(n)
    E = np.eye(n) * c
    comp = from_pieces([np.vstack([E, -E])], f"{c}*linf")
    comp.eval = lambda x: c * float(np.abs(x).max())
    return comp


def max_coord(n: int, c: float = 1.0) -> ConvexComponent:
    """c max_i x_i (c >= 0)."""
    return from_pieces([np.eye(n) * c], f"{c}*max")


def max_minus_min(n: int, c: float = 1.0) -> ConvexComponent:
    """c (max_i x_i - min_i x_i)."""
    rows = [c * (np.eye(n)[i] - np.eye(n)[j]) for i in range(n) for j in range(n) if i != j]
    comp = from_pieces([np.array(rows)], f"{c}*range")
    comp.eval = lambda x: c * float(x.max() - x.min())
    return comp


def weighted_l1(d) -> ConvexComponent:
    d = np.asarray(d, dtype=float)
    return abs_sum(np.eye(len(d)), d, "wl1")


def from_setfn(f: SetFunction, name: str = "") -> ConvexComponent:
    """Lovász extension of f (convex iff f is submodular / bisubmodular)."""
    F = lovasz.extension_with_grad(f)
    if f.kind == "powerset":
        convex = bool(is_submodular(f))
    elif f.kind == "pair":
        convex = bool(is_bisubmodular(f))
    else:
        convex = False
    return ConvexComponent(lambda x: float(F(x)[0]), lambda x: np.asarray(F(x)[1], dtype=float),
                           polyhedral=convex, name=name or f.name)


def quadratic(Q) -> ConvexComponent:
    Q = np.asarray(Q, dtype=float)
    Q = (Q + Q.T) / 2
    return ConvexComponent(lambda x: float(x @ Q @ x), lambda x: 2 * Q @ x, degree=2.0,
                           quadratic=Q, name="quad")


def power(c: ConvexComponent, p: float) -> ConvexComponent:
    """c(x)^p for a nonnegative convex c and p >= 1."""
    if p == 1:
        return c

    def sg(x):
        v = c.eval(x)
        return p * v ** (p - 1) * c.subgrad(x) if v > 0 else np.zeros_like(x)
    return ConvexComponent(lambda x: c.eval(x) ** p, sg, degree=c.degree * p,
                           name=f"({c.name})^{p}")


def combine(terms: list, n: int, name: str = "") -> ConvexComponent:
    """Nonnegative combination sum_k a_k c_k of components."""
    terms = [(float(a), c) for a, c in terms if a != 0 and not c.is_zero]
    if not terms:
        return zero(n)
    if any(a < 0 for a, _ in terms):
        raise ValueError("combine needs nonnegative coefficients")
    pieces = None
    if all(c.pieces is not None for _, c in terms):
        pieces = [a * M for a, c in terms for M in c.pieces]
    return ConvexComponent(lambda x: sum(a * c.eval(x) for a, c in terms),
                           lambda x: sum(a * c.subgrad(x) for a, c in terms),
                           degree=terms[0][1].degree, pieces=pieces,
                           polyhedral=all(c.polyhedral for _, c in terms), name=name)


# ---------------------------------------------------------------------------
# problems and traces


@dataclass
class RatioProblem:
    """opt (f1 - f2)/(g1 - g2) over nonzero x, with optional discrete data.

    ``f``/``g`` are the set functions whose extensions the components
    represent (needed for extraction and certification); ``family`` is a
    boolean mask over their table indices marking feasible arguments;
    ``offset`` is added to ratios when values are reported.
    """
    n: int
    f1: ConvexComponent
    f2: ConvexComponent
    g1: ConvexComponent
    g2: ConvexComponent
    sense: str = "min"
    ball: str = "linf"
    prox_weight: float = 1.0
    f: Optional[SetFunction] = None
    g: Optional[SetFunction] = None
    family: Optional[np.ndarray] = None
    domain: Optional[Callable[[np.ndarray], bool]] = None
    offset: float = 0.0
    name: str = ""

    def F(self, x) -> float:
        return self.f1(x) - self.f2(x)

    def G(self, x) -> float:
        return self.g1(x) - self.g2(x)

    def ratio(self, x) -> float:
        return self.F(x) / self.G(x)

    def with_prox(self, mu: float) -> "RatioProblem":
        from dataclasses import replace
        return replace(self, prox_weight=mu)


@dataclass
class SolveOptions:
    max_iter: int = 1000
    tol: float = 1e-10
    patience: int = 3
    scheme: str = "ball"
    verify_eigen: bool = False
    inner_budget: int = 500
    inner_method: str = "auto"
    seed: Optional[int] = None


@dataclass
class SolveTrace:
    iterates: list = field(default_factory=list)       # (x, r)
    termination: str = "max-iter"
    sense: str = "min"
    eigen_residual: Optional[float] = None
    certified: Optional[bool] = None
    extracted: Optional[tuple] = None                    # (argument, discrete ratio)
    seed: Optional[int] = None
    rejected_steps: int = 0

    @property
    def ratios(self) -> list:
        return [r for _, r in self.iterates]

    @property
    def value(self):
        return self.iterates[-1][1]

    @property
    def x(self) -> np.ndarray:
        return self.iterates[-1][0]

    def is_monotone(self, tol: float = 1e-12) -> bool:
        r = [float(v) for v in self.ratios]
        if self.sense == "min":
            return all(b <= a + tol * max(1.0, abs(a)) for a, b in zip(r, r[1:]))
        return all(b >= a - tol * max(1.0, abs(a)) for a, b in zip(r, r[1:]))

    def to_json(self, thin: int = 0) -> dict:
        its = self.iterates
        if thin and len(its) > thin:
            step = max(1, len(its) // thin)
            its = its[::step] + ([its[-1]] if (len(its) - 1) % step else [])
        out = {
            "termination": self.termination, "sense": self.sense, "seed": self.seed,
            "iterations": len(self.iterates) - 1,
            "ratios": [_json_num(r) for _, r in its],
            "final_x": [round(float(v), 12) for v in self.x],
            "eigen_residual": self.eigen_residual, "certified": self.certified,
            "rejected_steps": self.rejected_steps,
        }
        if self.extracted is not None:
            arg, val = self.extracted
            out["extracted"] = {"argument": _json_arg(arg), "value": _json_num(val)}
        return out


def _json_num(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else float(v)
    v = float(v)
    return round(v, 12)


def _json_arg(a):
    if isinstance(a, tuple):
        return [_json_arg(b) for b in a]
    return int(a)


# ---------------------------------------------------------------------------
# Dinkelbach


def _exactify(v):
    if isinstance(v, (Fraction, int, np.integer)):
        return Fraction(int(v)) if not isinstance(v, Fraction) else v
    v = float(v)
    if v.is_integer():
        return Fraction(int(v))
    return v


def dinkelbach_solve(F: Callable, G: Callable, inner: Callable, x0, sense: str = "min",
                     tol: float = 0.0, max_iter: int = 100000) -> SolveTrace:
    """Dinkelbach iteration r <- F(x)/G(x), x <- argopt_S F - r G.

    ``inner(r)`` must return an optimizer of F - rG over the feasible set S
    (an exact one for the global guarantee).  Integer-valued F, G are
    carried as fractions, so integer instances terminate exactly.
    """
    x = x0
    fx, gx = _exactify(F(x)), _exactify(G(x))
    if gx <= 0:
        raise ValueError("G(x0) must be positive")
    r = fx / gx
    tr = SolveTrace([(x, r)], sense=sense)
    for _ in range(max_iter):
        x = inner(r)
        fx, gx = _exactify(F(x)), _exactify(G(x))
        if gx <= 0:
            tr.termination = "g-vanished"
            return tr
        r_new = fx / gx
        better = r_new < r if sense == "min" else r_new > r
        if not better or abs(float(r_new - r)) <= tol:
            tr.termination = "converged"
            if better:
                tr.iterates.append((x, r_new))
            return tr
        r = r_new
        tr.iterates.append((x, r))
    tr.termination = "max-iter"
    return tr


def discrete_inner_oracle(f: SetFunction, g: SetFunction, sense: str = "min",
                          family: Optional[np.ndarray] = None) -> Callable:
    """Exact argopt of f - r g over feasible arguments with g > 0 (by enumeration).

    Returns the argument (canonical form); ties go to the smallest index.
    """
    ft, gt = f.table(), g.table()
    keep = gt > 0
    keep[0] = False
    if family is not None:
        keep &= family
    idx = np.nonzero(keep)[0]
    fi, gi = ft[idx], gt[idx]
    integer = fi.dtype.kind in "iu" and gi.dtype.kind in "iu"

    def inner(r):
        if integer and isinstance(r, Fraction):
            p, q = r.numerator, r.denominator
            if max(abs(p), q) < 2 ** 31:
                v = q * fi - p * gi
            else:
                v = np.array([q * int(a) - p * int(b) for a, b in zip(fi, gi)], dtype=object)
        else:
            v = fi - float(r) * gi
        j = int(np.argmin(v) if sense == "min" else np.argmax(v))
        return decode(f.kind, f.n, f.k, int(idx[j]))
    return inner


def dinkelbach_discrete(f: SetFunction, g: SetFunction, sense: str = "min",
                        family: Optional[np.ndarray] = None, a0=None) -> SolveTrace:
    """Dinkelbach on set functions with the exact enumeration oracle."""
    inner = discrete_inner_oracle(f, g, sense, family)
    if a0 is None:
        a0 = _first_feasible(f, g, family)
    tr = dinkelbach_solve(f.evaluate, g.evaluate, inner, a0, sense)
    tr.extracted = (tr.iterates[-1][0], tr.value)
    return tr


def _first_feasible(f, g, family):
    gt = g.table()
    keep = gt > 0
    keep[0] = False
    if family is not None:
        keep &= family
    i = int(np.nonzero(keep)[0][-1])
    return decode(f.kind, f.n, f.k, i)


# ---------------------------------------------------------------------------
# inner convex solves


@dataclass
class InnerResult:
    x: np.ndarray
    value: float
    exhausted: bool = False
    method: str = ""


def _project(x, ball):
    if ball == "linf":
        return np.clip(x, -1.0, 1.0)
    if ball == "l2":
        nrm = np.linalg.norm(x)
        return x / nrm if nrm > 1 else x
    if ball is None:
        return x
    raise ValueError(f"unknown ball {ball!r}")


def inner_convex_solve(objective: Callable, subgrad: Callable, n: int, ball: str = "linf",
                       budget: int = 500, x0=None, c: float = 1.0) -> InnerResult:
    """Projected subgradient descent with step c/sqrt(t) and averaging.

    Returns the best of the iterates and their running average.
    """
    x = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float).copy()
    x = _project(x, ball)
    best_x, best_v = x.copy(), objective(x)
    avg = np.zeros(n)
    for t in range(1, budget + 1):
        g = subgrad(x)
        gn = np.linalg.norm(g)
        if gn == 0:
            return InnerResult(x, objective(x), False, "subgradient")
        x = _project(x - c / math.sqrt(t) * g / gn, ball)
        avg += (x - avg) / t
        for cand in (x, avg):
            v = objective(cand)
            if v < best_v:
                best_v, best_x = v, cand.copy()
    return InnerResult(best_x, best_v, True, "subgradient")


def _solve_master(n, rows, aux_cost, lin, mu, y, ball):
    """min aux_cost.s + lin.x + mu|x-y|^2 s.t. rows (a, k): a.x - s_k <= 0."""
    S = len(aux_cost)
    nv = n + S
    A = np.zeros((len(rows), nv))
    for r, (a, k) in enumerate(rows):
        A[r, :n] = a
        A[r, n + k] = -1.0
    b = np.zeros(len(rows))
    box = ball == "linf"
    if mu == 0:
        c = np.concatenate([lin, aux_cost])
        bounds = [(-1, 1) if box else (None, None)] * n + [(None, None)] * S
        res = linprog(c, A_ub=A if len(rows) else None, b_ub=b if len(rows) else None,
                      bounds=bounds, method="highs")
        if res.status != 0:
            raise RuntimeError(f"inner LP failed: {res.message}")
        return res.x[:n], res.x[n:]
    from cvxopt import matrix, solvers
    P = np.zeros((nv, nv))
    P[:n, :n] = 2 * mu * np.eye(n)
    q = np.concatenate([lin - 2 * mu * y, aux_cost])
    Gm, hm = [A], [b]
    if box:
        Gm += [np.hstack([np.eye(n), np.zeros((n, S))]), np.hstack([-np.eye(n), np.zeros((n, S))])]
        hm += [np.ones(n), np.ones(n)]
    # keep the aux variables bounded below so the KKT system is nonsingular
    Gm.append(np.hstack([np.zeros((S, n)), -np.eye(S)]))
    hm.append(np.full(S, 1e6))
    Gmat, hvec = np.vstack(Gm), np.concatenate(hm)
    P[n:, n:] += 1e-12 * np.eye(S)
    opts = {"show_progress": False, "abstol": 1e-11, "reltol": 1e-11, "feastol": 1e-11,
            "maxiters": 200}
    sol = solvers.qp(matrix(P), matrix(q), matrix(Gmat), matrix(hvec), options=opts)
    z = np.array(sol["x"]).ravel()
    return z[:n], z[n:]


def inner_exact_solve(terms: list, lin: np.ndarray, n: int, mu: float = 0.0, y=None,
                      ball: str = "linf", max_rounds: int = 500) -> InnerResult:
    """Exact minimizer of sum a_k C_k(x) + <lin, x> + mu |x - y|^2 over the ball.

    Components with explicit pieces enter as epigraph constraints; other
    polyhedral components are handled by cutting planes from their
    subgradient oracle (finite for piecewise linear functions).
    """
    y = np.zeros(n) if y is None else np.asarray(y, dtype=float)
    rows, aux_cost, lazy = [], [], []
    for a, comp in terms:
        if a == 0 or comp.is_zero:
            continue
        if comp.pieces is not None:
            for M in comp.pieces:
                k = len(aux_cost)
                aux_cost.append(a)
                rows.extend((m, k) for m in M)
        else:
            k = len(aux_cost)
            aux_cost.append(a)
            lazy.append((k, comp))
            for p0 in (y, -y, np.ones(n), -np.ones(n)):
                rows.append((comp.subgrad(p0), k))
    aux_cost = np.array(aux_cost, dtype=float)

    def objective(x):
        return sum(a * c.eval(x) for a, c in terms if a != 0) + lin @ x + mu * np.sum((x - y) ** 2)

    for _ in range(max_rounds):
        x, s = _solve_master(n, rows, aux_cost, lin, mu, y, ball)
        added = False
        for k, comp in lazy:
            v = comp.eval(x)
            if v > s[k] + 1e-10 * max(1.0, abs(v)):
                rows.append((comp.subgrad(x), k))
                added = True
        if not added:
            return InnerResult(x, objective(x), False, "exact")
    return InnerResult(x, objective(x), True, "exact")


# ---------------------------------------------------------------------------
# IP-SD


def _swap_for_max(p: RatioProblem) -> RatioProblem:
    from dataclasses import replace
    return replace(p, f1=p.g1, f2=p.g2, g1=p.f1, g2=p.f2, sense="min")


def _negate_for_max(p: RatioProblem) -> RatioProblem:
    from dataclasses import replace
    return replace(p, f1=p.f2, f2=p.f1, sense="min")


def _inner_step(terms, lin, x, mu, opts, ball, n):
    exact_ok = all(c.polyhedral for _, c in terms) and ball in ("linf", None)
    method = opts.inner_method
    if method == "auto":
        method = "exact" if exact_ok else "subgradient"
    if method == "exact":
        if ball is None and mu == 0:
            raise ValueError("an unbounded inner problem needs prox_weight > 0")
        return inner_exact_solve(terms, lin, n, mu, x, ball)

    def obj(z):
        return sum(a * c.eval(z) for a, c in terms) + lin @ z + mu * np.sum((z - x) ** 2)

    def sg(z):
        return sum(a * c.subgrad(z) for a, c in terms) + lin + 2 * mu * (z - x)
    return inner_convex_solve(obj, sg, n, ball or "linf", opts.inner_budget, x0=x)


def _ipsd_core(p: RatioProblem, x0, opts: SolveOptions, generalized: bool,
               report: Callable[[float], Any]) -> tuple[SolveTrace, np.ndarray]:
    """Run the scheme on a min-sense problem; ``report`` maps r to the trace value."""
    n = p.n
    mu = p.prox_weight
    scheme = opts.scheme
    if scheme not in ("ball", "normalized"):
        raise ValueError("scheme must be 'ball' or 'normalized'")
    ball = p.ball if scheme == "ball" else None
    x = np.asarray(x0, dtype=float).copy()
    if scheme == "normalized":
        x = x / np.abs(x).max()
    g0 = p.G(x)
    if not g0 > 0:
        raise ValueError("G(x0) must be positive")
    r = p.F(x) / g0
    tr = SolveTrace([(x.copy(), report(r))], seed=opts.seed)
    calm = 0
    for _ in range(opts.max_iter):
        u = p.f2.subgrad(x)
        if r >= 0 or not generalized:
            v = p.g1.subgrad(x)
            terms = [(1.0, p.f1), (r, p.g2)]
            lin = -(u + r * v)
            if r < 0:
                raise ValueError("negative ratio: use ipsd_solve_generalized")
        else:
            w = p.g2.subgrad(x)
            terms = [(1.0, p.g1), (-1.0 / r, p.f1)]
            lin = -w + u / r
        res = _inner_step(terms, lin, x, mu, opts, ball, n)
        y = res.x
        # the surrogate is 0 at x; a step that does not go below it is rejected
        if not res.value < -1e-12 or not np.any(y):
            tr.rejected_steps += 1
            tr.termination = "converged"
            return tr, x
        if scheme == "normalized":
            y = y / np.abs(y).max()
        gy = p.G(y)
        if gy <= 0:
            tr.termination = "g-vanished"
            tr.iterates.append((y.copy(), report(-math.inf if p.F(y) < 0 else 0.0)))
            return tr, y
        r_new = p.F(y) / gy
        if r_new < 0 and not generalized and p.F(y) >= -1e-9 * max(1.0, p.f1(y)):
            r_new = 0.0         # F1 - F2 >= 0 here; a tiny negative is cancellation
        if not r_new < r:
            tr.rejected_steps += 1
            tr.termination = "converged"
            return tr, x
        calm = calm + 1 if r - r_new <= opts.tol else 0
        x, r = y, r_new
        tr.iterates.append((x.copy(), report(r)))
        if calm >= opts.patience:
            tr.termination = "converged"
            return tr, x
    tr.termination = "max-iter"
    return tr, x


def ipsd_solve(p: RatioProblem, x0, opts: Optional[SolveOptions] = None) -> SolveTrace:
    """Mixed IP-SD scheme for F1-F2 >= 0; max problems run on G/F."""
    opts = opts or SolveOptions()
    if p.sense == "min":
        tr, x = _ipsd_core(p, x0, opts, False, lambda r: r)
    else:
        q = _swap_for_max(p)
        if not q.G(np.asarray(x0, dtype=float)) > 0:
            raise ValueError("max problems need F(x0) > 0")
        tr, x = _ipsd_core(q, x0, opts, False, lambda r: 1.0 / r if r != 0 else math.inf)
    tr.sense = p.sense
    _finish(p, tr, opts)
    return tr


def ipsd_solve_generalized(p: RatioProblem, x0, opts: Optional[SolveOptions] = None) -> SolveTrace:
    """IP-SD with the sign branch, for numerators that change sign.

    Max problems are solved as min (F2 - F1)/G.
    """
    opts = opts or SolveOptions()
    if p.sense == "min":
        tr, x = _ipsd_core(p, x0, opts, True, lambda r: r)
    else:
        tr, x = _ipsd_core(_negate_for_max(p), x0, opts, True, lambda r: -r)
    tr.sense = p.sense
    _finish(p, tr, opts)
    return tr


def _finish(p: RatioProblem, tr: SolveTrace, opts: SolveOptions):
    if p.f is None or p.g is None:
        return
    try:
        tr.extracted = extract_best_settuple(p, tr.x)
    except NoFeasibleLevelError:
        return
    if opts.verify_eigen and p.f.n * p.f.k <= 8:
        from .eigen import verify_eigenpair
        arg, val = tr.extracted
        cert = verify_eigenpair(p.f, p.g, val, arg)
        tr.eigen_residual = cert.residual
        tr.certified = cert.accepted


# ---------------------------------------------------------------------------
# extraction


class NoFeasibleLevelError(ValueError):
    """No level set of the point is feasible with g > 0."""


def level_arguments(kind: str, n: int, k: int, x) -> list:
    """Associated level-set arguments of x for the extension of a given kind."""
    x = np.asarray(x, dtype=float)
    N = n * k
    out = []
    if kind in ("powerset", "kway"):
        vals = np.unique(x)
        masks = [int(np.sum(1 << np.nonzero(x > v)[0].astype(np.int64))) for v in vals[:-1]]
        masks.append((1 << N) - 1)
        out = [decode(kind, n, k, m) for m in masks]
    else:
        a = np.abs(x)
        for t in np.unique(np.concatenate([[0.0], a]))[:-1] if a.max() > 0 else []:
            pos = int(np.sum(1 << np.nonzero(x > t)[0].astype(np.int64)))
            neg = int(np.sum(1 << np.nonzero(-x > t)[0].astype(np.int64)))
            code = _code3(pos, neg)
            out.append(decode(kind, n, k, code))
    return out


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


def extract_best_settuple(p: RatioProblem, x) -> tuple[Any, Any]:
    """Best discrete ratio over the associated level sets of x (g > 0, feasible)."""
    from .setfn import encode
    f, g = p.f, p.g
    best, best_arg = None, None
    for arg in level_arguments(f.kind, f.n, f.k, x):
        i = encode(f.kind, f.n, f.k, arg)
        if p.family is not None and not p.family[i]:
            continue
        gv = g.table()[i].item()
        if not gv > 0:
            continue
        fv = f.table()[i].item()
        if isinstance(fv, int) and isinstance(gv, int):
            val = Fraction(fv, gv)
        else:
            val = fv / gv
        if best is None or (val < best if p.sense == "min" else val > best):
            best, best_arg = val, arg
    if best is None:
        raise NoFeasibleLevelError("all level sets have g = 0 or are infeasible")
    return best_arg, best


# ---------------------------------------------------------------------------
# normalized inverse power for p-homogeneous pairs


def inverse_power_step_normalized(F: ConvexComponent, G: ConvexComponent, x, a: float = 1.0,
                                  b: Optional[float] = None):
    """x_hat = argmin F(x) - a <u, x> with u in dG(x); returns (b x_hat, r).

    With b None, x_hat is scaled to G = 1.  Quadratic F uses a least-squares
    solve; other F go through a smooth unconstrained minimizer.
    """
    x = np.asarray(x, dtype=float)
    u = G.subgrad(x)
    if F.quadratic is not None:
        xh = np.linalg.lstsq(2 * F.quadratic, a * u, rcond=None)[0]
    else:
        res = minimize(lambda z: F.eval(z) - a * (u @ z), x,
                       jac=lambda z: F.subgrad(z) - a * u, method="BFGS",
                       options={"gtol": 1e-12, "maxiter": 2000})
        xh = res.x
    if b is None:
        gv = G.eval(xh)
        if not gv > 0:
            raise RuntimeError("inner solution has G = 0")
        b = gv ** (-1.0 / G.degree)
    xn = b * xh
    return xn, F.eval(xn) / G.eval(xn)


def normalized_inverse_power(F: ConvexComponent, G: ConvexComponent, x0, max_iter: int = 1000,
                             tol: float = 1e-13, a_seq: Optional[Callable[[int], float]] = None,
                             b_seq: Optional[Callable[[int], float]] = None) -> SolveTrace:
    x = np.asarray(x0, dtype=float)
    r = F.eval(x) / G.eval(x)
    tr = SolveTrace([(x.copy(), r)])
    for k in range(max_iter):
        a = 1.0 if a_seq is None else a_seq(k)
        b = None if b_seq is None else b_seq(k)
        x, r_new = inverse_power_step_normalized(F, G, x, a, b)
        tr.iterates.append((x.copy(), r_new))
        if abs(r - r_new) <= tol:
            tr.termination = "converged"
            return tr
        r = r_new
    tr.termination = "max-iter"
    return tr


# ---------------------------------------------------------------------------
# starts


def random_start(p: RatioProblem, rng: np.random.Generator) -> np.ndarray:
    """Random ternary start (pair kinds) or random 0/1 start, with G > 0."""
    kind = p.f.kind if p.f is not None else "pair"
    for _ in range(1000):
        if kind in ("pair", "kway-pair"):
            x = rng.integers(-1, 2, size=p.n).astype(float)
        else:
            x = rng.integers(0, 2, size=p.n).astype(float)
        if np.any(x) and p.G(x) > 0 and (p.sense == "min" or p.F(x) > 0):
            return x
    return rng.standard_normal(p.n)


def singleton_starts(p: RatioProblem) -> list:
    out = []
    for i in range(p.n):
        x = np.zeros(p.n)
        x[i] = 1.0
        if p.G(x) > 0 and (p.sense == "min" or p.F(x) > 0):
            out.append(x)
    return out


# ---------------------------------------------------------------------------
# recursive frustration heuristic


@dataclass
class FrustrationResult:
    assignment: np.ndarray      # +-1 per vertex
    count: Any                  # frustrated-edge count (upper bound on the index)
    rounds: int


def frustration_recursive(graph, opts: Optional[SolveOptions] = None, multistart: int = 4,
                          prox_weight: float = 1.0, seed: Optional[int] = None) -> FrustrationResult:
    """Upper bound on the frustration index by repeated eigen-solves.

    Each round solves the pair-form frustration ratio on the unassigned
    vertices, takes the top level sets (D+, D-) of the best iterate, fixes
    them in whichever orientation frustrates fewer edges towards the
    vertices already fixed, and recurses on the rest.
    """
    from .graphcat import frustration_counts, frustration_index
    opts = opts or SolveOptions()
    rng = np.random.default_rng(seed if seed is not None else opts.seed)
    n = graph.n
    x = np.zeros(n, dtype=np.int64)
    rest = list(range(n))
    rounds = 0
    while rest:
        rounds += 1
        sub, vs = graph.induced(rest)
        if sub.is_signed and sub.n > 1:
            p = frustration_index(sub, "pair").ratio_problem(prox_weight)
            starts = singleton_starts(p) + [random_start(p, rng) for _ in range(multistart)]
            best = None
            for s in starts:
                tr = ipsd_solve(p, s, opts)
                if best is None or tr.value < best.value:
                    best = tr
            y = best.x
            top = np.abs(y).max()
            up = [vs[i] for i in range(sub.n) if y[i] == top]
            dn = [vs[i] for i in range(sub.n) if y[i] == -top]
        else:
            up, dn = list(rest), []     # no negative edges left: one side is balanced
        # orient each connected piece of the new block against the fixed part
        sign = {v: 1 for v in up}
        sign.update({v: -1 for v in dn})
        for piece in _pieces(graph, list(sign)):
            trial = []
            for o in (1, -1):
                z = x.copy()
                for v in piece:
                    z[v] = o * sign[v]
                trial.append(_fixed_conflicts(graph, z))
            o = 1 if trial[0] <= trial[1] else -1
            for v in piece:
                x[v] = o * sign[v]
        done = set(up) | set(dn)
        rest = [v for v in rest if v not in done]
    return FrustrationResult(x, frustration_counts(graph, x)[0].item(), rounds)


def _pieces(graph, vs: list) -> list:
    """Connected components of the subgraph induced on vs."""
    inside, seen, out = set(vs), set(), []
    for v in vs:
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in graph.neighbors(u):
                if w in inside and w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.append(comp)
    return out


def _fixed_conflicts(graph, z) -> float:
    """Frustrated edges among vertices with a nonzero assignment."""
    tot = 0.0
    for i, j, w, s in graph.edges:
        if z[i] and z[j] and z[i] != s * z[j]:
            tot += w
    return tot
