"""Exact brute-force optimizers: ground truth for every other module.

Everything here enumerates.  Subset and pair optimizers work on dense
tables with numpy; partitions are enumerated as restricted growth strings.
Ratios of integer tables are compared by cross-multiplication so integer
instances are exact end to end.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterator, Optional

import numpy as np

from .setfn import (DomainError, EnumerationLimitError, SetFunction, decode,
                    pair_decode, popcounts)

MAX_SUBSET_N = 20
MAX_PAIR_N = 13
MAX_PARTITION_N = 10


@dataclass
class OracleResult:
    optimum: Any
    witnesses: list = field(default_factory=list)
    evaluations: int = 0


def _exact(v):
    """Fraction for integer-valued numbers, float otherwise."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    return float(v)


def ratio_value(fv, gv):
    fv, gv = _exact(fv), _exact(gv)
    if isinstance(fv, Fraction) and isinstance(gv, Fraction):
        return fv / gv
    return float(fv) / float(gv)


def _best(num: np.ndarray, den: Optional[np.ndarray], sense: str, tol: float):
    """Indices of the optimal ratio num/den (den > 0 assumed)."""
    if den is None:
        best = num.min() if sense == "min" else num.max()
        if num.dtype.kind in "iu":
            return np.nonzero(num == best)[0]
        return np.nonzero(np.abs(num - best) <= tol)[0]
    if num.dtype.kind in "iu" and den.dtype.kind in "iu":
        # exact comparison via a candidate ratio and cross-multiplication
        r = num / den
        i0 = int(np.argmin(r) if sense == "min" else np.argmax(r))
        # confirm exactly against near-ties
        near = np.nonzero(np.abs(r - r[i0]) <= 1e-9 * max(1.0, abs(r[i0])))[0]
        p, q = int(num[i0]), int(den[i0])
        for i in near:
            a, b = int(num[i]), int(den[i])
            if (a * q < p * b) if sense == "min" else (a * q > p * b):
                p, q, i0 = a, b, int(i)
        lhs = num.astype(object) * q
        rhs = den.astype(object) * p
        return np.nonzero(lhs == rhs)[0]
    r = num / den
    best = r.min() if sense == "min" else r.max()
    return np.nonzero(np.abs(r - best) <= tol * max(1.0, abs(best)))[0]


def optimize_subsets(f: SetFunction, g: Optional[SetFunction] = None, sense: str = "min",
                     family: Optional[Callable[[Any], bool]] = None,
                     family_mask: Optional[np.ndarray] = None,
                     max_witnesses: int = 16, tol: float = 1e-12) -> OracleResult:
    """Exact optimum of f/g (or of f when g is None) over a family.

    The family is given as a predicate on canonical arguments or as a
    boolean array over table indices.  Arguments with g <= 0 are skipped,
    as is the all-empty argument when a ratio is optimized.
    """
    if sense not in ("min", "max"):
        raise ValueError("sense must be min or max")
    limit = {"powerset": MAX_SUBSET_N, "pair": MAX_PAIR_N}.get(f.kind, 18)
    dim = f.n if f.kind in ("powerset", "pair") else f.n * f.k
    if dim > limit:
        raise EnumerationLimitError(f"{f.kind} enumeration needs n <= {limit}")
    t = f.table()
    keep = np.ones(t.size, dtype=bool)
    if family_mask is not None:
        keep &= family_mask
    if family is not None:
        keep &= np.array([bool(family(decode(f.kind, f.n, f.k, i))) for i in range(t.size)])
    den = None
    if g is not None:
        if (g.kind, g.n, g.k) != (f.kind, f.n, f.k):
            raise DomainError("f and g must share a domain")
        gt = g.table()
        keep &= gt > 0
        keep[0] = False
    idx = np.nonzero(keep)[0]
    if idx.size == 0:
        raise ValueError("empty feasible family")
    num = t[idx]
    if g is not None:
        den = gt[idx]
    win = idx[_best(num, den, sense, tol)]
    w0 = int(win[0])
    opt = _exact(t[w0].item()) if g is None else ratio_value(t[w0].item(), gt[w0].item())
    wits = [decode(f.kind, f.n, f.k, int(i)) for i in win[:max_witnesses]]
    return OracleResult(opt, wits, int(idx.size))


# ---------------------------------------------------------------------------
# partitions


def restricted_growth_strings(n: int, k_max: Optional[int] = None,
                              k_exact: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """All set partitions of range(n) as restricted growth strings."""
    if n == 0:
        yield ()
        return
    cap = n if k_max is None else k_max
    a = [0] * n

    def rec(i, m):
        if i == n:
            if k_exact is None or m + 1 == k_exact:
                yield tuple(a)
            return
        top = min(m + 1, cap - 1)
        for v in range(top + 1):
            if k_exact is not None and (m + 1 if v <= m else m + 2) + (n - i - 1) < k_exact:
                continue
            a[i] = v
            yield from rec(i + 1, max(m, v))
    a[0] = 0
    yield from rec(1, 0)


def rgs_blocks(rgs: tuple[int, ...]) -> list[int]:
    """Block bitmasks of a restricted growth string."""
    blocks: list[int] = []
    for i, b in enumerate(rgs):
        while len(blocks) <= b:
            blocks.append(0)
        blocks[b] |= 1 << i
    return blocks


def optimize_partitions(objective: Callable[[list[int]], Any], n: int,
                        k: Optional[int] = None, sense: str = "min",
                        exact_k: bool = False,
                        constraint: Optional[Callable[[list[int]], bool]] = None,
                        max_witnesses: int = 16) -> OracleResult:
    """Exact optimum of objective(blocks) over partitions of range(n).

    With ``k`` given the partitions have at most k blocks (exactly k when
    ``exact_k``); blocks are bitmasks in order of first appearance.
    """
    if n > MAX_PARTITION_N:
        raise EnumerationLimitError(f"partition enumeration needs n <= {MAX_PARTITION_N}")
    best, wits, count = None, [], 0
    gen = restricted_growth_strings(n, k_max=k, k_exact=k if exact_k else None)
    for rgs in gen:
        blocks = rgs_blocks(rgs)
        if constraint is not None and not constraint(blocks):
            continue
        count += 1
        v = _exact(objective(blocks))
        if best is None or (v < best if sense == "min" else v > best):
            best, wits = v, [blocks]
        elif v == best and len(wits) < max_witnesses:
            wits.append(blocks)
    if best is None:
        raise ValueError("no feasible partition")
    return OracleResult(best, wits, count)


def optimize_signs(objective: Callable[[np.ndarray], np.ndarray], n: int,
                   sense: str = "min") -> OracleResult:
    """Exact optimum over x in {-1, 1}^n of a batch objective (rows of X)."""
    if n > MAX_SUBSET_N:
        raise EnumerationLimitError(f"sign enumeration needs n <= {MAX_SUBSET_N}")
    masks = np.arange(1 << n, dtype=np.int64)
    X = 1 - 2 * ((masks[:, None] >> np.arange(n)) & 1)
    v = np.asarray(objective(X))
    win = _best(v, None, sense, 1e-12)
    return OracleResult(_exact(v[win[0]].item()), [X[i].copy() for i in win[:16]], int(v.size))


# ---------------------------------------------------------------------------
# reduction identities


@dataclass
class IdentityReport:
    ok: bool
    values: dict
    detail: str = ""

    def __bool__(self):
        return self.ok


def _eq(a, b, tol=1e-9):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(float(a) - float(b)) <= tol * max(1.0, abs(float(a)))


def _minratio(num: np.ndarray, den: np.ndarray, sense="min"):
    keep = den > 0
    win = _best(num[keep], den[keep], sense, 1e-12)
    i = int(np.nonzero(keep)[0][win[0]])
    return ratio_value(num[i].item(), den[i].item())


def _check_nonneg(*ts):
    for t in ts:
        if np.any(t < 0):
            raise DomainError("identity requires nonnegative functions")


def check_reduction_identities(f: SetFunction, g: SetFunction, which: str, k: int = 2,
                               a: float = 0.0, b: float = 1.0, sense: str = "min") -> IdentityReport:
    """Verify a discrete reduction identity by enumerating both sides.

    one-to-two  min over nonempty A of f/g equals min over (A,B) of
                (f(A)+f(B))/(g(A)+g(B)), over all pairs and over disjoint pairs
    one-to-k    the same with k-tuples (sum form, k-th root of product form,
                and disjoint k-tuples)
    two-to-k    pair functions: min over pairs equals the sum form over
                k-tuples of pairs and over disjoint 2k-tuples
    box         min over {a,b}^n of f^L equals a f(V) + (b-a) min_A f(A)
    """
    which = {"3.13": "one-to-two", "3.14": "one-to-k", "3.15": "two-to-k", "3.16": "box"}.get(which, which)
    if which == "box":
        return _box_identity(f, a, b)
    n = f.n
    ft, gt = f.table(), g.table()
    if gt[0] != 0 or ft[0] != 0:
        raise DomainError("identity requires f(empty) = g(empty) = 0")
    _check_nonneg(ft, gt)
    if which == "one-to-two":
        if f.kind != "powerset":
            raise DomainError("one-to-two needs powerset functions")
        base = _minratio(ft[1:], gt[1:], sense)
        F = ft[:, None] + ft[None, :]
        G = gt[:, None] + gt[None, :]
        allp = _minratio(F.ravel(), G.ravel(), sense)
        full = np.arange(1 << n)
        disj = (full[:, None] & full[None, :]) == 0
        dp = _minratio(F[disj], G[disj], sense)
        vals = {"sets": base, "pairs": allp, "disjoint_pairs": dp}
    elif which == "one-to-k":
        if f.kind != "powerset":
            raise DomainError("one-to-k needs powerset functions")
        if n * k > 16:
            raise EnumerationLimitError("one-to-k enumeration needs n*k <= 16")
        base = _minratio(ft[1:], gt[1:], sense)
        idx = np.array(list(itertools.product(range(1 << n), repeat=k)), dtype=np.int64)
        F = ft[idx].sum(axis=1)
        G = gt[idx].sum(axis=1)
        s = _minratio(F, G, sense)
        nonempty = np.all(idx > 0, axis=1)
        Pf = np.prod(ft[idx[nonempty]].astype(object), axis=1)
        Pg = np.prod(gt[idx[nonempty]].astype(object), axis=1)
        if ft.dtype.kind in "iu" and gt.dtype.kind in "iu":
            prods = [Fraction(int(p), int(q)) for p, q in zip(Pf, Pg)]
            pbest = min(prods) if sense == "min" else max(prods)
            # compare k-th powers to stay exact
            prod_ok = pbest == (base ** k)
            prod_val = float(pbest) ** (1.0 / k)
        else:
            r = np.array([float(p) / float(q) for p, q in zip(Pf, Pg)])
            prod_val = (r.min() if sense == "min" else r.max()) ** (1.0 / k)
            prod_ok = _eq(prod_val, base)
        union = np.bitwise_or.reduce(idx, axis=1)
        total = popcounts(n)
        disjoint = popcounts(n)[union] == total[idx].sum(axis=1)
        d = _minratio(F[disjoint], G[disjoint], sense)
        vals = {"sets": base, "sum": s, "product_root": prod_val, "disjoint": d}
        ok = _eq(base, s) and prod_ok and _eq(base, d)
        return IdentityReport(ok, vals)
    elif which == "two-to-k":
        if f.kind != "pair":
            raise DomainError("two-to-k needs pair functions")
        if n * k > 12:
            raise EnumerationLimitError("two-to-k enumeration needs 3^(n*k) <= 3^12")
        base = _minratio(ft[1:], gt[1:], sense)
        pos, neg = pair_decode(n)
        idx = np.array(list(itertools.product(range(3 ** n), repeat=k)), dtype=np.int64)
        F = ft[idx].sum(axis=1)
        G = gt[idx].sum(axis=1)
        s = _minratio(F, G, sense)
        sup = (pos | neg)[idx]
        union = np.bitwise_or.reduce(sup, axis=1)
        pc = popcounts(n)
        disjoint = pc[union] == pc[sup].sum(axis=1)
        d = _minratio(F[disjoint], G[disjoint], sense)
        vals = {"pairs": base, "sum": s, "disjoint": d}
    else:
        raise ValueError(f"unknown identity {which!r}")
    ok = all(_eq(vals[next(iter(vals))], v) for v in vals.values())
    return IdentityReport(ok, vals)


def _box_identity(f: SetFunction, a: float, b: float) -> IdentityReport:
    from .lovasz import extension
    if f.kind != "powerset":
        raise DomainError("box identity needs a powerset function")
    if not a < b:
        raise ValueError("need a < b")
    n = f.n
    t = f.table()
    masks = np.arange(1 << n, dtype=np.int64)
    X = np.where((masks[:, None] >> np.arange(n)) & 1, b, a)
    lhs = extension(f)(X.astype(float)).min()
    rhs = a * t[(1 << n) - 1] + (b - a) * t.min()
    return IdentityReport(_eq(lhs, rhs), {"box_min": float(lhs), "formula": float(rhs)})


def lovasz_minimum_check(f: SetFunction, samples: int = 2000, seed: int = 0) -> bool:
    """No sampled x in [0,1]^n gives f^L below min_A f(A)."""
    from .lovasz import extension
    rng = np.random.default_rng(seed)
    lo = optimize_subsets(f).optimum
    X = rng.random((samples, f.n))
    return bool(extension(f)(X).min() >= float(lo) - 1e-9)
