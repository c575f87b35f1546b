"""Set functions on power sets, disjoint pairs and set-tuples.

Arguments use a canonical integer encoding:

* powerset:  an int bitmask ``A`` (bit i set iff i is in A)
* pair:      a tuple ``(pos, neg)`` of disjoint bitmasks
* kway:      a tuple of k bitmasks
* kway-pair: a tuple of k ``(pos, neg)`` tuples

Dense tables are indexed by bitmask (powerset), by the base-3 code
``sum_i d_i 3^i`` with digit 0 = absent, 1 = pos, 2 = neg (pair), and by
concatenating the per-block codes, block l shifted by ``2^(n l)`` or
``3^(n l)`` (k-way variants).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional

import numpy as np

KINDS = ("powerset", "pair", "kway", "kway-pair")

MAX_POWERSET_N = 24
MAX_PAIR_N = 15
MAX_KWAY_NK = 18
MAX_DELTA_EXACT_N = 12

FLOAT_TOL = 1e-9


class EnumerationLimitError(ValueError):
    """Raised when an exhaustive operation exceeds its size guard."""


class DomainError(ValueError):
    """Raised when an argument does not match the function's domain."""


# ---------------------------------------------------------------------------
# bit helpers


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for i in elements:
        m |= 1 << int(i)
    return m


def members(mask: int, n: Optional[int] = None) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    if n is not None and out and out[-1] >= n:
        raise DomainError(f"mask has bits beyond n={n}")
    return out


def popcounts(n: int) -> np.ndarray:
    """popcount of every mask in range(2^n)."""
    c = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        c[1 << i: 1 << (i + 1)] = c[: 1 << i] + 1
    return c


def ternary_weights(n: int) -> np.ndarray:
    """T[mask] = sum of 3^i over the bits of mask."""
    t = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        t[1 << i: 1 << (i + 1)] = t[: 1 << i] + 3 ** i
    return t


def pair_index(pos: int, neg: int) -> int:
    idx, p3, m = 0, 1, pos | neg
    while m:
        if pos & 1:
            idx += p3
        elif neg & 1:
            idx += 2 * p3
        pos >>= 1
        neg >>= 1
        m >>= 1
        p3 *= 3
    return idx


def pair_decode(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(pos, neg) masks of every base-3 code in range(3^n)."""
    size = 3 ** n
    idx = np.arange(size, dtype=np.int64)
    pos = np.zeros(size, dtype=np.int64)
    neg = np.zeros(size, dtype=np.int64)
    for i in range(n):
        d = idx % 3
        idx //= 3
        pos |= (d == 1).astype(np.int64) << i
        neg |= (d == 2).astype(np.int64) << i
    return pos, neg


def pair_codes(n: int) -> np.ndarray:
    """Inverse of pair_decode on a 2^n x 2^n grid: code[pos, neg], -1 if overlapping."""
    t = ternary_weights(n)
    code = t[:, None] + 2 * t[None, :]
    full = np.arange(1 << n)
    code[(full[:, None] & full[None, :]) != 0] = -1
    return code


def ternary_to_vector(pos: int, neg: int, n: int) -> np.ndarray:
    x = np.zeros(n)
    for i in range(n):
        if pos >> i & 1:
            x[i] = 1.0
        elif neg >> i & 1:
            x[i] = -1.0
    return x


def indicator(arg: Any, n: int, kind: str = "powerset") -> np.ndarray:
    """Indicator vector 1_A, 1_A - 1_B, or the block-stacked k-way version."""
    if kind == "powerset":
        return ternary_to_vector(int(arg), 0, n)
    if kind == "pair":
        return ternary_to_vector(int(arg[0]), int(arg[1]), n)
    if kind == "kway":
        return np.concatenate([ternary_to_vector(int(a), 0, n) for a in arg])
    if kind == "kway-pair":
        return np.concatenate([ternary_to_vector(int(a), int(b), n) for a, b in arg])
    raise DomainError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# argument encoding


def _domain_size(kind: str, n: int, k: int) -> int:
    if kind == "powerset":
        return 1 << n
    if kind == "pair":
        return 3 ** n
    if kind == "kway":
        return 1 << (n * k)
    return 3 ** (n * k)


def encode(kind: str, n: int, k: int, arg: Any) -> int:
    """Table index of a canonical argument; validates the domain."""
    full = (1 << n) - 1

    def _mask(m):
        if isinstance(m, (set, frozenset, list)):
            m = mask_of(m)
        m = int(m)
        if m < 0 or m & ~full:
            raise DomainError(f"mask {m} outside ground set of size {n}")
        return m

    def _pair(a):
        if not isinstance(a, tuple) or len(a) != 2:
            raise DomainError(f"expected a (pos, neg) pair, got {a!r}")
        p, q = _mask(a[0]), _mask(a[1])
        if p & q:
            raise DomainError("pair parts must be disjoint")
        return pair_index(p, q)

    if kind == "powerset":
        if isinstance(arg, tuple):
            raise DomainError("powerset function takes a single mask")
        return _mask(arg)
    if kind == "pair":
        return _pair(arg)
    if not isinstance(arg, tuple) or len(arg) != k:
        raise DomainError(f"expected a {k}-tuple")
    if kind == "kway":
        idx = 0
        for l, a in enumerate(arg):
            idx |= _mask(a) << (n * l)
        return idx
    idx, base = 0, 3 ** n
    for l, a in enumerate(arg):
        idx += _pair(a) * base ** l
    return idx


def decode(kind: str, n: int, k: int, idx: int) -> Any:
    if kind == "powerset":
        return int(idx)
    if kind == "pair":
        return _decode_pair(n, int(idx))
    if kind == "kway":
        full = (1 << n) - 1
        return tuple((int(idx) >> (n * l)) & full for l in range(k))
    base = 3 ** n
    return tuple(_decode_pair(n, (int(idx) // base ** l) % base) for l in range(k))


def _decode_pair(n: int, code: int) -> tuple[int, int]:
    pos = neg = 0
    for i in range(n):
        d = code % 3
        code //= 3
        if d == 1:
            pos |= 1 << i
        elif d == 2:
            neg |= 1 << i
    return pos, neg


# ---------------------------------------------------------------------------


class SetFunction:
    """A real function on P(V), P_2(V) or k-tuples thereof, with f(empty) = 0.

    Either a dense ``table`` or a pure ``fn`` callback must be given.
    Callback values are memoized (up to ``cache_budget`` entries).
    """

    def __init__(self, n: int, kind: str = "powerset", k: int = 1,
                 table: Optional[np.ndarray] = None,
                 fn: Optional[Callable[[Any], float]] = None,
                 cache_budget: int = 1 << 20, name: str = ""):
        if kind not in KINDS:
            raise DomainError(f"unknown kind {kind!r}")
        if n < 1:
            raise DomainError("ground set must be nonempty")
        if kind in ("powerset", "pair"):
            k = 1
        if k < 1:
            raise DomainError("k must be positive")
        if (table is None) == (fn is None):
            raise ValueError("give exactly one of table / fn")
        self.n, self.kind, self.k, self.name = n, kind, k, name
        self._fn = fn
        self._cache: dict[int, float] = {}
        self._budget = cache_budget
        self._lock = threading.Lock()
        self._table = None
        if table is not None:
            t = np.array(table)
            if t.shape != (_domain_size(kind, n, k),):
                raise DomainError(f"table must have shape ({_domain_size(kind, n, k)},)")
            if t.dtype.kind == "b":
                t = t.astype(np.int64)
            if t.dtype.kind not in "iuf":
                t = t.astype(float)
            t[0] = 0
            self._table = t

    # -- constructors
    @classmethod
    def from_table(cls, n: int, values, kind: str = "powerset", k: int = 1, name: str = ""):
        return cls(n, kind, k, table=np.asarray(values), name=name)

    @classmethod
    def from_callable(cls, n: int, fn, kind: str = "powerset", k: int = 1, name: str = ""):
        return cls(n, kind, k, fn=fn, name=name)

    # -- evaluation
    @property
    def size(self) -> int:
        return _domain_size(self.kind, self.n, self.k)

    @property
    def dim(self) -> int:
        return self.n * self.k

    @property
    def is_integer(self) -> bool:
        return self.table().dtype.kind in "iu"

    def __call__(self, arg) -> float:
        return self.evaluate(arg)

    def evaluate(self, arg):
        idx = encode(self.kind, self.n, self.k, arg)
        if self._table is not None:
            return self._table[idx].item()
        return self._value_at(idx)

    def _value_at(self, idx: int):
        if idx == 0:
            return 0
        with self._lock:
            if idx in self._cache:
                return self._cache[idx]
        v = self._fn(decode(self.kind, self.n, self.k, idx))
        with self._lock:
            if len(self._cache) < self._budget:
                self._cache[idx] = v
        return v

    def table(self) -> np.ndarray:
        """Dense table over the whole domain (materialized once for callbacks)."""
        if self._table is None:
            limit = {"powerset": MAX_POWERSET_N, "pair": MAX_PAIR_N}.get(self.kind)
            if limit is not None and self.n > limit:
                raise EnumerationLimitError(f"n={self.n} exceeds {limit} for {self.kind}")
            if limit is None and self.n * self.k > MAX_KWAY_NK:
                raise EnumerationLimitError(f"n*k={self.n * self.k} exceeds {MAX_KWAY_NK}")
            vals = [self._value_at(i) for i in range(self.size)]
            if all(isinstance(v, (int, np.integer)) for v in vals):
                t = np.array(vals, dtype=np.int64)
            else:
                t = np.array(vals, dtype=float)
            t[0] = 0
            self._table = t
        return self._table

    # -- arithmetic on tables
    def _binary(self, other, op):
        if isinstance(other, SetFunction):
            if (other.n, other.kind, other.k) != (self.n, self.kind, self.k):
                raise DomainError("incompatible set functions")
            t = op(self.table(), other.table())
        else:
            t = op(self.table(), other)
        return SetFunction(self.n, self.kind, self.k, table=t)

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, c):
        return self._binary(c, np.multiply)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"SetFunction({self.kind}, n={self.n}, k={self.k}{tag})"


# ---------------------------------------------------------------------------
# submodularity checks


@dataclass
class Check:
    """Outcome of a lattice inequality check; truthy iff it holds."""
    ok: bool
    witness: Any = None
    gap: float = 0.0

    def __bool__(self):
        return self.ok


def _tol(t: np.ndarray) -> float:
    return 0 if t.dtype.kind in "iu" else FLOAT_TOL


def _local_gaps(t: np.ndarray, n: int):
    """Yield (i, j, A-array, gaps) for f(A+i)+f(A+j)-f(A+i+j)-f(A)."""
    full = np.arange(1 << n, dtype=np.int64)
    for i in range(n):
        bi = 1 << i
        for j in range(i + 1, n):
            bj = 1 << j
            A = full[(full & (bi | bj)) == 0]
            yield i, j, A, t[A | bi] + t[A | bj] - t[A | bi | bj] - t[A]


def _require_kind(f: SetFunction, kind: str):
    if f.kind != kind:
        raise DomainError(f"expected a {kind} function, got {f.kind}")


def _lattice_submodular(t: np.ndarray, n: int) -> Check:
    tol = _tol(t)
    for i, j, A, g in _local_gaps(t, n):
        bad = np.nonzero(g < -tol)[0]
        if bad.size:
            a = int(A[bad[0]])
            return Check(False, (a | 1 << i, a | 1 << j), g[bad[0]].item())
    return Check(True)


def is_submodular(f: SetFunction) -> Check:
    """f(A)+f(B) >= f(A|B)+f(A&B) for all A, B; witness is a violating (A, B).

    Uses the equivalent local form over A, A+i, A+j, A+i+j.
    """
    _require_kind(f, "powerset")
    if f.n > MAX_POWERSET_N:
        raise EnumerationLimitError(f"n={f.n} exceeds {MAX_POWERSET_N}")
    return _lattice_submodular(f.table(), f.n)


def is_kway_submodular(f: SetFunction) -> Check:
    """Lattice inequality with componentwise union/intersection on k-tuples."""
    _require_kind(f, "kway")
    if f.n * f.k > MAX_KWAY_NK:
        raise EnumerationLimitError(f"n*k={f.n * f.k} exceeds {MAX_KWAY_NK}")
    # a k-tuple of subsets of V is a subset of the n*k element set
    c = _lattice_submodular(f.table(), f.n * f.k)
    if not c.ok:
        a, b = c.witness
        c.witness = (decode("kway", f.n, f.k, a), decode("kway", f.n, f.k, b))
    return c


def pair_join(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    p = (a[0] | b[0]) & ~(a[1] | b[1])
    q = (a[1] | b[1]) & ~(a[0] | b[0])
    return p, q


def pair_meet(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    return a[0] & b[0], a[1] & b[1]


def _bisub_full(t: np.ndarray, n: int) -> Check:
    tol = _tol(t)
    pos, neg = pair_decode(n)
    code = pair_codes(n)
    for r in range(t.size):
        p, q = int(pos[r]), int(neg[r])
        jp = (p | pos) & ~(q | neg)
        jn = (q | neg) & ~(p | pos)
        gap = t[r] + t - t[code[jp, jn]] - t[code[p & pos, q & neg]]
        bad = np.nonzero(gap < -tol)[0]
        if bad.size:
            s = int(bad[0])
            return Check(False, ((p, q), (int(pos[s]), int(neg[s]))), gap[s].item())
    return Check(True)


def _bisub_local(t: np.ndarray, n: int) -> Check:
    # submodular inside every orthant plus f(X+i+) + f(X+i-) >= 2 f(X)
    tol = _tol(t)
    idx = np.arange(t.size, dtype=np.int64)
    digits = [(idx // 3 ** i) % 3 for i in range(n)]
    for i in range(n):
        X = idx[digits[i] == 0]
        gap = t[X + 3 ** i] + t[X + 2 * 3 ** i] - 2 * t[X]
        bad = np.nonzero(gap < -tol)[0]
        if bad.size:
            x = int(X[bad[0]])
            w = (_decode_pair(n, x + 3 ** i), _decode_pair(n, x + 2 * 3 ** i))
            return Check(False, w, gap[bad[0]].item())
    for i in range(n):
        for j in range(i + 1, n):
            X = idx[(digits[i] == 0) & (digits[j] == 0)]
            for si in (1, 2):
                for sj in (1, 2):
                    a = X + si * 3 ** i
                    b = X + sj * 3 ** j
                    gap = t[a] + t[b] - t[a + sj * 3 ** j] - t[X]
                    bad = np.nonzero(gap < -tol)[0]
                    if bad.size:
                        s = int(bad[0])
                        w = (_decode_pair(n, int(a[s])), _decode_pair(n, int(b[s])))
                        return Check(False, w, gap[s].item())
    return Check(True)


def is_bisubmodular(f: SetFunction, method: str = "auto") -> Check:
    """Bisubmodularity: f(a)+f(b) >= f(a join b) + f(a meet b) over disjoint pairs.

    ``method`` is "full" (all 9^n pairs), "local" (orthant submodularity plus
    the local sign condition, equivalent by a theorem of Ando, Fujishige and
    Naitoh) or "auto" (full for n <= 6).
    """
    _require_kind(f, "pair")
    if f.n > MAX_PAIR_N:
        raise EnumerationLimitError(f"n={f.n} exceeds {MAX_PAIR_N}")
    t = f.table()
    if method == "auto":
        method = "full" if f.n <= 6 else "local"
    if method == "full":
        return _bisub_full(t, f.n)
    return _bisub_local(t, f.n)


# ---------------------------------------------------------------------------
# submodularity gap and decomposition


def _elementary_gap(t: np.ndarray, n: int):
    best = None
    for _, _, _, g in _local_gaps(t, n):
        if g.size:
            m = g.min().item()
            best = m if best is None or m < best else best
    return best


def delta_submodularity_gap(f: SetFunction):
    """min of f(A)+f(B)-f(A|B)-f(A&B) over unordered incomparable pairs.

    Comparable pairs contribute 0 identically, so they are excluded; with
    n = 1 there is no incomparable pair and the result is +inf.
    """
    _require_kind(f, "powerset")
    if f.n > 20:
        raise EnumerationLimitError(f"n={f.n} exceeds 20")
    if f.n == 1:
        return math.inf
    t = f.table()
    local = _elementary_gap(t, f.n)
    # for a submodular f the global minimum is attained on elementary pairs
    if local >= 0:
        return local
    if f.n > MAX_DELTA_EXACT_N:
        raise EnumerationLimitError(
            f"exact gap of a non-submodular function needs n <= {MAX_DELTA_EXACT_N}")
    full = np.arange(1 << f.n, dtype=np.int64)
    best = local
    for a in range(1, 1 << f.n):
        inc = ((full & a) != a) & ((full & a) != full)
        if not inc.any():
            continue
        B = full[inc]
        g = t[a] + t[B] - t[a | B] - t[a & B]
        m = g.min().item()
        if m < best:
            best = m
    return best


def size_product(n: int) -> SetFunction:
    """g(A) = #A * #(V minus A); strictly submodular with gap 2."""
    c = popcounts(n)
    return SetFunction(n, table=c * (n - c), name="size_product")


def decompose_difference_submodular(f: SetFunction, g: Optional[SetFunction] = None):
    """Return (f1, f2), both submodular, with f = f1 - f2 and f2 = C g.

    C = max(ceil(-delta(f)/delta(g)), 0) + 1, an integer, so integer tables
    stay integer.
    """
    _require_kind(f, "powerset")
    if f.n > 20:
        raise EnumerationLimitError(f"n={f.n} exceeds 20")
    if f.n == 1:
        # every function on two subsets is modular
        zero = SetFunction(1, table=np.zeros(2, dtype=np.int64))
        return f + zero, zero
    g = size_product(f.n) if g is None else g
    dg = delta_submodularity_gap(g)
    if not dg > 0:
        raise ValueError("reference function must be strictly submodular")
    t = f.table()
    if f.n <= MAX_DELTA_EXACT_N:
        df = delta_submodularity_gap(f)
    else:
        # elementary gaps bound every incomparable gap from below
        df = _elementary_gap(t, f.n)
    c = max(math.ceil(-df / dg), 0) + 1
    f2 = g * c
    f1 = f + f2
    return f1, f2
