"""Multiple harmonic q-sums at roots of unity, exact and numeric.

The exact evaluator works at q = zeta_m with values in Q(zeta_L), L =
lcm(m, N).  Internally elements are integer coefficient vectors modulo
x^L - 1 (so multiplication is cyclic convolution, done by Kronecker
substitution into one big-integer product); only the final answer is reduced
into the power basis of Q(zeta_L).  The key identity keeping denominators
small: for a primitive M-th root xi (M >= 2),

    1/(1 - xi) = (1/M) * sum_{j=0}^{M-2} (M-1-j) xi^j.

Numeric mode evaluates at q = exp(2 pi i/m) with vectorized cumulative sums,
using |[n]_q| = sin(pi n/m)/sin(pi/m) >= 1 for stability.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cyclotomic import CycNum, _ctx, _reduce_vector
from .words import Index

EXACT_LEVEL_LIMIT = 1200


# ---- operation counting (used by cost-model tests) --------------------------


class OpCounter:
    __slots__ = ("count",)

    def __init__(self):
        self.count = 0


_ACTIVE_COUNTERS: list[OpCounter] = []


@contextmanager
def field_op_counter():
    c = OpCounter()
    _ACTIVE_COUNTERS.append(c)
    try:
        yield c
    finally:
        _ACTIVE_COUNTERS.remove(c)


def _tick(k: int = 1):
    if _ACTIVE_COUNTERS:
        for c in _ACTIVE_COUNTERS:
            c.count += k


# ---- exact engine: integer vectors mod x^L - 1 ------------------------------


def _cyc_mul(L: int, va: list[int], vb: list[int]) -> list[int]:
    """Cyclic convolution of two length-L integer vectors."""
    _tick()
    amax = max(abs(x) for x in va)
    bmax = max(abs(x) for x in vb)
    if amax == 0 or bmax == 0:
        return [0] * L
    bound = L * amax * bmax
    db = (bound.bit_length() + 10) // 8 + 1  # bytes per digit, B/2 > bound
    B = 1 << (8 * db)
    half = B >> 1

    def pack(vec, positive):
        if positive:
            chunks = [(x if x > 0 else 0).to_bytes(db, "little") for x in vec]
        else:
            chunks = [(-x if x < 0 else 0).to_bytes(db, "little") for x in vec]
        return int.from_bytes(b"".join(chunks), "little")

    A = pack(va, True) - pack(va, False)
    Bb = pack(vb, True) - pack(vb, False)
    n2 = 2 * L
    offset = int.from_bytes(half.to_bytes(db, "little") * n2, "little")
    D = A * Bb + offset
    raw = D.to_bytes(n2 * db + db, "little")
    out = [0] * L
    for i in range(n2 - 1):
        d = int.from_bytes(raw[i * db : (i + 1) * db], "little") - half
        if d:
            j = i if i < L else i - L
            out[j] += d
    return out


def _vec_gcd(vec, den):
    g = den
    for x in vec:
        if x:
            g = math.gcd(g, x)
            if g == 1:
                return 1
    return g


class _CycElt:
    """vec/den with vec an integer vector mod x^L - 1."""

    __slots__ = ("L", "vec", "den")

    def __init__(self, L, vec, den=1):
        if den < 0:
            den = -den
            vec = [-x for x in vec]
        g = _vec_gcd(vec, den)
        if g > 1:
            vec = [x // g for x in vec]
            den //= g
        self.L = L
        self.vec = vec
        self.den = den

    @classmethod
    def zero(cls, L):
        return cls(L, [0] * L)

    @classmethod
    def one(cls, L):
        v = [0] * L
        v[0] = 1
        return cls(L, v)

    def mul(self, other: "_CycElt") -> "_CycElt":
        return _CycElt(self.L, _cyc_mul(self.L, self.vec, other.vec), self.den * other.den)

    def add(self, other: "_CycElt") -> "_CycElt":
        g = math.gcd(self.den, other.den)
        ca, cb = other.den // g, self.den // g
        vec = [ca * x + cb * y for x, y in zip(self.vec, other.vec)]
        return _CycElt(self.L, vec, self.den * ca)

    def rot(self, t: int) -> "_CycElt":
        """Multiply by zeta_L^t (an index rotation)."""
        t %= self.L
        if t == 0:
            return self
        vec = self.vec[-t:] + self.vec[:-t]
        out = _CycElt.__new__(_CycElt)
        out.L, out.vec, out.den = self.L, vec, self.den
        return out

    def pow(self, k: int) -> "_CycElt":
        result = _CycElt.one(self.L)
        base = self
        while k:
            if k & 1:
                result = result.mul(base)
            k >>= 1
            if k:
                base = base.mul(base)
        return result


def _inv_one_minus_root(L: int, u: int) -> _CycElt:
    """1/(1 - zeta_L^u) for u != 0 mod L."""
    u %= L
    if u == 0:
        raise ZeroDivisionError("1 - zeta^0 is zero")
    M = L // math.gcd(L, u)
    vec = [0] * L
    for j in range(M - 1):
        vec[(j * u) % L] += M - 1 - j
    return _CycElt(L, vec, M)


def _to_cycnum(elt: _CycElt) -> CycNum:
    folded = _reduce_vector(elt.vec, _ctx(elt.L))
    return CycNum(elt.L, folded, elt.den)


def qsum_exact(m: int, index: Index) -> CycNum:
    """Exact multiple harmonic q-sum at q = zeta_m, in Q(zeta_lcm(m,N)).

    Sum over m > n_1 > ... > n_r > 0 of prod eta_j^{n_j} / [n_j]^{k_j} with
    [n] = (1 - zeta_m^n)/(1 - zeta_m).  Empty index gives 1.
    """
    if m < 1:
        raise ValueError("m must be positive")
    N = index.level
    L = math.lcm(m, N)
    if L > EXACT_LEVEL_LIMIT:
        raise ValueError(
            f"exact mode limited to lcm(m, N) <= {EXACT_LEVEL_LIMIT}, got {L}"
        )
    r = index.depth
    if r == 0:
        return CycNum.one(L)
    if r >= m:
        return CycNum.zero(L)
    sm = L // m  # zeta_m = zeta_L^sm
    sn = L // N  # zeta_N = zeta_L^sn
    ks, es = index.ks, index.es
    kmax = max(ks)
    vec = [0] * L
    vec[0] = 1
    vec[sm] -= 1
    one_minus_q = _CycElt(L, vec)

    acc = [_CycElt.zero(L) for _ in range(r)]  # acc[j] = suffix sums from slot j
    unit = _CycElt.one(L)
    for n in range(1, m):
        base = one_minus_q.mul(_inv_one_minus_root(L, sm * n))  # 1/[n]
        powers = [unit, base]
        for _ in range(kmax - 1):
            powers.append(powers[-1].mul(base))
        # ascending j so acc[j+1] still holds its value from step n-1
        for j in range(r):
            t = powers[ks[j]].rot(sn * es[j] * n)
            if j + 1 < r:
                tail = acc[j + 1]
                if any(tail.vec):
                    acc[j] = acc[j].add(t.mul(tail))
            else:
                acc[j] = acc[j].add(t)
    return _to_cycnum(acc[0])


# ---- numeric engine ----------------------------------------------------------


def _longdouble_pi():
    import mpmath

    with mpmath.workdps(40):
        return np.longdouble(mpmath.nstr(mpmath.pi, 30))


def _numeric_prefix(m, index, weights, precision, stop):
    """Vectorized DP; returns the nested sum with n_1 ranging up to `stop`."""
    r = index.depth
    if r == 0:
        return 1.0 + 0.0j
    if stop < r:
        return 0.0 + 0.0j
    N = index.level
    if precision > 64:
        return _numeric_prefix_mp(m, index, weights, precision, stop)
    if precision > 53:
        real = np.longdouble
        cplx = np.clongdouble
        pi = _longdouble_pi()
    else:
        real = np.float64
        cplx = np.complex128
        pi = np.pi
    n = np.arange(1, stop + 1, dtype=real)
    sin_n = np.sin(pi * n / m)
    sin_1 = np.sin(pi / real(m))
    log_amp = np.log(sin_1) - np.log(sin_n)  # log of 1/|[n]|
    S = None
    _tick(r * stop)
    for j in range(r - 1, -1, -1):
        k, e = index.ks[j], index.es[j]
        theta = (-pi * (n - 1) * k) / m + (2 * pi / N) * ((e * n) % N)
        if weights is not None and weights[j]:
            theta = theta + (2 * pi / m) * np.mod(weights[j] * n, m)
        term = np.exp(k * log_amp) * (np.cos(theta) + 1j * np.sin(theta)).astype(cplx)
        if S is None:
            S = np.cumsum(term)
        else:
            shifted = np.concatenate(([cplx(0)], S[:-1]))
            S = np.cumsum(term * shifted)
    return complex(S[-1])


def _numeric_prefix_mp(m, index, weights, precision, stop):
    import mpmath

    r = index.depth
    N = index.level
    with mpmath.workprec(precision + 16):
        pi = mpmath.pi
        sin1 = mpmath.sin(pi / m)
        inv_q = [mpmath.mpc(1)] * (stop + 1)
        for n in range(1, stop + 1):
            # 1/[n] = (sin(pi/m)/sin(pi n/m)) * exp(-i pi (n-1)/m)
            amp = sin1 / mpmath.sin(pi * n / m)
            inv_q[n] = amp * mpmath.expjpi(mpmath.mpf(-(n - 1)) / m)
        S = [mpmath.mpc(0)] * (stop + 1)
        _tick(r * stop)
        for j in range(r - 1, -1, -1):
            k, e = index.ks[j], index.es[j]
            new = [mpmath.mpc(0)] * (stop + 1)
            run = mpmath.mpc(0)
            for n in range(1, stop + 1):
                factor = inv_q[n] ** k
                if e:
                    factor *= mpmath.expjpi(mpmath.mpf(2 * ((e * n) % N)) / N)
                if weights is not None and weights[j]:
                    factor *= mpmath.expjpi(mpmath.mpf(2 * weights[j] * n) / m)
                tail = S[n - 1] if j < r - 1 else mpmath.mpc(1)
                run += factor * tail
                new[n] = run
            S = new
        return complex(S[stop])


def default_precision(m: int) -> int:
    return 128 if m > 10**5 else 53


def qsum_numeric(m, index, weights=None, precision=None):
    """Numeric multiple harmonic q-sum at q = exp(2 pi i/m).

    weights, when given, multiply slot j by q^(a_j n_j) (one real a_j per
    depth slot).
    """
    if m < 1:
        raise ValueError("m must be positive")
    if weights is not None and len(weights) != index.depth:
        raise ValueError("weights length must equal depth")
    if precision is None:
        precision = default_precision(m)
    return _numeric_prefix(m, index, weights, precision, m - 1)


def qsum_half_numeric(m, index, weights=None, precision=None):
    """Half-range variant: outermost summation index bounded by m/2."""
    if m < 2:
        raise ValueError("half-range sum needs m >= 2")
    if weights is not None and len(weights) != index.depth:
        raise ValueError("weights length must equal depth")
    if precision is None:
        precision = default_precision(m)
    return _numeric_prefix(m, index, weights, precision, m // 2)


# ---- truncated colored MZVs --------------------------------------------------


def truncated_cmzv_exact(m: int, index: Index) -> CycNum:
    """Sum over m > n_1 > ... > n_r > 0 of prod eta_j^{n_j} / n_j^{k_j}."""
    if m < 1:
        raise ValueError("m must be positive")
    N = index.level
    r = index.depth
    if r == 0:
        return CycNum.one(N)
    if r >= m:
        return CycNum.zero(N)
    if N == 1:
        acc = [Fraction(0)] * r
        for n in range(1, m):
            nk = [Fraction(1, n ** k) for k in index.ks]
            for j in range(r):
                if j + 1 < r:
                    if acc[j + 1]:
                        acc[j] += nk[j] * acc[j + 1]
                else:
                    acc[j] += nk[j]
        return CycNum.rational(1, acc[0])
    roots = [CycNum.root_power(N, t) for t in range(N)]
    zero = CycNum.zero(N)
    acc = [zero] * r
    for n in range(1, m):
        for j in range(r):
            t = roots[(index.es[j] * n) % N] * Fraction(1, n ** index.ks[j])
            if j + 1 < r:
                if not acc[j + 1].is_zero:
                    acc[j] = acc[j] + t * acc[j + 1]
            else:
                acc[j] = acc[j] + t
    return acc[0]


def truncated_cmzv_numeric(m: int, index: Index, precision: int = 53) -> complex:
    """Numeric truncation of the colored MZV series below m."""
    if m < 1:
        raise ValueError("m must be positive")
    r = index.depth
    if r == 0:
        return 1.0 + 0.0j
    if r >= m:
        return 0.0 + 0.0j
    N = index.level
    if precision > 64:
        import mpmath

        with mpmath.workprec(precision + 16):
            acc = [mpmath.mpc(0)] * r
            _tick(r * (m - 1))
            for n in range(1, m):
                prev = list(acc)  # values at n - 1
                for j in range(r):
                    t = mpmath.expjpi(mpmath.mpf(2 * ((index.es[j] * n) % N)) / N)
                    t /= mpmath.mpf(n) ** index.ks[j]
                    if j + 1 < r:
                        if prev[j + 1]:
                            acc[j] = acc[j] + t * prev[j + 1]
                    else:
                        acc[j] = acc[j] + t
            return complex(acc[0])
    if precision > 53:
        real, cplx = np.longdouble, np.clongdouble
        pi = _longdouble_pi()
    else:
        real, cplx = np.float64, np.complex128
        pi = np.pi
    n = np.arange(1, m, dtype=real)
    root_table = np.exp(1j * (2 * pi / N) * np.arange(N, dtype=real)).astype(cplx)
    S = None
    _tick(r * (m - 1))
    for j in range(r - 1, -1, -1):
        k, e = index.ks[j], index.es[j]
        term = root_table[(e * n.astype(np.int64)) % N] / n.astype(cplx) ** k
        if S is None:
            S = np.cumsum(term)
        else:
            shifted = np.concatenate(([cplx(0)], S[:-1]))
            S = np.cumsum(term * shifted)
    return complex(S[-1])


# ---- asymptotic comparison against the symmetric main term -------------------


def asymptotic_probe(index: Index, alpha: int, m_grid, precision=None):
    """Compare q-sums along m = alpha (mod N) with the predicted main term.

    Returns a list of dicts with keys m, value, predicted, residual.  The
    prediction evaluates the regularized product formula at
    T = log(m/pi) + euler_gamma, with the exact root-of-unity prefactors at
    exponent m.
    """
    from .symmetric import MzvEvalConfig, symmetric_pair_polynomial

    N = index.level
    rows = []
    grid = list(m_grid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("m_grid must be strictly increasing")
    cfg = MzvEvalConfig()
    for m in grid:
        if m % N != alpha % N:
            raise ValueError(f"grid point {m} is not {alpha} mod {N}")
        value = qsum_numeric(m, index, precision=precision)
        poly = symmetric_pair_polynomial(index, m, cfg)
        t_m = math.log(m / math.pi) + float(np.euler_gamma)
        predicted = poly.eval(t_m)
        rows.append(
            {
                "m": m,
                "value": value,
                "predicted": predicted,
                "residual": abs(value - predicted),
                "tol": poly.tol,
            }
        )
    return rows


# ---- request/sweep API --------------------------------------------------------


@dataclass(frozen=True)
class QSumRequest:
    m: int
    index: Index
    mode: str = "numeric"  # exact | numeric | half
    weights: tuple | None = None
    precision: int | None = None

    def __post_init__(self):
        if self.mode not in ("exact", "numeric", "half"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(self.weights))
            if len(self.weights) != self.index.depth:
                raise ValueError("weights length must equal depth")


def evaluate_request(req: QSumRequest):
    if req.mode == "exact":
        if req.weights:
            raise ValueError("exact mode does not support q-power weights")
        return qsum_exact(req.m, req.index)
    if req.mode == "half":
        return qsum_half_numeric(req.m, req.index, req.weights, req.precision)
    return qsum_numeric(req.m, req.index, req.weights, req.precision)


def sweep(requests, jobs: int = 1):
    """Evaluate a batch of requests, optionally across processes."""
    requests = list(requests)
    if jobs <= 1 or len(requests) <= 1:
        return [evaluate_request(r) for r in requests]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(evaluate_request, requests))
