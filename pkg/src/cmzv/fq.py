"""Residue fields F_(p^d) attached to a cyclotomic level.

For a prime p coprime to N, the image of zeta_N in characteristic p generates
F_(p^d) with d the multiplicative order of p mod N.  A context fixes one
degree-d irreducible factor of the N-th cyclotomic polynomial mod p (the
canonical choice picks the factor x^d + ... whose root vector is smallest, so
for d = 1 the smallest root wins) and the image of zeta_N modulo it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

from .cyclotomic import CycNum, cyclotomic_polynomial, euler_phi


class BadPrimeError(ValueError):
    """Raised when a denominator is divisible by the residue characteristic."""


# ---- primality and small prime streams -----------------------------------

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def inverse_table(p: int) -> list[int]:
    """Inverses of 1..p-1 mod p by one batch-inversion pass."""
    prefix = [1] * p
    for n in range(1, p):
        prefix[n] = prefix[n - 1] * n % p
    inv_all = pow(prefix[p - 1], p - 2, p)
    out = [0] * p
    for n in range(p - 1, 0, -1):
        out[n] = prefix[n - 1] * inv_all % p
        inv_all = inv_all * n % p
    return out


# ---- dense polynomial arithmetic over F_p ---------------------------------


def _ptrim(a):
    i = len(a)
    while i > 1 and a[i - 1] == 0:
        i -= 1
    return a[:i]


def _pmul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    for i in range(len(a) - 1 - dm, -1, -1):
        c = a[i + dm] % p
        if c:
            q = c * inv_lead % p
            for j in range(dm + 1):
                a[i + j] = (a[i + j] - q * m[j]) % p
    return _ptrim([c % p for c in a[:dm]]) if dm > 0 else [0]

def _pgcd(a, b, p):
    a, b = _ptrim([c % p for c in a]), _ptrim([c % p for c in b])
    while any(b):
        a, b = b, _pmod(a, b, p)
    inv = pow(a[-1], p - 2, p)
    return [c * inv % p for c in a]


def _ppow_mod(a, e, m, p):
    result = [1]
    base = _pmod(a, m, p) if len(a) >= len(m) else _ptrim(a)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        e >>= 1
        if e:
            base = _pmod(_pmul(base, base, p), m, p)
    return result


def _equal_degree_factor(f, d, p, rng):
    """Split a squarefree product of degree-d irreducibles (Cantor-Zassenhaus)."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = _ptrim([rng.randrange(p) for _ in range(n)])
        if len(a) == 1:
            continue
        if p == 2:
            b = list(a)
            acc = list(a)
            for _ in range(d - 1):
                acc = _pmod(_pmul(acc, acc, p), f, p)
                b = _ptrim([(x + y) % p for x, y in _zip_pad(b, acc)])
        else:
            b = _ppow_mod(a, (p**d - 1) // 2, f, p)
            b = list(b)
            b[0] = (b[0] - 1) % p
            b = _ptrim(b)
        if not any(b):
            continue
        g = _pgcd(b, f, p)
        if 0 < len(g) - 1 < n:
            quo = _pdiv_exact(f, g, p)
            return _equal_degree_factor(g, d, p, rng) + _equal_degree_factor(quo, d, p, rng)


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return zip(a, b)


def _pdiv_exact(a, b, p):
    a = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    quo = [0] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db] % p
        q = c * inv_lead % p
        quo[i] = q
        if q:
            for j in range(db + 1):
                a[i + j] = (a[i + j] - q * b[j]) % p
    return _ptrim(quo)


# ---- the context and field elements ---------------------------------------


@dataclass(frozen=True)
class FqContext:
    p: int
    N: int
    d: int
    modulus: tuple[int, ...]  # monic, length d + 1, constant term first
    zeta_coeffs: tuple[int, ...]  # image of zeta_N, length d

    @property
    def zeta_image(self) -> "Fq":
        return Fq(self, self.zeta_coeffs)

    def zero(self) -> "Fq":
        return Fq(self, (0,) * self.d)

    def one(self) -> "Fq":
        return Fq(self, (1,) + (0,) * (self.d - 1))

    def scalar(self, c: int) -> "Fq":
        return Fq(self, (c % self.p,) + (0,) * (self.d - 1))

    def element(self, coeffs) -> "Fq":
        coeffs = [c % self.p for c in coeffs]
        if len(coeffs) > self.d:
            coeffs = _pmod(coeffs, list(self.modulus), self.p)
        coeffs = list(coeffs) + [0] * (self.d - len(coeffs))
        return Fq(self, tuple(coeffs[: self.d]))

    def zeta_power(self, a: int) -> "Fq":
        return _zeta_power_cached(self)[a % self.N]


@lru_cache(maxsize=None)
def _zeta_power_cached(ctx: FqContext) -> tuple:
    pows = [ctx.one()]
    z = ctx.zeta_image
    for _ in range(ctx.N - 1):
        pows.append(pows[-1] * z)
    return tuple(pows)


class Fq:
    """Element of the residue field, a length-d vector mod p."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FqContext, coeffs):
        self.ctx = ctx
        self.coeffs = tuple(coeffs)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def in_prime_field(self) -> bool:
        return not any(self.coeffs[1:])

    def __add__(self, other):
        p = self.ctx.p
        return Fq(self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        p = self.ctx.p
        return Fq(self.ctx, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        p = self.ctx.p
        return Fq(self.ctx, tuple(-a % p for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            p = self.ctx.p
            return Fq(self.ctx, tuple(a * other % p for a in self.coeffs))
        ctx = self.ctx
        d = ctx.d
        if d == 1:
            return Fq(ctx, (self.coeffs[0] * other.coeffs[0] % ctx.p,))
        prod = _pmul(list(self.coeffs), list(other.coeffs), ctx.p)
        red = _pmod(prod, list(ctx.modulus), ctx.p) if len(prod) > d else prod
        return Fq(ctx, tuple(list(red) + [0] * (d - len(red))))

    __rmul__ = __mul__

    def inv(self) -> "Fq":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero in residue field")
        ctx = self.ctx
        if ctx.d == 1:
            return Fq(ctx, (pow(self.coeffs[0], ctx.p - 2, ctx.p),))
        # extended Euclid against the modulus
        p = ctx.p
        r0, r1 = list(ctx.modulus), _ptrim(list(self.coeffs))
        t0, t1 = [0], [1]
        while len(r1) > 1 or r1[0] != 0:
            if len(r1) == 1:
                break
            q, rem = _pdivmod(r0, r1, p)
            r0, r1 = r1, rem
            t0, t1 = t1, _ptrim([(x - y) % p for x, y in _zip_pad(t0, _pmul(q, t1, p))])
        scale = pow(r1[0], p - 2, p)
        out = [c * scale % p for c in t1]
        return ctx.element(out)

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result = self.ctx.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == ((other % self.ctx.p,) + (0,) * (self.ctx.d - 1))
        if not isinstance(other, Fq):
            return NotImplemented
        return self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.modulus, self.coeffs))

    def __repr__(self):
        return f"Fq{self.coeffs}@p{self.ctx.p}"


def _pdivmod(a, b, p):
    a = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    if len(a) - 1 < db:
        return [0], _ptrim(a)
    quo = [0] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db] % p
        if c:
            q = c * inv_lead % p
            quo[i] = q
            for j in range(db + 1):
                a[i + j] = (a[i + j] - q * b[j]) % p
    return _ptrim(quo), _ptrim(a[:db] if db > 0 else [0])


def _order_mod(p: int, N: int) -> int:
    if N == 1:
        return 1
    d, acc = 1, p % N
    while acc != 1:
        acc = acc * p % N
        d += 1
        if d > N:
            raise ValueError("p not coprime to N")
    return d


@lru_cache(maxsize=None)
def make_fq_context(p: int, N: int, twist: int = 1) -> FqContext:
    """Build the canonical residue-field context for (p, N).

    twist selects a Galois-conjugate embedding: the image of zeta_N becomes
    the twist-th power of the canonical one (twist coprime to N).
    """
    if not is_prime(p):
        raise BadPrimeError(f"{p} is not prime")
    if N < 1:
        raise ValueError("level must be positive")
    if N % p == 0:
        raise BadPrimeError("p must not divide N")
    if math.gcd(twist, N) != 1:
        raise ValueError("twist must be coprime to N")
    d = _order_mod(p, N)
    if N == 1:
        return FqContext(p, 1, 1, ((-1) % p, 1), (1,))
    phi_n = [c % p for c in cyclotomic_polynomial(N)]
    if d == euler_phi(N):
        factors = [phi_n]
    else:
        rng = random.Random((p << 20) ^ N)
        factors = _equal_degree_factor(phi_n, d, p, rng)
    # canonical: smallest root vector, i.e. lexicographically smallest
    # tuple of negated coefficients read from the constant term upward
    factors.sort(key=lambda f: tuple((-c) % p for c in f[:-1]))
    canonical = factors[0]
    if d == 1:
        zeta = ((-canonical[0]) % p,)
    else:
        zeta = tuple([0, 1] + [0] * (d - 2))
    ctx = FqContext(p, N, d, tuple(canonical), zeta)
    if twist % N == 1:
        return ctx
    # move to the factor annihilating zeta^twist
    zt = ctx.zeta_image ** (twist % N)
    if d == 1:
        return FqContext(p, N, 1, ((-zt.coeffs[0]) % p, 1), (zt.coeffs[0],))
    for f in factors:
        acc = ctx.zero()
        for c in reversed(f):
            acc = acc * zt + ctx.scalar(c)
        if acc.is_zero:
            return FqContext(p, N, d, tuple(f), tuple([0, 1] + [0] * (d - 2)))
    raise ArithmeticError("no factor annihilates the twisted root")


def to_residue_field(a: CycNum, ctx: FqContext) -> Fq:
    """Reduce a cyclotomic number modulo the prime ideal fixed by the context.

    Accepts elements of level N (the context level) or level p*N, where the
    p-power part of the root is sent to 1.  Raises BadPrimeError when the
    denominator is divisible by p.
    """
    p, N = ctx.p, ctx.N
    if a.den % p == 0:
        raise BadPrimeError(f"denominator divisible by {p}")
    L = a.level
    if L == N:
        w = ctx.zeta_image
    elif N == 1:
        rest = L
        while rest % p == 0:
            rest //= p
        if rest != 1:
            raise ValueError(f"cannot reduce level {L} in a level-1 context")
        w = ctx.one()
    else:
        q, rest = 1, L
        while rest % p == 0:
            rest //= p
            q *= p
        if rest != N or q == 1:
            raise ValueError(f"cannot reduce level {L} into context for level {N}")
        t = pow(L // N, -1, N)
        w = ctx.zeta_image ** t
    acc = ctx.zero()
    for c in reversed(a.nums):
        acc = acc * w + ctx.scalar(c)
    return acc * pow(a.den, p - 2, p)


def right_kernel(rows: list[list[Fq]]) -> list[list[Fq]]:
    """Basis of the right kernel of a matrix over F_(p^d).

    Gaussian elimination; each basis vector has a single free coordinate set
    to one.  Returns an empty list when the kernel is trivial.
    """
    if not rows:
        return []
    ctx = rows[0][0].ctx if rows[0] else None
    if ctx is None:
        return []
    ncols = len(rows[0])
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(mat)):
            if not mat[i][c].is_zero:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = mat[r][c].inv()
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and not mat[i][c].is_zero:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [ctx.zero()] * ncols
        vec[fc] = ctx.one()
        for ri, pc in enumerate(pivots):
            vec[pc] = -mat[ri][fc]
        basis.append(vec)
    return basis
