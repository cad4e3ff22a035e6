"""Finite colored MZVs: per-prime residues, the congruence model, and tables.

Each value is the truncated sum below a prime, reduced into the residue
field picked by make_fq_context.  Residue tables over a class of primes are
the raw material for relation discovery, so they cache to disk.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .fq import BadPrimeError, Fq, FqContext, inverse_table, is_prime, make_fq_context
from .words import Index, format_index, parse_index


@dataclass(frozen=True)
class PrimeClass:
    """An ordered batch of primes congruent to alpha modulo the level."""

    level: int
    alpha: int
    primes: tuple[int, ...]

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be positive")
        if math.gcd(self.alpha, self.level) != 1:
            raise ValueError("alpha must be a unit modulo the level")
        object.__setattr__(self, "alpha", self.alpha % self.level if self.level > 1 else 0)
        object.__setattr__(self, "primes", tuple(self.primes))
        for p in self.primes:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            if p % self.level != self.alpha % self.level:
                raise ValueError(f"{p} is not {self.alpha} mod {self.level}")
            if self.level % p == 0:
                raise ValueError(f"{p} divides the level")


def primes_in_class(N, alpha, count, floor=None, weight=None) -> PrimeClass:
    """The first `count` primes congruent to alpha mod N above a floor.

    With a `weight` given the floor defaults to weight + 2, dropping the
    degenerate truncations; an explicit floor wins.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if math.gcd(alpha, N) != 1:
        raise ValueError("alpha must be a unit modulo N")
    if floor is None:
        floor = weight + 2 if weight is not None else 1
    found = []
    n = max(floor, 1) + 1
    while len(found) < count:
        if n % N == alpha % N and N % n != 0 and is_prime(n):
            found.append(n)
        n += 1
    return PrimeClass(N, alpha % N, tuple(found))


@dataclass(frozen=True)
class CongruenceIndex:
    """Exponents plus residue-class constraints m_a = f_a (mod level)."""

    ks: tuple[int, ...]
    fs: tuple[int, ...]
    level: int

    def __post_init__(self):
        object.__setattr__(self, "ks", tuple(self.ks))
        if self.level < 1:
            raise ValueError("level must be positive")
        if len(self.ks) != len(self.fs):
            raise ValueError("ks and fs must have equal length")
        if any(k < 1 for k in self.ks):
            raise ValueError("exponents must be positive")
        object.__setattr__(self, "fs", tuple(f % self.level for f in self.fs))

    @property
    def weight(self) -> int:
        return sum(self.ks)

    @property
    def depth(self) -> int:
        return len(self.ks)

    def reversed_class(self, alpha: int) -> "CongruenceIndex":
        """The image under m_a -> p - m_(r+1-a), p = alpha mod level."""
        return CongruenceIndex(
            self.ks[::-1], tuple((alpha - f) % self.level for f in self.fs[::-1]), self.level
        )


def format_congruence_index(cix: CongruenceIndex) -> str:
    ks = ",".join(str(k) for k in cix.ks)
    fs = ",".join(str(f) for f in cix.fs)
    return f"k={ks};f={fs}"


def parse_congruence_index(text: str, level: int) -> CongruenceIndex:
    parts = dict(
        (chunk.split("=", 1)[0].strip(), chunk.split("=", 1)[1]) for chunk in text.split(";")
    )
    if set(parts) != {"k", "f"}:
        raise ValueError(f"expected 'k=..;f=..', got {text!r}")
    ks = tuple(int(x) for x in parts["k"].split(",") if x.strip())
    fs = tuple(int(x) for x in parts["f"].split(",") if x.strip())
    return CongruenceIndex(ks, fs, level)


# ---- per-prime residues ---------------------------------------------------------


def finite_residue(ix: Index, p: int, ctx: FqContext | None = None) -> Fq:
    """The truncated colored sum below p in the residue field of ctx."""
    if ctx is None:
        ctx = make_fq_context(p, ix.level)
    if ctx.p != p or ctx.N != ix.level:
        raise ValueError("context does not match the prime and level")
    r = ix.depth
    if r == 0:
        return ctx.one()
    if r >= p:
        return ctx.zero()
    inv = inverse_table(p)
    N = ix.level
    if ctx.d == 1:
        # everything lives in F_p; run the recurrence on plain ints
        zp = [1] * N
        z = ctx.zeta_coeffs[0] % p
        for t in range(1, N):
            zp[t] = zp[t - 1] * z % p
        acc = [0] * r
        for n in range(1, p):
            for j in range(r):
                t = zp[(ix.es[j] * n) % N] * pow(inv[n], ix.ks[j], p) % p
                if j + 1 < r:
                    if acc[j + 1]:
                        acc[j] = (acc[j] + t * acc[j + 1]) % p
                else:
                    acc[j] = (acc[j] + t) % p
        return ctx.scalar(acc[0])
    zp = [ctx.zeta_power(t) for t in range(N)]
    acc = [ctx.zero() for _ in range(r)]
    for n in range(1, p):
        for j in range(r):
            t = zp[(ix.es[j] * n) % N] * pow(inv[n], ix.ks[j], p)
            if j + 1 < r:
                if not acc[j + 1].is_zero:
                    acc[j] = acc[j] + t * acc[j + 1]
            else:
                acc[j] = acc[j] + t
    return acc[0]


def congruence_residue_int(cix: CongruenceIndex, p: int) -> int:
    """The congruence-model sum below p as a plain integer mod p."""
    r = cix.depth
    if r == 0:
        return 1 % p
    if r >= p:
        return 0
    inv = inverse_table(p)
    N = cix.level
    acc = [0] * r
    for n in range(1, p):
        nm = n % N
        for j in range(r):
            if nm != cix.fs[j]:
                continue
            t = pow(inv[n], cix.ks[j], p)
            if j + 1 < r:
                if acc[j + 1]:
                    acc[j] = (acc[j] + t * acc[j + 1]) % p
            else:
                acc[j] = (acc[j] + t) % p
    return acc[0]


def congruence_residue(cix: CongruenceIndex, p: int, ctx: FqContext | None = None) -> Fq:
    """Congruence-model value in the prime subfield."""
    if ctx is None:
        ctx = make_fq_context(p, cix.level)
    return ctx.scalar(congruence_residue_int(cix, p))


def congruence_from_colored(cix: CongruenceIndex, p: int, ctx: FqContext | None = None) -> Fq:
    """The N^r-term average of colored residues; cross-checks the direct sum."""
    import itertools

    if ctx is None:
        ctx = make_fq_context(p, cix.level)
    N, r = cix.level, cix.depth
    if r == 0:
        return ctx.one()
    total = ctx.zero()
    for es in itertools.product(range(N), repeat=r):
        phase = ctx.zeta_power(-sum(e * f for e, f in zip(es, cix.fs)) % N)
        total = total + phase * finite_residue(Index(cix.ks, es, N), p, ctx)
    scale = pow(pow(N, r, p), p - 2, p)
    return total * scale


# ---- residue tables with a disk cache ---------------------------------------------


def _generator_key(gen) -> str:
    if isinstance(gen, CongruenceIndex):
        return format_congruence_index(gen)
    return format_index(gen)


def _parse_generator(text: str, level: int):
    if ";f=" in text:
        return parse_congruence_index(text, level)
    return parse_index(text, level)


@dataclass
class ResidueTable:
    pclass: PrimeClass
    generators: tuple
    entries: dict = field(default_factory=dict)  # (generator, p) -> Fq
    contexts: dict = field(default_factory=dict)  # p -> FqContext

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p in self.pclass.primes if p in self.contexts)

    def residue(self, gen, p) -> Fq:
        return self.entries[(gen, p)]

    def int_column(self, gen) -> list[int]:
        """Prime-field entries as plain ints, ordered by prime (congruence rows)."""
        out = []
        for p in self.primes:
            v = self.entries[(gen, p)]
            if not v.in_prime_field:
                raise ValueError("column has entries outside the prime field")
            out.append(v.coeffs[0])
        return out


def _default_cache_dir() -> str:
    env = os.environ.get("CMZV_CACHE_DIR")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "cmzv")


def _cache_path(cache_dir: str, N: int, alpha: int) -> str:
    return os.path.join(cache_dir, f"residues_N{N}_a{alpha}.jsonl")


def _load_cache(path: str) -> list[dict]:
    records = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError:
                    continue
                if rec.get("v") == 1:
                    records.append(rec)
    except FileNotFoundError:
        pass
    except OSError as exc:
        warnings.warn(f"residue cache unreadable ({exc}); recomputing")
    return records


def _store_cache(path: str, records: list[dict]) -> None:
    try:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        ordered = sorted(records, key=lambda r: (r["p"], r["index"]))
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            for rec in ordered:
                fh.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")
        os.replace(tmp, path)
    except OSError as exc:
        warnings.warn(f"residue cache not written ({exc})")


def store_records(records: list[dict], cache_dir: str | None = None) -> None:
    """Merge externally supplied cache records into the per-class files.

    Records are grouped by (N, alpha); duplicates of entries already on disk
    (same prime, index, modulus, and root image) are dropped.
    """
    root = cache_dir or _default_cache_dir()
    by_class: dict[tuple[int, int], list[dict]] = {}
    for rec in records:
        if not isinstance(rec, dict) or rec.get("v") != 1:
            continue
        by_class.setdefault((rec["N"], rec["alpha"]), []).append(rec)
    for (N, alpha), recs in by_class.items():
        path = _cache_path(root, N, alpha)
        merged = {}
        for rec in _load_cache(path) + recs:
            key = (
                rec["p"],
                rec["index"],
                tuple(rec["modulus"]),
                tuple(rec["zeta_image"]),
            )
            merged.setdefault(key, rec)
        _store_cache(path, list(merged.values()))


def _compute_column(args):
    """All generator residues at one prime (worker-process entry point)."""
    N, alpha, p, twist, gen_keys = args
    ctx = make_fq_context(p, N, twist)
    out = []
    for key in gen_keys:
        gen = _parse_generator(key, N)
        if isinstance(gen, CongruenceIndex):
            val = congruence_residue(gen, p, ctx)
        else:
            val = finite_residue(gen, p, ctx)
        out.append((key, list(val.coeffs)))
    return p, out


def build_residue_table(
    generators,
    pclass: PrimeClass,
    use_cache: bool = True,
    cache_dir: str | None = None,
    jobs: int = 1,
    twist: int = 1,
) -> ResidueTable:
    """Fill (generator, prime) -> residue, reading and extending the disk cache.

    Primes rejected by the residue-field construction are skipped with a
    warning; cache records are trusted only when their context (modulus and
    root image) matches the one built here.
    """
    generators = tuple(generators)
    N, alpha = pclass.level, pclass.alpha
    table = ResidueTable(pclass, generators)

    contexts = {}
    for p in pclass.primes:
        try:
            contexts[p] = make_fq_context(p, N, twist)
        except BadPrimeError as exc:
            warnings.warn(f"skipping prime {p}: {exc}")
    table.contexts = contexts

    cache_file = _cache_path(cache_dir or _default_cache_dir(), N, alpha)
    records = _load_cache(cache_file) if use_cache else []
    cached = {}
    for rec in records:
        p = rec["p"]
        ctx = contexts.get(p)
        if ctx is None:
            continue
        if tuple(rec["modulus"]) != ctx.modulus or tuple(rec["zeta_image"]) != ctx.zeta_coeffs:
            continue
        cached[(rec["index"], p)] = rec["residue"]

    todo = {}  # p -> list of generator keys
    for gen in generators:
        key = _generator_key(gen)
        for p in contexts:
            hit = cached.get((key, p))
            if hit is not None:
                table.entries[(gen, p)] = Fq(contexts[p], hit)
            else:
                todo.setdefault(p, []).append(key)

    work = [(N, alpha, p, twist, keys) for p, keys in sorted(todo.items())]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_compute_column, work))
    else:
        results = [_compute_column(w) for w in work]

    fresh = []
    by_key = {_generator_key(g): g for g in generators}
    for p, col in results:
        ctx = contexts[p]
        for key, coeffs in col:
            table.entries[(by_key[key], p)] = Fq(ctx, coeffs)
            fresh.append(
                {
                    "v": 1,
                    "N": N,
                    "alpha": alpha,
                    "p": p,
                    "modulus": list(ctx.modulus),
                    "zeta_image": list(ctx.zeta_coeffs),
                    "index": key,
                    "residue": [c % p for c in coeffs],
                }
            )

    if use_cache and fresh:
        seen = {(r["index"], r["p"], tuple(r["modulus"])) for r in fresh}
        keep = [
            r
            for r in records
            if (r["index"], r["p"], tuple(r["modulus"])) not in seen
        ]
        _store_cache(cache_file, keep + fresh)
    return table
