"""Command-line surface: evaluations, tables, property checks, cache admin.

Outputs are deterministic for a fixed configuration (CSV rows and JSON
documents are emitted with stable ordering and formatting); the run manifest
carries the tool version, the resolved configuration (seed included), and
the wall time, so any numeric artifact can be regenerated from it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
import time
from dataclasses import asdict, dataclass

try:
    from importlib.metadata import version as _pkg_version

    VERSION = _pkg_version("cmzv")
except Exception:  # pragma: no cover - not installed
    VERSION = "0.1.0"


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on; recorded verbatim in the manifest."""

    command: str
    N: int = 1
    alpha: int = 1
    precision: int = 53
    cutoff: int = 10**6
    train_primes: int = 24
    verify_primes: int = 12
    cache_dir: str | None = None
    fmt: str = "csv"
    jobs: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.N < 1 or self.precision < 1 or self.cutoff < 1 or self.jobs < 1:
            raise ValueError("bounds must be positive")
        if self.train_primes < 1 or self.verify_primes < 0:
            raise ValueError("prime counts must be positive")


def _manifest(config: RunConfig, wall: float, extra=None):
    doc = {
        "tool": "cmzv",
        "version": VERSION,
        "config": asdict(config),
        "wall_time_s": round(wall, 3),
    }
    if extra:
        doc.update(extra)
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


class _Out:
    """Primary output to stdout or a file; manifest beside it or on stderr."""

    def __init__(self, path: str | None):
        self.path = path

    def write(self, text: str):
        if self.path:
            with open(self.path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)

    def write_manifest(self, text: str):
        if self.path:
            with open(self.path + ".manifest.json", "w") as fh:
                fh.write(text + "\n")
        else:
            print(text, file=sys.stderr)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _parse_any_index(text: str, level: int):
    from .finite import parse_congruence_index
    from .words import parse_index

    if ";f=" in text or text.startswith("f="):
        return parse_congruence_index(text, level)
    return parse_index(text, level)


# ---- subcommands -------------------------------------------------------------


def _cmd_qsum(args, config: RunConfig, out: _Out) -> int:
    from .qsums import asymptotic_probe
    from .words import parse_index

    ix = parse_index(args.index, args.N)
    grid = [int(tok) for tok in args.m.split(",")]
    rows = asymptotic_probe(ix, config.alpha, grid, precision=config.precision)
    table = [
        (
            r["m"],
            repr(r["value"].real),
            repr(r["value"].imag),
            repr(r["predicted"].real),
            repr(r["predicted"].imag),
            repr(r["residual"]),
        )
        for r in rows
    ]
    header = ("m", "re", "im", "predicted_re", "predicted_im", "residual_abs")
    if config.fmt == "json":
        doc = [dict(zip(header, row)) | {"tol": rows[i]["tol"]} for i, row in enumerate(table)]
        out.write(_json_text(doc))
    else:
        out.write(_csv_text(header, table))
    return 0


def _cmd_finite(args, config: RunConfig, out: _Out) -> int:
    from .finite import (
        CongruenceIndex,
        congruence_residue,
        finite_residue,
        primes_in_class,
    )
    from .fq import make_fq_context

    ix = _parse_any_index(args.index, args.N)
    pclass = primes_in_class(args.N, config.alpha, args.primes, weight=ix.weight)
    rows = []
    for p in pclass.primes:
        if isinstance(ix, CongruenceIndex):
            value = congruence_residue(ix, p)
        else:
            value = finite_residue(ix, p, make_fq_context(p, args.N))
        rows.append((p, ";".join(str(c) for c in value.coeffs), value.ctx.d))
    if config.fmt == "json":
        doc = [{"p": p, "residue": res, "field_degree": d} for p, res, d in rows]
        out.write(_json_text(doc))
    else:
        out.write(_csv_text(("p", "residue", "field_degree"), rows))
    return 0


def _cmd_sym(args, config: RunConfig, out: _Out) -> int:
    from .symmetric import MzvEvalConfig, symmetric_cmzv
    from .words import parse_index

    ix = parse_index(args.index, args.N)
    cfg = MzvEvalConfig(cutoff=config.cutoff, precision=config.precision)
    val = symmetric_cmzv(config.alpha, ix, cfg)
    doc = {
        "index": args.index,
        "alpha": config.alpha,
        "N": args.N,
        "value_re": val.value.real,
        "value_im": val.value.imag,
        "tol": val.tol,
        "t_poly_coeffs": [[c.real, c.imag] for c in val.poly.coeffs],
        "t_independence_ok": val.t_independent,
    }
    out.write(_json_text(doc))
    return 0


def _cmd_dim(args, config: RunConfig, out: _Out) -> int:
    from .relations import DimConfig, dimension_table
    from .finite import format_congruence_index

    dconf = DimConfig(
        train_primes=config.train_primes,
        verify_primes=config.verify_primes,
        height_bound=args.height_bound,
        twist=args.twist,
        use_cache=not args.no_cache,
        cache_dir=config.cache_dir,
        jobs=config.jobs,
    )
    reports = dimension_table(args.N, config.alpha, args.wmax, dconf)
    if config.fmt == "json":
        doc = []
        for r in reports:
            doc.append(
                {
                    "N": r.N,
                    "alpha": r.alpha,
                    "weight": r.weight,
                    "generators": r.generator_count,
                    "exact_relation_rank": r.exact_relation_rank,
                    "lll_extra_relations": r.lll_extra_relations,
                    "dim": r.dim_estimate,
                    "mt_dim": r.mt_dim,
                    "under_determined": r.under_determined,
                    "relations": [
                        {
                            "source": cand.source,
                            "verified_primes": cand.verified_primes,
                            "coefficients": {
                                format_congruence_index(g): str(c)
                                for g, c in sorted(
                                    cand.coefficients.items(),
                                    key=lambda kv: (kv[0].ks, kv[0].fs),
                                )
                            },
                        }
                        for cand in r.relations
                    ],
                }
            )
        out.write(_json_text(doc))
    else:
        rows = [
            (
                r.weight,
                r.generator_count,
                r.exact_relation_rank,
                r.lll_extra_relations,
                r.dim_estimate,
                r.mt_dim,
                int(r.under_determined),
            )
            for r in reports
        ]
        out.write(
            _csv_text(
                (
                    "weight",
                    "generators",
                    "exact_relation_rank",
                    "lll_extra_relations",
                    "dim",
                    "mt_dim",
                    "under_determined",
                ),
                rows,
            )
        )
    return 0


def _cmd_mtdim(args, config: RunConfig, out: _Out) -> int:
    from .relations import mt_dimension

    rows = [(w, mt_dimension(args.N, w)) for w in range(1, args.wmax + 1)]
    if config.fmt == "json":
        out.write(_json_text([{"weight": w, "mt_dim": d} for w, d in rows]))
    else:
        out.write(_csv_text(("weight", "mt_dim"), rows))
    return 0


def _cmd_check(args, config: RunConfig, out: _Out) -> int:
    from .finite import primes_in_class
    from .relations import check_linear_shuffle_finite, check_reversal_finite
    from .words import E_ZERO, Index, Word

    rng = random.Random(config.seed)
    failures = []
    ran = 0
    for _ in range(args.count):
        N = rng.choice([1, 2, 3, 4])
        units = [a for a in range(N) if math.gcd(a, N) == 1]
        alpha = rng.choice(units)
        pclass = primes_in_class(N, alpha, args.primes, weight=args.wmax)
        r = rng.randint(1, max(1, args.wmax // 2))
        budget = args.wmax - r
        ks = tuple(1 + rng.randint(0, budget // r) for _ in range(r))
        es = tuple(rng.randrange(N) for _ in range(r))
        ix = Index(ks, es, N)
        ran += 1
        for p, ok in check_reversal_finite(ix, pclass).items():
            if not ok:
                failures.append({"kind": "reversal", "N": N, "alpha": alpha, "p": p,
                                 "index": f"k={','.join(map(str, ks))};e={','.join(map(str, es))}"})
        alphabet = [E_ZERO] + list(range(N))
        a = rng.randint(1, max(1, args.wmax - 1))
        b = args.wmax - 1 - a
        u = Word(tuple(rng.choice(alphabet) for _ in range(a - 1)) + (rng.randrange(N),), N)
        v = Word(tuple(rng.choice(alphabet) for _ in range(max(0, b))), N)
        ran += 1
        for p, ok in check_linear_shuffle_finite(u, v, pclass).items():
            if not ok:
                failures.append({"kind": "linear_shuffle", "N": N, "alpha": alpha, "p": p,
                                 "u": list(u.letters), "v": list(v.letters)})
    doc = {"instances": ran, "failures": failures, "passed": not failures}
    out.write(_json_text(doc))
    return 0 if not failures else 1


# ---- cache administration ---------------------------------------------------------


def _cache_dir(config: RunConfig) -> str:
    if config.cache_dir:
        return config.cache_dir
    env = os.environ.get("CMZV_CACHE_DIR")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "cmzv")


def _cache_files(root: str):
    if not os.path.isdir(root):
        return []
    return sorted(
        os.path.join(root, name)
        for name in os.listdir(root)
        if name.startswith("residues_") and name.endswith(".jsonl")
    )


def _read_records(path: str):
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                continue
            if isinstance(rec, dict) and rec.get("v") == 1:
                out.append(rec)
    return out


def _cmd_cache(args, config: RunConfig, out: _Out) -> int:
    root = _cache_dir(config)
    files = _cache_files(root)
    if args.action == "stat":
        counts = {}
        for path in files:
            for rec in _read_records(path):
                key = (rec["N"], rec["alpha"], rec["p"])
                counts[key] = counts.get(key, 0) + 1
        rows = [(n, a, p, c) for (n, a, p), c in sorted(counts.items())]
        if config.fmt == "json":
            doc = [{"N": n, "alpha": a, "p": p, "entries": c} for n, a, p, c in rows]
            out.write(_json_text({"total": sum(c for *_, c in rows), "classes": doc}))
        else:
            out.write(_csv_text(("N", "alpha", "p", "entries"), rows))
        return 0
    if args.action == "clear":
        for path in files:
            os.remove(path)
        out.write(_json_text({"removed_files": len(files)}))
        return 0
    if args.action == "export":
        records = []
        for path in files:
            records.extend(_read_records(path))
        records.sort(key=lambda r: (r["N"], r["alpha"], r["p"], r["index"]))
        text = "".join(
            json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n"
            for rec in records
        )
        out.write(text)
        return 0
    # import: merge a JSON-lines bundle back into per-class files
    from .finite import store_records

    with open(args.file) as fh:
        records = [
            json.loads(line) for line in fh if line.strip()
        ]
    records = [r for r in records if isinstance(r, dict) and r.get("v") == 1]
    store_records(records, root)
    out.write(_json_text({"imported": len(records)}))
    return 0


# ---- dispatcher ---------------------------------------------------------------------


def _add_common(sp):
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--alpha", type=int, default=1)
    sp.add_argument("--primes", type=int, default=24,
                    help="training prime count (or prime count for finite/check)")
    sp.add_argument("--verify-primes", type=int, default=12)
    sp.add_argument("--cutoff", type=int, default=10**6)
    sp.add_argument("--prec", type=int, default=53)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--cache-dir", default=None)
    sp.add_argument("--out", default=None, help="write output here (manifest beside it)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmzv",
        description="Colored multiple zeta values: q-sums, finite/symmetric evaluation, dimension tables.",
    )
    parser.add_argument("--version", action="version", version=f"cmzv {VERSION}")
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("qsum", help="evaluate harmonic q-sums on an m-grid against the predicted asymptotic")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--index", required=True, help='index as "k=2,1;e=0,1"')
    sp.add_argument("--m", required=True, help="comma-separated list of m values")
    _add_common(sp)

    sp = subs.add_parser("finite", help="residues of the truncated sum below each prime")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--index", required=True, help='"k=..;e=.." or congruence "k=..;f=.."')
    _add_common(sp)

    sp = subs.add_parser("sym", help="symmetric value with its T-polynomial diagnostics")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--index", required=True)
    _add_common(sp)

    sp = subs.add_parser("dim", help="dimension table with verified relation ledger")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--wmax", type=int, required=True)
    sp.add_argument("--height-bound", type=int, default=1000)
    sp.add_argument("--twist", type=int, default=1)
    sp.add_argument("--no-cache", action="store_true")
    _add_common(sp)

    sp = subs.add_parser("mtdim", help="motivic dimension by weight")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--wmax", type=int, required=True)
    _add_common(sp)

    sp = subs.add_parser("check", help="randomized per-prime identity suite (reversal, linear shuffle)")
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--wmax", type=int, default=4)
    _add_common(sp)

    sp = subs.add_parser("cache", help="cache administration")
    sp.add_argument("action", choices=("stat", "clear", "export", "import"))
    sp.add_argument("--file", default=None, help="bundle path for import")
    _add_common(sp)
    return parser


_HANDLERS = {
    "qsum": _cmd_qsum,
    "finite": _cmd_finite,
    "sym": _cmd_sym,
    "dim": _cmd_dim,
    "mtdim": _cmd_mtdim,
    "check": _cmd_check,
    "cache": _cmd_cache,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 2
    config = RunConfig(
        command=args.command,
        N=getattr(args, "N", 1),
        alpha=args.alpha,
        precision=args.prec,
        cutoff=args.cutoff,
        train_primes=args.primes,
        verify_primes=args.verify_primes,
        cache_dir=args.cache_dir,
        fmt=args.format,
        jobs=args.jobs,
        seed=args.seed,
    )
    out = _Out(args.out)
    start = time.time()
    try:
        code = _HANDLERS[args.command](args, config, out)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    invocation = {k: v for k, v in vars(args).items() if k != "out"}
    out.write_manifest(
        _manifest(config, time.time() - start, {"invocation": invocation})
    )
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
