"""Command-line front end.

Every artifact starts with the run configuration: JSON output is
``{"config": ..., "results": ...}``, CSV output starts with a
``# config: {...}`` line.  A ``--config`` file holds ``key=value`` lines that
are applied before the command-line flags, so flags win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass
from dataclasses import field as dc_field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .nf import UnsupportedFieldError, make_field, principal_ideal

STOCHASTIC = {"density-rmt", "density-family"}
EXIT_OK, EXIT_INVALID, EXIT_UNSUPPORTED = 0, 2, 3


@dataclass
class RunConfig:
    subcommand: str
    field: int = 1
    k: list[int] = dc_field(default_factory=list)
    level: int = 1
    u: float | None = None
    B: float | None = None
    X: float | None = None
    Y: float | None = None
    Q: float | None = None
    seed: int | None = None
    inputs: dict[str, str] = dc_field(default_factory=dict)
    out: str | None = None
    format: str = "json"
    options: dict = dc_field(default_factory=dict)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        return cls(**d)


def _weights(text: str | None) -> list[int]:
    if not text:
        return []
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def _element(F, text: str):
    """'a' or 'a,b' meaning a + b sqrt(d)."""
    parts = [Fraction(x) for x in text.split(",")]
    if len(parts) == 1:
        return F.element(parts[0])
    if len(parts) == 2:
        return F.element(*parts)
    raise ValueError(f"cannot read field element {text!r}")


def _num(x):
    if isinstance(x, Fraction):
        return float(x)
    return x


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lowzero", description="Low-lying zero numerics.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, fmt="json"):
        sp.add_argument("--format", choices=("csv", "json"), default=fmt)
        sp.add_argument("--out")
        sp.add_argument("--config", help="key=value file applied before the flags")
        sp.add_argument("--field", type=int, default=1, help="squarefree d, or 1 for Q")

    sp = sub.add_parser("kloosterman", help="Kloosterman sums and Weil ratios")
    common(sp, "csv")
    sp.add_argument("--alpha", default="1")
    sp.add_argument("--beta", default="1")
    sp.add_argument("--c", help="single modulus (a or a,b)")
    sp.add_argument("--max-norm", type=int, default=50)

    sp = sub.add_parser("bessel", help="J_nu(x) and the bound ratio")
    common(sp, "csv")
    sp.add_argument("--nu", type=int, required=True)
    sp.add_argument("--x", required=True, help="comma-separated arguments")

    sp = sub.add_parser("petersson", help="geometric side of the Petersson formula")
    common(sp, "csv")
    sp.add_argument("--k", required=True)
    sp.add_argument("--level", type=int, default=1)
    sp.add_argument("--B", type=float, default=1000)
    sp.add_argument("--alpha", default="1")
    sp.add_argument("--beta", default="1")

    sp = sub.add_parser("size", help="main term for the number of newforms")
    common(sp)
    sp.add_argument("--k", required=True)
    sp.add_argument("--level", type=int, default=1)
    sp.add_argument("--X", type=float)
    sp.add_argument("--Y", type=float)
    sp.add_argument("--B", type=float)

    sp = sub.add_parser("density-rmt", help="one-level statistic of a random matrix ensemble")
    common(sp, "csv")
    sp.add_argument("--kind", required=True, choices=("U", "SOeven", "SOodd", "Sp"))
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--u", type=float, default=1.0)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--chains", type=int, default=16)

    sp = sub.add_parser("density-family", help="average D over a synthetic family")
    common(sp)
    sp.add_argument("--mode", required=True, choices=("Orthogonal", "RSSymplectic"))
    sp.add_argument("--u", type=float, default=1.0)
    sp.add_argument("--family-size", type=int, default=2000)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--Q", type=float, default=10_000)
    sp.add_argument("--coeffs", help="prime_norm,lambda file for a single form checked alongside")
    sp.add_argument("--zeros", help="zero ordinates of that form")
    sp.add_argument("--k", default="12", help="weight of the file-backed form")
    sp.add_argument("--level", type=int, default=1)
    sp.add_argument("--R", type=float, help="R for the file-backed check")

    sp = sub.add_parser("explicit", help="D(f; phi) for one L-function")
    common(sp)
    sp.add_argument("--mode", default="HMF", choices=("HMF", "RS"))
    sp.add_argument("--k", required=True)
    sp.add_argument("--level", type=int, default=1)
    sp.add_argument("--k2")
    sp.add_argument("--level2", type=int, default=1)
    sp.add_argument("--delta", type=int, default=1, help="pole order for RS mode")
    sp.add_argument("--u", type=float, default=1.0)
    sp.add_argument("--R", type=float)
    sp.add_argument("--Q", type=float)
    sp.add_argument("--coeffs")
    sp.add_argument("--zeros")

    sp = sub.add_parser("delta-classify", help="pole order for a pair of form descriptors")
    common(sp)
    sp.add_argument("--pair", required=True, help="JSON file with two descriptors")

    sp = sub.add_parser("bounds", help="non-vanishing bounds at support u")
    common(sp)
    sp.add_argument("--u", type=float, required=True)
    return p


def _expand_config(argv: list[str]) -> list[str]:
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise ValueError("--config needs a path")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2 :]
    tokens = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {raw!r} is not key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        tokens += [f"--{key}", value]
    # config tokens go right after the subcommand so later flags override them
    return rest[:1] + tokens + rest[1:] if rest else tokens


def _config(args) -> RunConfig:
    cfg = RunConfig(subcommand=args.subcommand, field=args.field, format=args.format, out=args.out)
    for name in ("u", "B", "X", "Y", "Q", "seed"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if getattr(args, "k", None):
        cfg.k = _weights(args.k)
    if hasattr(args, "level"):
        cfg.level = args.level
    for name in ("coeffs", "zeros", "pair"):
        if getattr(args, name, None):
            cfg.inputs[name] = getattr(args, name)
    skip = set(asdict(cfg)) | {"subcommand", "config", "coeffs", "zeros", "pair", "format", "out", "field"}
    cfg.options = {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}
    return cfg


# ---------------------------------------------------------------------------
# subcommands; each returns (csv header, csv rows, trailer lines, json results)


def _run_kloosterman(args, cfg):
    from .kloosterman import KloostermanInput, kloosterman_nf, kloosterman_sweep, weil_ratio

    F = make_field(args.field)
    alpha, beta = _element(F, args.alpha), _element(F, args.beta)
    if args.c is not None:
        c = _element(F, args.c)
        inp = KloostermanInput(F, alpha, beta, c)
        val = kloosterman_nf(inp)
        rows = [(abs(int(c.norm())), str(c), val, weil_ratio(inp, val))]
    elif F.is_rational:
        rows = []
        for m in range(1, args.max_norm + 1):
            inp = KloostermanInput(F, alpha, beta, F.element(m))
            val = kloosterman_nf(inp)
            rows.append((m, str(m), val, weil_ratio(inp, val)))
    else:
        rows = [(n, str(c), v, r) for n, c, v, r in kloosterman_sweep(args.field, alpha, beta, args.max_norm)]
    keys = ["c_norm", "c", "value", "weil_ratio"]
    table = [(n, v, w) for n, _, v, w in rows]
    return ["c_norm", "value", "weil_ratio"], table, [], [dict(zip(keys, r)) for r in rows]


def _run_bessel(args, cfg):
    from .bessel import bessel_bound_ratio, bessel_j

    xs = [float(x) for x in args.x.split(",") if x.strip()]
    rows = []
    for x in xs:
        ratio = bessel_bound_ratio(args.nu + 1, x) if x > 0 else None
        rows.append((args.nu, x, bessel_j(args.nu, x), ratio))
    header = ["nu", "x", "value", "bound_ratio"]
    return header, rows, [], [dict(zip(header, r)) for r in rows]


def _level(F, n: int):
    if n < 1:
        raise ValueError("level must be a positive integer")
    return principal_ideal(F, F.element(n))


def _run_petersson(args, cfg):
    from .petersson import PeterssonParams, geometric_delta

    F = make_field(args.field)
    params = PeterssonParams(F, tuple(cfg.k), _level(F, args.level), B=args.B)
    res = geometric_delta(params, _element(F, args.alpha), _element(F, args.beta))
    header = ["c_norm", "kloosterman", "bessel", "term"]
    rows = [(t.c_norm, t.kloosterman, t.bessel, t.term) for t in res.terms]
    trailer = [
        f"diagonal={res.diagonal}",
        f"correction={res.correction!r}",
        f"total={res.value!r}",
        f"summation_order={res.metadata['summation_order']}",
    ]
    results = {
        "diagonal": res.diagonal,
        "correction": res.correction,
        "total": res.value,
        "metadata": res.metadata,
        "terms": [
            {"c_norm": t.c_norm, "c": str(t.c), "kloosterman": t.kloosterman, "bessel": t.bessel, "term": t.term}
            for t in res.terms
        ],
    }
    return header, rows, trailer, results


def _run_size(args, cfg):
    from .petersson import PeterssonParams, delta_prime_truncated, preset_xy, size_of_newspace_main

    F = make_field(args.field)
    level = _level(F, args.level)
    k = tuple(cfg.k)
    out = {"main_term": size_of_newspace_main(F, k, level)}
    if args.B is not None:
        X, Y = preset_xy(k, level.norm)
        X = args.X if args.X is not None else X
        Y = args.Y if args.Y is not None else Y
        dp = delta_prime_truncated(PeterssonParams(F, k, level, B=args.B, X=X, Y=Y), _level(F, 1))
        out.update({"delta_prime": dp.value, "X": X, "Y": Y, "unevaluated_remainder": dp.remainder})
    header = list(out)
    return header, [tuple(out.values())], [], out


def _run_density_rmt(args, cfg):
    from .rmt import run_density
    from .testfn import integral_against_kernel

    batches, mean, err = run_density(args.kind, args.N, args.u, args.seed, args.samples, args.chains)
    pred = float(integral_against_kernel(args.u, args.kind))
    header = ["kind", "N", "u", "mean", "stderr", "prediction"]
    row = (args.kind, args.N, args.u, mean, err, pred)
    results = dict(zip(header, row), acceptance_rate=batches.acceptance_rate)
    return header, [row], [f"acceptance_rate={batches.acceptance_rate!r}"], results


def _run_density_family(args, cfg):
    from .explicit_formula import family_average

    rep = family_average(args.mode, args.family_size, args.u, args.field, args.seed, args.Q)
    d = rep.as_dict()
    trailer = []
    if args.coeffs or args.zeros:
        if not (args.coeffs and args.zeros):
            raise ValueError("--coeffs and --zeros go together")
        check = _data_check(args, cfg)
        d["data_check"] = check
        trailer = [f"{k}={v!r}" for k, v in check.items()]
    table = {k: v for k, v in d.items() if k != "data_check"}
    return list(table), [tuple(table.values())], trailer, d


def _data_check(args, cfg) -> dict:
    from .explicit_formula import LDescriptor, read_coefficients, read_zeros, two_sided
    from .testfn import FejerTestFunction

    F = make_field(args.field)
    if not F.is_rational:
        raise UnsupportedFieldError("file-backed two-sided checks are implemented over Q only")
    desc = LDescriptor.hmf(F, cfg.k, args.level)
    R = args.R if args.R is not None else float(args.level * cfg.k[0] ** 2)
    zeros = read_zeros(args.zeros) if args.zeros else None
    out = two_sided(desc, FejerTestFunction(args.u), R, read_coefficients(args.coeffs).table, zeros)
    return {"R": R, **out}


def _run_explicit(args, cfg):
    from .explicit_formula import (
        LDescriptor,
        ZeroCoefficients,
        conductor_term,
        one_level_D,
        prime_sum,
        read_coefficients,
        read_zeros,
        two_sided,
        zeros_side,
    )
    from .testfn import FejerTestFunction

    F = make_field(args.field)
    if args.mode == "HMF":
        desc = LDescriptor.hmf(F, cfg.k, args.level)
        log_c = math.log(args.level) + 2 * sum(math.log(x) for x in cfg.k)
    else:
        k2 = _weights(args.k2) or cfg.k
        desc = LDescriptor.rs(F, cfg.k, args.level, k2, args.level2, args.delta)
        log_c = 2 * math.log(args.level * args.level2) + sum(
            2 * math.log(abs(a - b) + 1) + 2 * math.log(a + b) for a, b in zip(cfg.k, k2)
        )
    R = args.R if args.R is not None else math.exp(log_c)
    phi = FejerTestFunction(args.u)
    Q = args.Q if args.Q is not None else math.ceil(R**args.u)
    source = read_coefficients(args.coeffs) if args.coeffs else ZeroCoefficients()
    out = {
        "R": R,
        "Q": Q,
        "conductor_term": conductor_term(desc, phi, R),
        "prime_sum": prime_sum(desc, phi, R, source, F, Q),
        "D": one_level_D(desc, phi, R, source, F, Q),
    }
    if args.coeffs and F.is_rational:
        check = two_sided(
            desc, phi, R, source.table, read_zeros(args.zeros) if args.zeros else None,
            poles=args.delta if args.mode == "RS" else 0,
        )
        out.update(check)
    elif args.zeros:
        # ordinates come in +-pairs
        out["zeros_side"] = 2 * zeros_side(read_zeros(args.zeros), phi, R)
    return list(out), [tuple(out.values())], [], out


def _run_delta_classify(args, cfg):
    from .classifier import classify_pair, load_pair

    f, g = load_pair(args.pair)
    delta, label = classify_pair(f, g)
    out = {"f": f.id, "g": g.id, "delta": delta, "case": label}
    return list(out), [tuple(out.values())], [], out


def _run_bounds(args, cfg):
    from .explicit_formula import nonvanishing_bounds

    u = Fraction(str(args.u)).limit_denominator(10**6) if args.u > 0 else args.u
    b = nonvanishing_bounds(u).as_dict()
    out = {k: float(v) for k, v in b.items()}
    return list(out), [tuple(out.values())], [], out


RUNNERS = {
    "kloosterman": _run_kloosterman,
    "bessel": _run_bessel,
    "petersson": _run_petersson,
    "size": _run_size,
    "density-rmt": _run_density_rmt,
    "density-family": _run_density_family,
    "explicit": _run_explicit,
    "delta-classify": _run_delta_classify,
    "bounds": _run_bounds,
}


def _render(cfg: RunConfig, header, rows, trailer, results) -> str:
    if cfg.format == "json":
        return json.dumps({"config": asdict(cfg), "results": results}, indent=2, default=_num) + "\n"
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(asdict(cfg), default=_num) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in r])
    for line in trailer:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        argv = _expand_config(argv)
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INVALID
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    if args.subcommand in STOCHASTIC and args.seed is None:
        print(f"error: {args.subcommand} needs --seed", file=sys.stderr)
        return EXIT_INVALID
    try:
        cfg = _config(args)
        text = _render(cfg, *RUNNERS[args.subcommand](args, cfg))
    except UnsupportedFieldError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ValueError, OverflowError, OSError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())
