"""``overasym`` command-line front end.

Exit codes: 0 success, 1 a verification verdict was false, 2 usage error,
3 domain/precondition/configuration error, 4 certification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import asymptotics as asy
from . import circle, exact, verify
from .errors import CertificationError, ConfigurationError, OverasymError
from .numerics import MIN_BITS, default_bits, format_mpf

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_CERTIFICATION = 4

COMMANDS = ("table", "rigorous", "coeff", "coeff-diff", "expand", "diff-expand",
            "verify", "threshold")

STATEMENTS = {
    "thm1.1": verify.Statement.THM_1_1,
    "thm1.2": verify.Statement.THM_1_2,
    "lemma2.1": verify.Statement.LEMMA_2_1,
    "lemma2.2": verify.Statement.LEMMA_2_2,
    "wxz": verify.Statement.WXZ_UPPER,
    "positivity": verify.Statement.WXZ_POSITIVITY,
    "corollary": verify.Statement.COROLLARY_RATIO,
}


class UsageError(ConfigurationError):
    """Malformed or missing command-line input."""


@dataclass
class RunConfig:
    command: str
    params: dict[str, int | None] = field(default_factory=dict)
    bits: int | None = None
    format: str = "text"
    output_path: Path | None = None
    cache_dir: Path | None = None
    statement: str | None = None
    n_list: list[int] | None = None
    method: str = "theta"
    timing: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.bits is not None and self.bits < MIN_BITS:
            raise UsageError(f"--bits {self.bits} is below the {MIN_BITS}-bit floor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="overasym",
                                     description="Overpartition asymptotics and their verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("text", "csv", "json")):
        p.add_argument("--format", choices=formats, default="text")
        p.add_argument("--output", type=Path, help="write output to this file instead of stdout")
        p.add_argument("--bits", type=int, help="precision override in bits")
        p.add_argument("--cache-dir", type=Path)
        return p

    p = common(sub.add_parser("table", help="exact values of the overpartition function"))
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--method", choices=("theta", "oracle"), default="theta")

    p = common(sub.add_parser("rigorous", help="certified p̄(n) from the truncated circle-method series"))
    p.add_argument("--n", type=int, required=True)

    p = common(sub.add_parser("coeff", help="exact coefficient A_k(t)"), ("text", "json"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int, required=True)

    p = common(sub.add_parser("coeff-diff", help="exact coefficient A_j(t, r)"), ("text", "json"))
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--t", type=int, required=True)

    p = common(sub.add_parser("expand", help="expansion of p̄(n+k) with its bound"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--N", type=int, required=True)

    p = common(sub.add_parser("diff-expand", help="expansion of Δ_j^r p̄(n-j) with its bound"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--N", type=int, required=True)

    p = common(sub.add_parser("verify", help="check a statement against exact values"))
    p.add_argument("--statement", choices=sorted(STATEMENTS), required=True)
    for name in ("N", "k", "r", "j", "m"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--from", dest="n_from", type=int)
    p.add_argument("--to", dest="n_to", type=int)
    p.add_argument("--span", type=int, help="check n_from .. n_from + span")
    p.add_argument("--stride", type=int)
    p.add_argument("--n-list", type=lambda s: [int(x) for x in s.split(",")])
    p.add_argument("--timing", action="store_true", help="include runtime_ms in JSON output")

    p = common(sub.add_parser("threshold", help="empirical positivity threshold of Δ_j^r p̄"),
               ("text", "json"))
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--scan-max", type=int, required=True)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    keys = ("n_max", "n", "k", "t", "j", "r", "N", "m", "n_from", "n_to", "span", "stride", "scan_max")
    params = {key: getattr(args, key) for key in keys if hasattr(args, key)}
    return RunConfig(
        command=args.command, params=params, bits=args.bits, format=args.format,
        output_path=args.output, cache_dir=args.cache_dir,
        statement=getattr(args, "statement", None), n_list=getattr(args, "n_list", None),
        method=getattr(args, "method", "theta"), timing=getattr(args, "timing", False))


# ------------------------------------------------------------------ commands


def _need(config: RunConfig, *names: str) -> list[int]:
    missing = [n for n in names if config.params.get(n) is None]
    if missing:
        raise UsageError("missing flag(s): " + ", ".join("--" + m for m in missing))
    return [config.params[n] for n in names]


def _cmd_table(config: RunConfig) -> tuple[int, str]:
    (n_max,) = _need(config, "n_max")
    method = exact.Method.THETA if config.method == "theta" else exact.Method.ORACLE
    cache_dir = config.cache_dir or exact.default_cache_dir()
    table = exact.cached_table(n_max, method, cache_dir)
    if config.format == "csv":
        return EXIT_OK, exact.table_csv(table)
    if config.format == "json":
        data = {"n_max": table.n_max, "method": table.method.value,
                "values": [str(v) for v in table.values]}
        return EXIT_OK, json.dumps(data, indent=2) + "\n"
    return EXIT_OK, "".join(f"{n} {v}\n" for n, v in enumerate(table.values))


def _cmd_rigorous(config: RunConfig) -> tuple[int, str]:
    (n,) = _need(config, "n")
    try:
        cert = circle.certify(n, config.bits)
    except CertificationError as exc:
        bits = config.bits or default_bits(n)
        msg = f"certification failed for n={n}: best bound {format_mpf(exc.best_bound, 64)}@{bits}b"
        if config.format == "csv":
            return EXIT_CERTIFICATION, ("n,N,value,engel_bound,certified\n"
                                        f"{n},,,{format_mpf(exc.best_bound, bits)},false\n")
        if config.format == "json":
            return EXIT_CERTIFICATION, json.dumps(
                {"n": n, "certified": False, "best_bound": format_mpf(exc.best_bound, bits),
                 "precision_bits": bits}, indent=2) + "\n"
        return EXIT_CERTIFICATION, msg + "\n"
    if config.format == "csv":
        return EXIT_OK, ("n,N,value,engel_bound,certified\n"
                         f"{n},{cert.N},{cert.value},"
                         f"{format_mpf(cert.engel_bound.value, cert.precision_bits)},true\n")
    if config.format == "json":
        return EXIT_OK, json.dumps(
            {"n": n, "N": cert.N, "value": str(cert.value), "certified": True,
             "engel_bound": format_mpf(cert.engel_bound.value, cert.precision_bits),
             "precision_bits": cert.precision_bits}, indent=2) + "\n"
    return EXIT_OK, f"{cert.value}\nN={cert.N} bound={cert.engel_bound}\n"


def _poly_out(config: RunConfig, poly, **key) -> tuple[int, str]:
    if config.format == "json":
        return EXIT_OK, json.dumps({**key, "terms": poly.to_json()}, indent=2) + "\n"
    return EXIT_OK, f"{poly}\n"


def _cmd_coeff(config: RunConfig) -> tuple[int, str]:
    k, t = _need(config, "k", "t")
    return _poly_out(config, asy.coeff_A(k, t), k=k, t=t)


def _cmd_coeff_diff(config: RunConfig) -> tuple[int, str]:
    j, r, t = _need(config, "j", "r", "t")
    return _poly_out(config, asy.coeff_A_diff(j, t, r), j=j, r=r, t=t)


def _expansion_out(config: RunConfig, e: asy.Expansion, head: dict) -> tuple[int, str]:
    bits = e.main.bits
    if config.format == "csv":
        cols = list(head) + ["main", "bound"]
        vals = [str(v) for v in head.values()] + [format_mpf(e.main.value, bits),
                                                 format_mpf(e.bound.value, bits)]
        return EXIT_OK, ",".join(cols) + "\n" + ",".join(vals) + "\n"
    if config.format == "json":
        data = {**head, "main": format_mpf(e.main.value, bits),
                "bound": format_mpf(e.bound.value, bits), "precision_bits": bits}
        return EXIT_OK, json.dumps(data, indent=2) + "\n"
    return EXIT_OK, f"main  {e.main}\nbound {e.bound}\n"


def _cmd_expand(config: RunConfig) -> tuple[int, str]:
    n, k, N = _need(config, "n", "k", "N")
    return _expansion_out(config, asy.expansion_value(n, k, N, config.bits), {"n": n, "k": k, "N": N})


def _cmd_diff_expand(config: RunConfig) -> tuple[int, str]:
    n, j, r, N = _need(config, "n", "j", "r", "N")
    e = asy.expansion_diff_value(n, j, r, N, config.bits)
    return _expansion_out(config, e, {"n": n, "j": j, "r": r, "N": N})


def _range(config: RunConfig, default_from: int | None) -> tuple[int | None, int | None]:
    n_from = config.params.get("n_from")
    n_to = config.params.get("n_to")
    span = config.params.get("span")
    if span is not None:
        base = n_from if n_from is not None else default_from
        if base is None:
            raise UsageError("--span needs --from for this statement")
        n_to = base + span
    return n_from, n_to


def _cmd_verify(config: RunConfig) -> tuple[int, str]:
    statement = STATEMENTS[config.statement]
    p = config.params
    stride = p.get("stride")
    S = verify.Statement
    if statement is S.THM_1_1:
        N, k = _need(config, "N", "k")
        n_from, n_to = _range(config, asy.n_min(N, k))
        report = verify.verify_theorem_1_1(N, k, n_from, n_to, stride, config.bits)
    elif statement is S.THM_1_2:
        N, r, j = _need(config, "N", "r", "j")
        n_from, n_to = _range(config, asy.n_min_diff(N, r, j))
        report = verify.verify_theorem_1_2(N, r, j, n_from, n_to, stride, config.bits)
    elif statement is S.LEMMA_2_1:
        (m,) = _need(config, "m")
        report = verify.verify_lemma_2_1(m, precision_bits=config.bits or 128)
    elif statement is S.LEMMA_2_2:
        m, k = _need(config, "m", "k")
        n_from, n_to = _range(config, asy.threshold_N0(m) if m >= 1 else None)
        report = verify.verify_lemma_2_2(m, k, n_from, n_to, stride, config.bits)
    elif statement is S.WXZ_UPPER:
        (r,) = _need(config, "r")
        n_from, n_to = _range(config, r)
        report = verify.verify_wxz(r, n_from, n_to if n_to is not None else 5000,
                                   stride if stride is not None else 1, config.bits)
    elif statement is S.WXZ_POSITIVITY:
        r, j = _need(config, "r", "j")
        n_from, n_to = _range(config, r * j)
        report = verify.positivity_report(r, j, n_from if n_from is not None else r * j,
                                          n_to if n_to is not None else 5000)
    else:
        r, j = _need(config, "r", "j")
        if not config.n_list:
            raise UsageError("--n-list is required for the corollary statement")
        report = verify.corollary_ratio(r, j, config.n_list, config.bits)

    status = EXIT_OK if report.verdict else EXIT_FALSE
    if config.format == "csv":
        return status, report.to_csv()
    if config.format == "json":
        return status, report.to_json(include_runtime=config.timing) + "\n"
    lines = [f"statement {report.statement_id.value} "
             + " ".join(f"{k}={v}" for k, v in report.parameters.items()),
             f"records {len(report.records)}  failures {len(report.failures())}  "
             f"precision {report.precision_bits}b"]
    for key, value in report.summary.items():
        lines.append(f"{key} {value}")
    for rec in report.failures()[:10]:
        lines.append(f"FAIL n={rec.n} remainder={format_mpf(rec.remainder, 64)} "
                     f"bound={format_mpf(rec.bound, 64)}")
    lines.append(f"verdict {'PASS' if report.verdict else 'FAIL'}")
    return status, "\n".join(lines) + "\n"


def _cmd_threshold(config: RunConfig) -> tuple[int, str]:
    r, j, scan_max = _need(config, "r", "j", "scan_max")
    n0 = verify.positivity_threshold(r, j, scan_max)
    if config.format == "json":
        return EXIT_OK, json.dumps({"r": r, "j": j, "scan_max": scan_max, "n0": n0,
                                    "empirical": True}, indent=2) + "\n"
    shown = "none observed" if n0 is None else str(n0)
    return EXIT_OK, f"{shown} (empirical, scanned up to {scan_max})\n"


HANDLERS = {
    "table": _cmd_table, "rigorous": _cmd_rigorous, "coeff": _cmd_coeff,
    "coeff-diff": _cmd_coeff_diff, "expand": _cmd_expand, "diff-expand": _cmd_diff_expand,
    "verify": _cmd_verify, "threshold": _cmd_threshold,
}


def run(config: RunConfig) -> tuple[int, str]:
    """Dispatch one command; return the exit status and the text it emits."""
    return HANDLERS[config.command](config)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        status, text = run(config)
    except UsageError as exc:
        print(f"overasym: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OverasymError as exc:
        print(f"overasym: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if config.output_path is not None:
        config.output_path.write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
