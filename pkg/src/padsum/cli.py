"""Batch command-line front end.

Commands: tables, verify {finite|telescope|padic|ode|all}, seq,
seq-compare, cache {info|clear}.  All numbers are exact (integers or p/q);
output is deterministic for a fixed configuration and seed, so repeated
runs are byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .fps import check_first_order_ode, check_second_order_ode
from .kernel import factorial
from .padic import Prime, expand
from .poly import GenPoly, RatPoly
from .series import (
    SeriesSpec,
    TelescopeSpec,
    VerificationError,
    finite_identity_sweep,
    padic_sum_verify,
    random_telescope_spec,
    series_error_profile,
    telescope_sweep,
)
from .tables import (
    CrossCheckError,
    TableSet,
    bundle_from_json,
    bundle_to_json,
    int_pairs,
    sequence_slice,
    sequence_start_index,
    SEQUENCE_IDS,
)

ARTIFACT_VERSION = "1"

FINITE_X_SET = (
    Fraction(-3),
    Fraction(-2),
    Fraction(-1),
    Fraction(1),
    Fraction(2),
    Fraction(3),
    Fraction(1, 2),
    Fraction(-2, 3),
)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


class BFileError(ValueError):
    """A reference b-file could not be parsed."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def parse_rational(text: str) -> Fraction:
    """Exact rational literal: 'p' or 'p/q'.  Decimal floats are refused."""
    if not _RATIONAL_RE.match(text):
        raise argparse.ArgumentTypeError(
            f"exact rational 'p' or 'p/q' required, got {text!r}"
        )
    value = Fraction(text)
    return value


def format_rational(value: Fraction) -> str:
    return str(value)


def parse_eps(text: str) -> int:
    if text in ("1", "+1"):
        return 1
    if text == "-1":
        return -1
    raise argparse.ArgumentTypeError(f"eps must be +1 or -1, got {text!r}")


def parse_prime_list(text: str) -> tuple[Prime, ...]:
    try:
        return tuple(Prime(int(part)) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_rational_list(text: str) -> tuple[Fraction, ...]:
    return tuple(parse_rational(part) for part in text.split(","))


def default_cache_dir() -> Path:
    env = os.environ.get("PADSUM_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "padsum"


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _cache_file(cache_dir: Path, kmax: int, eps: int) -> Path:
    key_src = f"padsum:v{ARTIFACT_VERSION}:tables:kmax={kmax}:eps={eps}"
    key = hashlib.sha256(key_src.encode()).hexdigest()[:16]
    return cache_dir / f"tables_{key}.json"


def load_or_build_bundle(kmax: int, eps: int, cache_dir: Path, use_cache: bool) -> dict:
    """Table bundle for (kmax, eps), from the on-disk cache when warm.

    All cross-checks run on a cold build; the cache key includes the
    artifact version, so stale layouts can never be picked up.
    """
    cache_file = _cache_file(cache_dir, kmax, eps)
    if use_cache and cache_file.exists():
        return json.loads(cache_file.read_text())
    tables = TableSet.build(kmax, eps, cross_check=True)
    pairs = int_pairs(kmax, cross_check=True) if kmax >= 1 else None
    bundle = bundle_to_json(tables, pairs)
    if use_cache:
        cache_dir.mkdir(parents=True, exist_ok=True)
        cache_file.write_text(_dumps(bundle))
    return bundle


def _render_tables_text(bundle: dict) -> str:
    eps = bundle["eps"]
    kmax = bundle["kmax"]
    lines = [f"# tables for eps = {eps:+d}, kmax = {kmax}"]
    if bundle["u"]:
        lines.append("")
        lines.append("k u_k v_k")
        for i, (u, v) in enumerate(zip(bundle["u"], bundle["v"]), 1):
            lines.append(f"{i} {u} {v}")
    if bundle["U"]:
        lines.append("")
        for i, coeffs in enumerate(bundle["U"], 1):
            lines.append(f"U_{i}(x) = {RatPoly(coeffs).render('x')}")
        for i, coeffs in enumerate(bundle["V"], 1):
            lines.append(f"V_{i}(x) = {RatPoly(coeffs).render('x')}")
    lines.append("")
    for k, row in enumerate(bundle["A"]):
        poly = GenPoly(eps, [RatPoly(c) for c in row])
        lines.append(f"A_{k}(n;x) = {poly.render()}")
    return "\n".join(lines) + "\n"


def _render_tables_csv(bundle: dict) -> str:
    lines = ["k,u,v"]
    for i, (u, v) in enumerate(zip(bundle["u"], bundle["v"]), 1):
        lines.append(f"{i},{u},{v}")
    return "\n".join(lines) + "\n"


def cmd_tables(args) -> int:
    cache_dir = Path(args.cache_dir) if args.cache_dir else default_cache_dir()
    bundle = load_or_build_bundle(args.kmax, args.eps, cache_dir, not args.no_cache)
    if args.format == "json":
        content = _dumps(bundle)
        ext = "json"
    elif args.format == "csv":
        content = _render_tables_csv(bundle)
        ext = "csv"
    else:
        content = _render_tables_text(bundle)
        ext = "txt"
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    sign = "p1" if args.eps > 0 else "m1"
    path = out_dir / f"tables_k{args.kmax}_{sign}.{ext}"
    path.write_text(content)
    print(path)
    return 0


def _suite_finite(kmax: int, nmax: int) -> tuple[bool, list[str], list[dict]]:
    checks = 0
    for eps in (1, -1):
        tables = TableSet.build(kmax, eps)
        for k in range(1, kmax + 1):
            for x in FINITE_X_SET:
                try:
                    finite_identity_sweep(k, eps, x, nmax, tables)
                except VerificationError as exc:
                    line = f"FAIL finite: {exc}"
                    return False, [line], [{"check": "finite", "verdict": "FAIL", "detail": str(exc)}]
                checks += nmax
    line = (
        f"PASS finite: zero residual on {checks} identity checks"
        f" (k<={kmax}, eps=+-1, {len(FINITE_X_SET)} x values, n<={nmax})"
    )
    return True, [line], [{"check": "finite", "verdict": "PASS", "checks": checks}]


def _named_telescope_specs() -> list[tuple[str, TelescopeSpec]]:
    # sum n! * n (aux = 1) and sum n! * ((n+1)^2 - n) (aux = n), both at x = 1
    return [
        (
            "factorial-times-n",
            TelescopeSpec(
                mu=(1,), nu=(0,), lam=(1,), alpha=1, beta=0, eps=1,
                x=Fraction(1), aux=RatPoly.one(),
            ),
        ),
        (
            "weighted-square-step",
            TelescopeSpec(
                mu=(1,), nu=(0,), lam=(1,), alpha=1, beta=0, eps=1,
                x=Fraction(1), aux=RatPoly.monomial(1),
            ),
        ),
    ]


def _suite_telescope(count: int, seed: int, nmax: int) -> tuple[bool, list[str], list[dict]]:
    rng = random.Random(seed)
    specs = [(f"random-{i}", random_telescope_spec(rng)) for i in range(count)]
    specs.extend(_named_telescope_specs())
    for name, spec in specs:
        try:
            telescope_sweep(spec, nmax)
        except VerificationError as exc:
            line = f"FAIL telescope[{name}]: {exc}"
            return False, [line], [{"check": "telescope", "verdict": "FAIL", "detail": str(exc)}]
    line = (
        f"PASS telescope: exact telescoping for {count} random specs"
        f" (seed {seed}) + {len(_named_telescope_specs())} named instances, N<={nmax}"
    )
    return True, [line], [{"check": "telescope", "verdict": "PASS", "specs": len(specs)}]


def _suite_padic(
    kmax: int, primes: tuple[Prime, ...], nmax: int, x_values: tuple[Fraction, ...],
    precision: int,
) -> tuple[bool, list[str], list[dict]]:
    reports: list[dict] = []
    failures: list[str] = []
    passed = rejected = total = 0
    for eps in (1, -1):
        tables = TableSet.build(kmax, eps)
        for k in range(1, kmax + 1):
            for x in x_values:
                spec = SeriesSpec(eps=eps, x=x, k=k)
                claimed = spec.claimed_sum(tables)
                profile = series_error_profile(spec, claimed, nmax, tables)
                perturbed = profile.shifted_claim(1)
                for p in primes:
                    total += 1
                    verdict = padic_sum_verify(spec, claimed, p, nmax, profile=profile)
                    wrong = padic_sum_verify(spec, claimed + 1, p, nmax, profile=perturbed)
                    params = {"k": k, "eps": eps, "x": str(x)}
                    report = verdict.report(params)
                    report["claimed"] = str(claimed)
                    report["claimed_expansion"] = expand(claimed, p, precision).render()
                    report["perturbed_verdict"] = "FAIL" if not wrong.passed else "PASS"
                    reports.append(report)
                    if verdict.passed:
                        passed += 1
                    else:
                        failures.append(
                            f"FAIL padic: claim {claimed} for k={k} eps={eps:+d} x={x}"
                            f" p={p} violated at N={verdict.first_violation}"
                        )
                    if not wrong.passed:
                        rejected += 1
                    else:
                        failures.append(
                            f"FAIL padic: perturbed claim {claimed + 1} for k={k}"
                            f" eps={eps:+d} x={x} p={p} was not rejected"
                        )
    ok = not failures
    lines = failures or [
        f"PASS padic: {passed}/{total} claims verified, {rejected}/{total}"
        f" perturbations rejected (k<={kmax}, x in {{{','.join(map(str, x_values))}}},"
        f" p in {{{','.join(str(p) for p in primes)}}}, N<={nmax})"
    ]
    return ok, lines, reports


def _padic_single_claim(args) -> tuple[bool, list[str], list[dict], list[str]]:
    spec = SeriesSpec(eps=args.eps, x=args.x, k=args.k)
    tables = TableSet.build(args.k, args.eps)
    claimed = args.claim
    profile = series_error_profile(spec, claimed, args.nmax, tables)
    lines: list[str] = []
    reports: list[dict] = []
    csv_rows = ["N,partial,valuation"]
    ok = True
    for p in args.primes:
        verdict = padic_sum_verify(spec, claimed, p, args.nmax, profile=profile)
        params = {"k": args.k, "eps": args.eps, "x": str(args.x)}
        report = verdict.report(params)
        report["claimed"] = str(claimed)
        report["claimed_expansion"] = expand(claimed, p, args.precision).render()
        reports.append(report)
        if verdict.passed:
            lines.append(f"PASS padic: claim {claimed} holds to N={args.nmax} at p={p}")
        else:
            ok = False
            lines.append(
                f"FAIL padic: claim {claimed} violated at N={verdict.first_violation} (p={p})"
            )
        for idx, v in enumerate(verdict.valuations):
            partial = profile.errors[idx] + claimed
            csv_rows.append(f"{idx + 1}/p={p},{partial},{v}")
    return ok, lines, reports, csv_rows


def _suite_ode(nmin: int, nmax: int) -> tuple[bool, list[str], list[dict]]:
    for order in range(nmin, nmax + 1):
        first = check_first_order_ode(order)
        if not first.ok:
            line = f"FAIL ode: first-order residual at order {order}, degree {first.bad_degree}"
            return False, [line], [first.report("ode-first", {"order": order})]
        second = check_second_order_ode(order)
        if not second.ok:
            line = f"FAIL ode: second-order residual at order {order}, degree {second.bad_degree}"
            return False, [line], [second.report("ode-second", {"order": order})]
    line = (
        f"PASS ode: both residuals vanish through the stated degrees for"
        f" orders {nmin}..{nmax}; first-order artifact equals (N+1)!"
    )
    return True, [line], [{"check": "ode", "verdict": "PASS", "orders": [nmin, nmax]}]


def cmd_verify(args) -> int:
    ok = True
    lines: list[str] = []
    reports: list[dict] = []
    csv_rows: list[str] | None = None

    if args.suite == "padic" and args.claim is not None:
        ok, lines, reports, csv_rows = _padic_single_claim(args)
    else:
        if args.suite in ("finite", "all"):
            kmax = args.kmax if args.suite == "finite" else 15
            nmax = args.nmax if args.suite == "finite" else 25
            sub_ok, sub_lines, sub_reports = _suite_finite(kmax, nmax)
            ok &= sub_ok
            lines += sub_lines
            reports += sub_reports
        if args.suite in ("telescope", "all"):
            nmax = args.nmax if args.suite == "telescope" else 15
            sub_ok, sub_lines, sub_reports = _suite_telescope(args.count, args.seed, nmax)
            ok &= sub_ok
            lines += sub_lines
            reports += sub_reports
        if args.suite in ("padic", "all"):
            kmax = args.kmax if args.suite == "padic" else 8
            nmax = args.nmax if args.suite == "padic" else 200
            sub_ok, sub_lines, sub_reports = _suite_padic(
                kmax, args.primes, nmax, args.x_values, args.precision
            )
            ok &= sub_ok
            lines += sub_lines
            reports += sub_reports
        if args.suite in ("ode", "all"):
            nmax = args.nmax if args.suite == "ode" else 50
            sub_ok, sub_lines, sub_reports = _suite_ode(3, nmax)
            ok &= sub_ok
            lines += sub_lines
            reports += sub_reports

    if args.format == "json":
        print(_dumps(reports), end="")
    elif args.format == "csv" and csv_rows is not None:
        print("\n".join(csv_rows))
    else:
        for line in lines:
            print(line)
    return 0 if ok else 1


def cmd_seq(args) -> int:
    values = sequence_slice(args.id, args.kmax)
    start = sequence_start_index(args.id)
    if args.format == "json":
        content = _dumps({"id": args.id, "start": start, "values": values})
    elif args.format == "text":
        content = ", ".join(str(v) for v in values) + "\n"
    else:
        content = "".join(f"{start + i} {v}\n" for i, v in enumerate(values))
    if args.out and args.out != "-":
        Path(args.out).write_text(content)
        print(args.out)
    else:
        print(content, end="")
    return 0


def parse_bfile(text: str) -> list[tuple[int, int]]:
    """Parse 'index value' lines; blank lines and #-comments are skipped.

    Malformed lines and non-increasing indices are reported with their line
    number.
    """
    entries: list[tuple[int, int]] = []
    last_index: int | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise BFileError(lineno, f"expected 'index value', got {raw!r}")
        try:
            index, value = int(parts[0]), int(parts[1])
        except ValueError:
            raise BFileError(lineno, f"non-integer entry in {raw!r}") from None
        if last_index is not None and index <= last_index:
            raise BFileError(lineno, f"indices must be strictly increasing, got {index}")
        entries.append((index, value))
        last_index = index
    return entries


def cmd_seq_compare(args) -> int:
    try:
        reference = parse_bfile(Path(args.bfile).read_text())
    except BFileError as exc:
        print(f"malformed b-file {args.bfile}: {exc}", file=sys.stderr)
        return 2
    ours = sequence_slice(args.id, args.kmax)
    compared = min(len(ours), len(reference))
    if compared == 0:
        print("nothing to compare (empty b-file or empty sequence)", file=sys.stderr)
        return 2
    for pos in range(compared):
        ref_index, ref_value = reference[pos]
        if abs(ours[pos]) != abs(ref_value):
            print(
                f"MISMATCH at position {pos} (b-file index {ref_index}):"
                f" ours={ours[pos]}, reference={ref_value}"
            )
            return 1
    print(f"MATCH: {compared} terms agree up to sign with {args.bfile}")
    return 0


def cmd_cache(args) -> int:
    cache_dir = Path(args.cache_dir) if args.cache_dir else default_cache_dir()
    files = sorted(cache_dir.glob("tables_*.json")) if cache_dir.exists() else []
    if args.action == "info":
        total = sum(f.stat().st_size for f in files)
        print(f"cache directory: {cache_dir}")
        print(f"table files: {len(files)}")
        print(f"total bytes: {total}")
        return 0
    for f in files:
        f.unlink()
    print(f"removed {len(files)} cached table file(s) from {cache_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padsum",
        description=(
            "Exact tables and verification for p-adic factorial series:"
            " generating polynomials, correction/integer-pair tables,"
            " telescoping identities and valuation checks."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_tables = sub.add_parser("tables", help="generate and export the tables")
    p_tables.add_argument("--kmax", type=int, required=True)
    p_tables.add_argument("--eps", type=parse_eps, default=1)
    p_tables.add_argument("--format", choices=("json", "text", "csv"), default="text")
    p_tables.add_argument("--out", default=".")
    p_tables.add_argument("--cache-dir", default=None)
    p_tables.add_argument("--no-cache", action="store_true")
    p_tables.set_defaults(func=cmd_tables)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", choices=("finite", "telescope", "padic", "ode", "all"))
    p_verify.add_argument("--kmax", type=int, default=None)
    p_verify.add_argument("--nmax", type=int, default=None)
    p_verify.add_argument("--count", type=int, default=20, help="random telescoping specs")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--primes", type=parse_prime_list, default=parse_prime_list("2,3,5,7,11"))
    p_verify.add_argument("--x-values", type=parse_rational_list, default=parse_rational_list("1,-1,2"))
    p_verify.add_argument("--claim", type=parse_rational, default=None,
                          help="verify a single claimed sum instead of the grid")
    p_verify.add_argument("--k", type=int, default=1, help="series power for --claim mode")
    p_verify.add_argument("--eps", type=parse_eps, default=1)
    p_verify.add_argument("--x", type=parse_rational, default=Fraction(1))
    p_verify.add_argument("--precision", type=int, default=16,
                          help="digits shown for p-adic expansions in reports")
    p_verify.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p_verify.set_defaults(func=cmd_verify)

    p_seq = sub.add_parser("seq", help="emit a named integer sequence")
    p_seq.add_argument("id", choices=sorted(SEQUENCE_IDS))
    p_seq.add_argument("--kmax", type=int, default=10)
    p_seq.add_argument("--format", choices=("bfile", "text", "json"), default="bfile")
    p_seq.add_argument("--out", default="-")
    p_seq.set_defaults(func=cmd_seq)

    p_cmp = sub.add_parser("seq-compare", help="compare a sequence against a local b-file")
    p_cmp.add_argument("id", choices=sorted(SEQUENCE_IDS))
    p_cmp.add_argument("--kmax", type=int, default=10)
    p_cmp.add_argument("--bfile", required=True)
    p_cmp.set_defaults(func=cmd_seq_compare)

    p_cache = sub.add_parser("cache", help="inspect or clear the table cache")
    p_cache.add_argument("action", choices=("info", "clear"))
    p_cache.add_argument("--cache-dir", default=None)
    p_cache.set_defaults(func=cmd_cache)

    return parser


def _apply_verify_defaults(args) -> None:
    if args.command != "verify":
        return
    defaults = {"finite": (15, 25), "telescope": (None, 15), "padic": (8, 200), "ode": (None, 50)}
    if args.suite in defaults:
        kmax_default, nmax_default = defaults[args.suite]
        if args.kmax is None:
            args.kmax = kmax_default
        if args.nmax is None:
            args.nmax = nmax_default


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_verify_defaults(args)
    try:
        return args.func(args)
    except (CrossCheckError, VerificationError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
