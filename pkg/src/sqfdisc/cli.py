"""Command-line interface.

Exit codes: 0 success, 2 search exhaustion, 3 certification failure, 4 invalid target.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from decimal import Decimal
from typing import List, Optional, Sequence

from .certify import CertificationError, certify_polynomial
from .family import FamilyParams, disc_linear_factorization
from .paramsearch import BudgetExhausted, ScanExhausted
from .pipeline import (
    GenerationTarget,
    InvalidTarget,
    RunReport,
    SearchExhausted,
    count_distinct_discriminants,
    density_report,
    generate_stream,
    prepare,
)
from .sieve import brakenhoff_density, brakenhoff_empirical, sieve_profile

EXIT_OK, EXIT_EXHAUSTED, EXIT_CERT, EXIT_INVALID = 0, 2, 3, 4


def _int_list(text: str) -> List[int]:
    if text is None or text == "":
        return []
    if isinstance(text, list):
        return [int(x) for x in text]
    return [int(Decimal(x)) for x in str(text).split(",") if x.strip()]


def _signature(text: str, n: int) -> int:
    r, s = _int_list(text) if isinstance(text, str) else text
    if r < 0 or s < 0 or r + 2 * s != n:
        raise InvalidTarget(f"signature ({r},{s}) does not satisfy r + 2s = {n}")
    return r


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _frac(x) -> Optional[dict]:
    if x is None:
        return None
    return {"exact": f"{x.numerator}/{x.denominator}", "decimal": f"{float(x):.12f}"}


def _target(args) -> GenerationTarget:
    if args.n is None or args.signature is None:
        raise InvalidTarget("--n and --signature are required")
    n = int(args.n)
    return GenerationTarget(
        n=n,
        r=_signature(args.signature, n),
        S=tuple(_int_list(args.avoid_primes)),
        record_budget=int(args.budget),
        q_max=int(getattr(args, "q_max", None) or 4),
        seed=int(args.seed or 0),
        workers=int(getattr(args, "workers", None) or 1),
    )


def cmd_generate(args) -> int:
    target = _target(args)
    report = RunReport()
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for rec in generate_stream(target, report):
            out.write(_dumps(rec.to_json()) + "\n")
    finally:
        if args.out:
            out.close()
    print(_dumps(report.to_json()), file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    coeffs = _int_list(args.poly)
    if len(coeffs) < 2 or coeffs[-1] != 1:
        raise InvalidTarget("--poly must list ascending coefficients of a monic polynomial of degree >= 1")
    rec = certify_polynomial(coeffs, _int_list(args.avoid_primes))
    print(_dumps(rec.to_json()))
    return EXIT_OK


def cmd_density(args) -> int:
    with open(args.params, encoding="utf-8") as fh:
        params = FamilyParams.from_json(json.load(fh))
    cutoff = int(args.cutoff)
    rep = density_report(params, int(args.scan_length), cutoff)
    system = disc_linear_factorization(params.n, params.a).substitute(params.b_modulus, params.b_residue)
    profile = sieve_profile(system, cutoff)
    if args.csv:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["p", "a_p_exact", "a_p_decimal", "method"])
        for p in sorted(profile.densities):
            d = profile.densities[p].to_json()
            w.writerow([d["p"], d["a_p_exact"], d["a_p_decimal"], d["method"]])
        return EXIT_OK
    lo, hi = rep.predicted_density
    print(
        _dumps(
            {
                "scanned": rep.records_scanned,
                "indeterminate": rep.indeterminate_count,
                "squarefree": rep.squarefree_count,
                "empirical": _frac(rep.empirical_density),
                "predicted_lower": _frac(lo),
                "predicted_upper": _frac(hi),
                "profile": profile.to_json(),
            }
        )
    )
    return EXIT_OK


def cmd_brakenhoff(args) -> int:
    n, p = int(args.n), int(args.p)
    formula = brakenhoff_density(n, p)
    out = {"n": n, "p": p, "formula": _frac(formula)}
    if args.samples:
        est = brakenhoff_empirical(n, p, exhaustive=False, samples=int(args.samples), seed=int(args.seed or 0))
        out["sample"] = {"mean": est.mean, "stderr": est.stderr, "count": est.count, "hits": est.hits}
    else:
        value = brakenhoff_empirical(n, p, exhaustive=True, work_limit=int(args.work_limit))
        out["exhaustive"] = _frac(value)
        out["agree"] = value == formula
    print(_dumps(out))
    return EXIT_OK


def cmd_count(args) -> int:
    target = _target(args)
    checkpoints = _int_list(args.checkpoints)
    rep = count_distinct_discriminants(target, checkpoints, budget=int(args.budget))
    print(_dumps(rep.to_json()))
    return EXIT_OK


def cmd_explain(args) -> int:
    target = _target(args)
    con = prepare(target)
    out = con.to_json()
    out["params_q1"] = con.params(1).to_json()
    print(json.dumps(out, sort_keys=True, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sqfdisc", description="Polynomials with squarefree discriminant.")
    ap.add_argument("--config", help="JSON file with default values for the flags")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def target_flags(p, budget_default):
        p.add_argument("--n", type=int)
        p.add_argument("--signature", help="r,s")
        p.add_argument("--avoid-primes", default="")
        p.add_argument("--budget", type=int, default=budget_default)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--q-max", type=int, default=4)

    g = sub.add_parser("generate", help="emit certified records as JSON lines")
    target_flags(g, 25)
    g.add_argument("--out")
    g.add_argument("--workers", type=int, default=1)
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="certify one polynomial")
    v.add_argument("--poly", required=False)
    v.add_argument("--avoid-primes", default="")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("density", help="empirical vs predicted squarefree density")
    d.add_argument("--params")
    d.add_argument("--scan-length", type=int, default=10**4)
    d.add_argument("--cutoff", type=int, default=1000)
    d.add_argument("--csv", action="store_true")
    d.set_defaults(func=cmd_density)

    b = sub.add_parser("brakenhoff", help="local discriminant densities")
    b.add_argument("--n", type=int)
    b.add_argument("--p", type=int)
    mode = b.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--samples", type=int)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--work-limit", type=int, default=10**6)
    b.set_defaults(func=cmd_brakenhoff)

    c = sub.add_parser("count", help="distinct squarefree discriminants below checkpoints")
    target_flags(c, 10**6)
    c.add_argument("--checkpoints", default="1e3,1e4,1e5,1e6")
    c.set_defaults(func=cmd_count)

    e = sub.add_parser("explain", help="print the certificate chain")
    target_flags(e, 25)
    e.set_defaults(func=cmd_explain)
    return ap


def _apply_config(ap: argparse.ArgumentParser, argv: Sequence[str]) -> argparse.Namespace:
    """Flags override config values, config values override parser defaults."""
    args = ap.parse_args(argv)
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            config = json.load(fh)
        explicit = {a.split("=")[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
        for key, value in config.items():
            key = key.replace("-", "_")
            if key not in explicit and key != "command":
                setattr(args, key, value)
    return args


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    args = _apply_config(ap, argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        return args.func(args)
    except (InvalidTarget, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (SearchExhausted, ScanExhausted, BudgetExhausted, OverflowError) as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except CertificationError as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return EXIT_CERT


if __name__ == "__main__":
    sys.exit(main())
