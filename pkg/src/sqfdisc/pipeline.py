"""End-to-end construction: certificates, parameters, scaling, scanning, certification."""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .certify import CertificationError, DiscRecord, certify_record
from .exactmath import Factorization, factorize, is_prime, merge_factorizations, primes_up_to, squarefree_from
from .family import FamilyParams, Interval, LinearFactorSystem, disc_linear_factorization
from .paramsearch import (
    BudgetExhausted,
    ParamCertificate,
    ScanExhausted,
    SignatureRegion,
    assemble_base_params,
    b_congruence,
    build_certificate,
    check_signature,
    find_signature_direction,
    scale_params,
)
from .sieve import sieve_profile

log = logging.getLogger(__name__)

_PREFILTER_PRIMES = tuple(primes_up_to(100))


class InvalidTarget(ValueError):
    pass


class SearchExhausted(RuntimeError):
    """A search stage gave up; ``stage`` names it."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


@dataclass(frozen=True)
class GenerationTarget:
    n: int
    r: int
    S: Tuple[int, ...] = ()
    N: Optional[int] = None
    record_budget: int = 25
    q_max: int = 4  # number of scales q_j = 1 + j*M tried
    seed: int = 0
    scan_budget: int = 10**6
    min_members: int = 200  # class members a bounded q=1 cell must hold
    workers: int = 1

    @property
    def s(self) -> int:
        return (self.n - self.r) // 2

    def validate(self) -> None:
        if self.n < 2:
            raise InvalidTarget("degree must be at least 2")
        try:
            check_signature(self.n, self.r)
        except ValueError as exc:
            raise InvalidTarget(str(exc)) from None
        bad = [p for p in self.S if not is_prime(p)]
        if bad:
            raise InvalidTarget(f"not prime: {bad}")
        if self.record_budget < 0 or self.q_max < 1:
            raise InvalidTarget("budgets must be positive")


@dataclass(frozen=True)
class Construction:
    """Everything fixed before the b-scan starts."""

    target: GenerationTarget
    cert: ParamCertificate
    congruences: Tuple[Tuple[int, int], ...]
    region: SignatureRegion
    b_residue: int
    b_modulus: int
    b_choices: Dict[int, int]

    @property
    def M(self) -> int:
        return self.cert.assembled_modulus

    def q_schedule(self) -> Iterator[int]:
        for j in range(self.target.q_max):
            yield 1 + j * self.M

    def params(self, q: int = 1) -> FamilyParams:
        return scale_params(self.region, self.cert, q, (self.b_residue, self.b_modulus))

    def to_json(self) -> dict:
        return {
            "certificate": self.cert.to_json(),
            "a_congruences": [[str(r), str(m)] for r, m in self.congruences],
            "region": self.region.to_json(),
            "b_residue": str(self.b_residue),
            "b_modulus": str(self.b_modulus),
            "b_choices": {str(p): str(b) for p, b in sorted(self.b_choices.items())},
            "q_modulus": str(self.M),
        }


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (ScanExhausted, BudgetExhausted) as exc:
        raise SearchExhausted(name, str(exc)) from exc


def prepare(target: GenerationTarget) -> Construction:
    target.validate()
    n, S = target.n, tuple(sorted(set(target.S)))
    cert = _stage("certificate", build_certificate, n, S, seed=target.seed)
    congruences = tuple(assemble_base_params(n, S, cert))
    # upper bound for the b modulus, known before A is
    t_bound = math.prod(set(S) | set(primes_up_to(n))) * cert.p1
    region = _stage(
        "signature_direction",
        find_signature_direction,
        n,
        target.r,
        cert,
        congruences,
        min_width=Fraction(target.min_members * t_bound),
    )
    if not disc_linear_factorization(n, region.A).pairwise_coprime():
        raise CertificationError("chosen direction has repeated critical values")
    residue, t, choices = _stage("b_congruence", b_congruence, cert, S, region.A)
    cert = replace(cert, b1=choices[cert.p1], b_p={p: b for p, b in choices.items() if p != cert.p1})
    return Construction(target, cert, congruences, region, residue, t, choices)


def _first_above(x: Fraction, residue: int, t: int) -> int:
    """Smallest b = residue mod t with b > x."""
    k = math.floor((x - residue) / t) + 1
    return residue + k * t


def _last_below(x: Fraction, residue: int, t: int) -> int:
    k = math.ceil((x - residue) / t) - 1
    return residue + k * t


def scan_order(cell: Interval, residue: int, t: int) -> Iterator[int]:
    """Members of the class inside the open cell by increasing (|b|, b).

    >>> list(itertools.islice(scan_order(Interval(None, None), 1, 3), 5))
    [1, -2, 4, -5, 7]
    """
    lo, hi = cell.lo, cell.hi
    # nonnegative side, ascending
    start_pos = _first_above(max(Fraction(-1), lo) if lo is not None else Fraction(-1), residue, t)
    pos = itertools.count(start_pos, t)
    if hi is not None:
        pos = itertools.takewhile(lambda b: b < hi, pos)
    # negative side, descending
    start_neg = _last_below(min(Fraction(0), hi) if hi is not None else Fraction(0), residue, t)
    neg = itertools.count(start_neg, -t)
    if lo is not None:
        neg = itertools.takewhile(lambda b: b > lo, neg)
    a, b = next(pos, None), next(neg, None)
    while a is not None or b is not None:
        if b is None or (a is not None and (a, a) < (-b, b)):
            yield a
            a = next(pos, None)
        else:
            yield b
            b = next(neg, None)


@dataclass
class _Context:
    params: FamilyParams
    system: LinearFactorSystem
    S: Tuple[int, ...]
    r: int
    witness_budget: int


_worker_ctx: Optional[_Context] = None


def _init_worker(ctx: _Context) -> None:
    global _worker_ctx
    _worker_ctx = ctx


def _quick_reject(system: LinearFactorSystem, b: int) -> bool:
    """Cheap proof that the discriminant is not squarefree."""
    vals = system.values(b)
    disc = math.prod(vals)
    if disc == 0:
        return True
    if any(disc % (p * p) == 0 for p in _PREFILTER_PRIMES):
        return True
    return any(math.gcd(x, y) > 1 for x, y in itertools.combinations(vals, 2))


def _evaluate(ctx: _Context, b: int) -> Tuple[str, Optional[DiscRecord]]:
    if _quick_reject(ctx.system, b):
        return "not_squarefree", None
    rec = certify_record(ctx.params, b, ctx.S, ctx.system, witness_budget=ctx.witness_budget)
    if rec.real_roots != ctx.r:
        raise CertificationError(f"b={b}: {rec.real_roots} real roots, expected {ctx.r}")
    if rec.irreducibility_witness is None:
        raise CertificationError(f"b={b}: no irreducibility witness up to {ctx.witness_budget}")
    if rec.squarefree is None:
        return "indeterminate", rec
    if not rec.squarefree:
        return "not_squarefree", rec
    if not rec.coprime_to_S:
        raise CertificationError(f"b={b}: discriminant shares a prime with S")
    return "squarefree", rec


def _evaluate_in_worker(b: int):
    return _evaluate(_worker_ctx, b)


@dataclass
class RunReport:
    params: Optional[FamilyParams] = None
    records_scanned: int = 0
    squarefree_count: int = 0
    indeterminate_count: int = 0
    distinct_discriminants: int = 0
    empirical_density: Optional[Fraction] = None
    predicted_density: Optional[Tuple[Fraction, Fraction]] = None
    exponent_fit: Optional[float] = None
    checkpoint_counts: Dict[int, int] = field(default_factory=dict)
    max_multiplicity: int = 0
    budget_exhausted: bool = False
    skipped_q: List[Tuple[int, str]] = field(default_factory=list)

    def to_json(self) -> dict:
        frac = lambda x: None if x is None else f"{x.numerator}/{x.denominator}"  # noqa: E731
        return {
            "params": None if self.params is None else self.params.to_json(),
            "records_scanned": self.records_scanned,
            "squarefree_count": self.squarefree_count,
            "indeterminate_count": self.indeterminate_count,
            "distinct_discriminants": self.distinct_discriminants,
            "empirical_density": frac(self.empirical_density),
            "predicted_density": None
            if self.predicted_density is None
            else [frac(x) for x in self.predicted_density],
            "exponent_fit": self.exponent_fit,
            "checkpoint_counts": {str(k): v for k, v in sorted(self.checkpoint_counts.items())},
            "max_multiplicity": self.max_multiplicity,
            "budget_exhausted": self.budget_exhausted,
            "skipped_q": [[str(q), why] for q, why in self.skipped_q],
        }


def _has_member(cell: Interval, residue: int, t: int) -> bool:
    return next(scan_order(cell, residue, t), None) is not None


def _results(ctx: _Context, bs: Iterator[int], workers: int, chunk: int = 64):
    """(b, status, record) in scan order; parallel evaluation keeps the order."""
    if workers <= 1:
        for b in bs:
            yield (b, *_evaluate(ctx, b))
        return
    with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(ctx,)) as pool:
        while True:
            batch = list(itertools.islice(bs, chunk * workers))
            if not batch:
                return
            for b, res in zip(batch, pool.map(_evaluate_in_worker, batch, chunksize=chunk)):
                yield (b, *res)


def generate_stream(
    target: GenerationTarget,
    report: Optional[RunReport] = None,
    construction: Optional[Construction] = None,
) -> Iterator[DiscRecord]:
    """Certified squarefree records in (q, |b|, b) order, at most ``record_budget`` of them."""
    con = construction or prepare(target)
    report = report if report is not None else RunReport()
    emitted = 0
    if target.record_budget == 0:
        return
    seen: set = set()
    for q in con.q_schedule():
        params = con.params(q)
        if report.params is None:
            report.params = params
        cell = params.b_interval
        if not _has_member(cell, params.b_residue, params.b_modulus):
            why = f"interval {cell.to_json()} holds no b = {params.b_residue} mod {params.b_modulus}"
            log.info("skipping q=%d: %s", q, why)
            report.skipped_q.append((q, why))
            continue
        ctx = _Context(
            params,
            disc_linear_factorization(target.n, params.a),
            tuple(sorted(set(target.S))),
            target.r,
            max(1000, con.cert.p1),
        )
        bs = scan_order(cell, params.b_residue, params.b_modulus)
        for b, status, rec in _results(ctx, bs, target.workers):
            if report.records_scanned >= target.scan_budget:
                report.budget_exhausted = True
                raise SearchExhausted("scan", f"{target.scan_budget} candidates gave {emitted} records")
            report.records_scanned += 1
            if status == "indeterminate":
                report.indeterminate_count += 1
            if status != "squarefree":
                continue
            report.squarefree_count += 1
            if rec.disc not in seen:
                seen.add(rec.disc)
                report.distinct_discriminants += 1
            emitted += 1
            yield rec
            if emitted >= target.record_budget:
                return
        if emitted >= target.record_budget:
            return
    if emitted < target.record_budget:
        raise SearchExhausted("scan", f"q schedule exhausted after {emitted} records")


def _walk(system: LinearFactorSystem, start: Optional[int], step: int, cell: Interval, bound: int) -> Iterator[int]:
    """Class members from ``start`` in direction ``step`` while inside the cell and |disc| <= bound.

    Between consecutive roots |disc| is log-concave, so it rises monotonically
    away from a root until its peak; stopping at the first value above the
    bound loses nothing that the walk from the neighbouring root will not find.
    """
    b = start
    while b is not None and b in cell:
        if abs(system.evaluate(b)) > bound:
            return
        yield b
        b += step


def small_discriminant_candidates(params: FamilyParams, system: LinearFactorSystem, bound: int) -> List[int]:
    """All admissible b in the cell with |Delta| <= bound, sorted."""
    cell, res, t = params.b_interval, params.b_residue, params.b_modulus
    found = set()
    if cell.lo is not None:
        found.update(_walk(system, _first_above(cell.lo, res, t), t, cell, bound))
    if cell.hi is not None:
        found.update(_walk(system, _last_below(cell.hi, res, t), -t, cell, bound))
    return sorted(found)


def fit_exponent(points: Sequence[Tuple[float, float]]) -> Optional[float]:
    """Least-squares slope of log(count) against log(N); None with fewer than 4 usable points."""
    pts = [(math.log(N), math.log(c)) for N, c in points if c > 0]
    if len(pts) < 4:
        return None
    mx = sum(x for x, _ in pts) / len(pts)
    my = sum(y for _, y in pts) / len(pts)
    sxx = sum((x - mx) ** 2 for x, _ in pts)
    sxy = sum((x - mx) * (y - my) for x, y in pts)
    return sxy / sxx


def count_distinct_discriminants(
    target: GenerationTarget,
    checkpoints: Sequence[int],
    budget: int = 10**6,
    construction: Optional[Construction] = None,
) -> RunReport:
    """Distinct certified squarefree discriminants with |Delta| <= N for each checkpoint N."""
    checkpoints = list(checkpoints)
    if checkpoints != sorted(checkpoints) or len(set(checkpoints)) != len(checkpoints):
        raise ValueError("checkpoints must be strictly increasing")
    con = construction or prepare(target)
    bound = checkpoints[-1]
    report = RunReport()
    discs: set = set()
    rejected: set = set()  # values already known not to qualify
    S = tuple(sorted(set(target.S)))
    for q in con.q_schedule():
        params = con.params(q)
        if report.params is None:
            report.params = params
        system = disc_linear_factorization(target.n, params.a)
        candidates = small_discriminant_candidates(params, system, bound)
        if not candidates:
            # |Delta| only grows with q
            break
        ctx = _Context(params, system, S, target.r, max(1000, con.cert.p1))
        mult: Counter = Counter()
        for b in candidates:
            if report.records_scanned >= budget:
                report.budget_exhausted = True
                break
            report.records_scanned += 1
            d = system.evaluate(b)
            mult[d] += 1
            if d in discs:
                report.squarefree_count += 1
                continue
            if d in rejected:
                continue
            status, rec = _evaluate(ctx, b)
            if status == "indeterminate":
                report.indeterminate_count += 1
            elif status == "squarefree":
                report.squarefree_count += 1
                discs.add(rec.disc)
                continue
            rejected.add(d)
        # the (n-1)-to-one bound holds per scale; values may recur across scales
        worst = max(mult.values(), default=0)
        if worst > target.n - 1:
            raise CertificationError(f"a discriminant value occurs {worst} times for one q")
        report.max_multiplicity = max(report.max_multiplicity, worst)
        if report.budget_exhausted:
            break
    report.distinct_discriminants = len(discs)
    report.checkpoint_counts = {N: sum(1 for d in discs if abs(d) <= N) for N in checkpoints}
    report.exponent_fit = fit_exponent(list(report.checkpoint_counts.items()))
    return report


def squarefree_status(system: LinearFactorSystem, b: int) -> Optional[bool]:
    """Squarefreeness of the product formula value, factoring each linear factor separately."""
    vals = system.values(b)
    if any(v == 0 for v in vals):
        return False
    if any(math.gcd(x, y) > 1 for x, y in itertools.combinations(vals, 2)):
        return False
    return squarefree_from(merge_factorizations(factorize(v) for v in vals))


def density_report(params: FamilyParams, scan_length: int, cutoff: int = 1000) -> RunReport:
    """Empirical squarefree fraction over the first scan_length admissible b vs the sieve bracket.

    The prediction is the univariate product for the system in u, b = t*u + r.
    Indeterminate factorizations are dropped from numerator and denominator.
    """
    system = disc_linear_factorization(params.n, params.a)
    cell = params.b_interval or Interval(None, None)
    hits = total = indeterminate = 0
    for b in itertools.islice(scan_order(cell, params.b_residue, params.b_modulus), scan_length):
        status = squarefree_status(system, b)
        if status is None:
            indeterminate += 1
            continue
        total += 1
        hits += status
    profile = sieve_profile(system.substitute(params.b_modulus, params.b_residue), cutoff)
    return RunReport(
        params=params,
        records_scanned=total + indeterminate,
        squarefree_count=hits,
        indeterminate_count=indeterminate,
        empirical_density=Fraction(hits, total) if total else None,
        predicted_density=(profile.product_lower, profile.product_upper),
    )
