"""Job orchestration: full sieve runs, relation verification, benchmarks.

One special-q root is one unit of work.  Workers sieve jobs
independently; a single writer emits relations in job order with global
dedup, so the relation file is append-only and byte-identical across
reruns regardless of the worker count.
"""

from __future__ import annotations

import math
import multiprocessing
import statistics
import time
from dataclasses import dataclass, field

from . import arith
from .arith import LeadingCoeffVanishes
from .config import SieveConfig
from .engine import SieveJobStats, build_factor_base, sieve_side, sieve_special_q, sort_and_scan
from .lattice import SpecialQ, lll_reduce, special_q_basis, to_abc
from .smooth import Relation, build_relation, is_prime

_THRESHOLD_NLP = 2
_THRESHOLD_SLACK = 10


class Siever:
    """Shared per-run state: factor bases, trial-division primes, region."""

    def __init__(self, cfg: SieveConfig):
        cfg.validate()
        self.cfg = cfg
        self.region = cfg.region()
        self.fb0 = build_factor_base(cfg.f0, 1 << cfg.fb_bits0)
        self.fb1 = build_factor_base(cfg.f1, 1 << cfg.fb_bits1)
        # trial division always includes every prime below the bound, so
        # factors skipped by skip_below (and bad primes) are recovered
        self.primes0 = arith.primes_upto(1 << cfg.fb_bits0)
        self.primes1 = arith.primes_upto(1 << cfg.fb_bits1)

    def jobs(self) -> list[SpecialQ]:
        """One job per (q, root of f0 mod q), q prime in the configured range."""
        cfg = self.cfg
        out = []
        for q in arith.primes_upto(cfg.q_max):
            if q < cfg.q_min:
                continue
            try:
                roots = arith.roots_mod_p(cfg.f0, q)
            except LeadingCoeffVanishes:
                continue
            out.extend(SpecialQ(q, r) for r in roots)
        return out

    def thresholds_for(self, sq: SpecialQ) -> tuple[int, int]:
        """Configured thresholds, else round(log2 max corner norm) minus
        the large-prime allowance and a fixed slack."""
        cfg = self.cfg
        if cfg.threshold0 is not None and cfg.threshold1 is not None:
            return cfg.threshold0, cfg.threshold1
        Lq_red = lll_reduce(special_q_basis(sq.q, sq.r))
        derived = []
        for f, lpb in ((cfg.f0, cfg.lpb_bits0), (cfg.f1, cfg.lpb_bits1)):
            worst = 1
            for corner in self.region.corner_cells():
                abc = to_abc(Lq_red, corner)
                if abc != (0, 0, 0):
                    worst = max(worst, arith.norm_abc(f, *abc))
            derived.append(
                max(0, arith.round_log2(worst) - _THRESHOLD_NLP * lpb - _THRESHOLD_SLACK)
            )
        t0 = cfg.threshold0 if cfg.threshold0 is not None else derived[0]
        t1 = cfg.threshold1 if cfg.threshold1 is not None else derived[1]
        return t0, t1


@dataclass
class JobReport:
    q: int
    r: int
    hits: int = 0
    candidates: int = 0
    relations: int = 0
    seconds: float = 0.0


@dataclass
class RunStats:
    jobs: list[JobReport] = field(default_factory=list)
    unique_relations: int = 0
    elapsed: float = 0.0

    @property
    def total_relations(self) -> int:
        return sum(j.relations for j in self.jobs)

    @property
    def total_candidates(self) -> int:
        return sum(j.candidates for j in self.jobs)

    @property
    def total_hits(self) -> int:
        return sum(j.hits for j in self.jobs)


def _sieve_job(siever: Siever, sq: SpecialQ):
    cfg = siever.cfg
    t0 = time.perf_counter()
    estats = SieveJobStats()
    cands = sieve_special_q(
        sq,
        cfg.f0,
        cfg.f1,
        siever.fb0,
        siever.fb1,
        siever.region,
        siever.thresholds_for(sq),
        cfg.skip_below,
        stats=estats,
    )
    Lq_red = lll_reduce(special_q_basis(sq.q, sq.r))
    lines = []
    for cand in cands:
        rel = build_relation(
            cand.ijk,
            Lq_red,
            cfg.f0,
            cfg.f1,
            siever.primes0,
            siever.primes1,
            (cfg.lpb_bits0, cfg.lpb_bits1),
            cfg.nlp_max,
            cfg.pm1_b1,
        )
        if rel is not None:
            lines.append(rel.line())
    rep = JobReport(
        q=sq.q,
        r=sq.r,
        hits=estats.hits0 + estats.hits1,
        candidates=estats.candidates,
        relations=len(lines),
        seconds=time.perf_counter() - t0,
    )
    return lines, rep


_POOL_SIEVER: Siever | None = None


def _pool_init(cfg: SieveConfig):
    global _POOL_SIEVER
    _POOL_SIEVER = Siever(cfg)


def _pool_job(sq: SpecialQ):
    return _sieve_job(_POOL_SIEVER, sq)


def run_sieve(cfg: SieveConfig, workers: int | None = None, quiet: bool = False) -> RunStats:
    """Sieve every special-q job and stream unique relations to the
    configured output file, in deterministic job order."""
    t_start = time.perf_counter()
    siever = Siever(cfg)
    jobs = siever.jobs()
    nworkers = workers if workers is not None else cfg.workers
    stats = RunStats()
    seen: set[str] = set()
    with open(cfg.output, "w", encoding="utf-8", newline="\n") as out:
        if nworkers > 1 and len(jobs) > 1:
            ctx = multiprocessing.get_context()
            with ctx.Pool(nworkers, initializer=_pool_init, initargs=(cfg,)) as pool:
                results = pool.imap(_pool_job, jobs, chunksize=1)
                for lines, rep in results:
                    _emit(out, lines, rep, seen, stats, quiet)
        else:
            for sq in jobs:
                lines, rep = _sieve_job(siever, sq)
                _emit(out, lines, rep, seen, stats, quiet)
    stats.elapsed = time.perf_counter() - t_start
    if not quiet:
        print(
            f"total: jobs={len(stats.jobs)} hits={stats.total_hits} "
            f"candidates={stats.total_candidates} relations={stats.total_relations} "
            f"unique={stats.unique_relations} {stats.elapsed:.2f}s"
        )
    return stats


def _emit(out, lines, rep, seen, stats, quiet):
    written = 0
    for line in lines:
        if line not in seen:
            seen.add(line)
            out.write(line + "\n")
            written += 1
    stats.unique_relations += written
    stats.jobs.append(rep)
    if not quiet:
        print(
            f"q={rep.q} r={rep.r} hits={rep.hits} cands={rep.candidates} "
            f"rels={rep.relations} {rep.seconds:.2f}s"
        )


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerifyReport:
    checked: int = 0
    failed: int = 0
    incomplete_tail: bool = False
    errors: list[tuple[int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0


def _check_relation(rel: Relation, cfg: SieveConfig) -> str | None:
    a, b, c = rel.a, rel.b, rel.c
    if (a, b, c) == (0, 0, 0):
        return "zero triple"
    if math.gcd(math.gcd(a, b), c) != 1:
        return "triple not coprime"
    for lead in (c, b, a):
        if lead:
            if lead < 0:
                return "sign normalization violated"
            break
    for side, (f, lpb, fbb) in enumerate(
        (
            (cfg.f0, cfg.lpb_bits0, cfg.fb_bits0),
            (cfg.f1, cfg.lpb_bits1, cfg.fb_bits1),
        )
    ):
        factors = rel.factors0 if side == 0 else rel.factors1
        prod = 1
        large = 0
        for p in factors:
            if p > 1 << lpb:
                return f"side {side}: prime {p:#x} above large prime bound"
            if p > 1 << fbb:
                large += 1
            if not is_prime(p):
                return f"side {side}: {p:#x} is not prime"
            prod *= p
        if large > cfg.nlp_max:
            return f"side {side}: {large} primes above the factor base bound"
        if prod != arith.norm_abc(f, a, b, c):
            return f"side {side}: factor product does not match the norm"
    return None


def run_verify(cfg: SieveConfig, relation_path: str) -> VerifyReport:
    """Recompute both norms for every relation line and check the
    reconstruction, bounds, and coprimality contracts.

    A final line without a terminating newline is treated as an
    interrupted write and skipped (reported via incomplete_tail).
    """
    report = VerifyReport()
    with open(relation_path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if text and not text.endswith("\n"):
        nl = text.rfind("\n")
        text = text[: nl + 1] if nl >= 0 else ""
        report.incomplete_tail = True
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rel = Relation.from_line(line)
        except (ValueError, IndexError):
            report.failed += 1
            report.errors.append((lineno, "unparseable relation"))
            continue
        report.checked += 1
        err = _check_relation(rel, cfg)
        if err is not None:
            report.failed += 1
            report.errors.append((lineno, err))
    return report


# ---------------------------------------------------------------------------
# benchmarking


@dataclass
class BenchRow:
    q: int
    r: int
    strategy: str
    planes: int
    points: int
    hits: int
    enum_seconds: float
    sort_seconds: float

    @property
    def hits_per_sec(self) -> float:
        dt = self.enum_seconds + self.sort_seconds
        return self.hits / dt if dt > 0 else 0.0


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)

    def median_rate(self, strategy: str) -> float:
        rates = [r.hits_per_sec for r in self.rows if r.strategy == strategy]
        return statistics.median(rates) if rates else 0.0

    def text(self) -> str:
        head = f"{'q':>8} {'r':>8} {'strategy':>8} {'planes':>8} {'points':>9} {'hits':>9} {'enum_s':>8} {'sort_s':>8} {'hits/s':>10}"
        lines = [head, "-" * len(head)]
        for row in self.rows:
            lines.append(
                f"{row.q:>8} {row.r:>8} {row.strategy:>8} {row.planes:>8} "
                f"{row.points:>9} {row.hits:>9} {row.enum_seconds:>8.3f} "
                f"{row.sort_seconds:>8.3f} {row.hits_per_sec:>10.0f}"
            )
        lines.append(
            f"median hits/s: ground={self.median_rate('ground'):.0f} "
            f"zplane={self.median_rate('zplane'):.0f}"
        )
        return "\n".join(lines)

    def csv(self) -> str:
        lines = ["q,r,strategy,planes,points,hits,enum_seconds,sort_seconds,hits_per_sec"]
        for row in self.rows:
            lines.append(
                f"{row.q},{row.r},{row.strategy},{row.planes},{row.points},"
                f"{row.hits},{row.enum_seconds:.6f},{row.sort_seconds:.6f},"
                f"{row.hits_per_sec:.1f}"
            )
        return "\n".join(lines) + "\n"


def run_bench(cfg: SieveConfig, sample: int = 20) -> BenchReport:
    """Side-0 sieve of sampled special-q jobs under both enumeration
    strategies, timing enumeration and the sort/scan separately."""
    siever = Siever(cfg)
    jobs = siever.jobs()
    if not jobs:
        return BenchReport()
    if len(jobs) > sample:
        step = len(jobs) / sample
        jobs = [jobs[int(i * step)] for i in range(sample)]
    report = BenchReport()
    for sq in jobs:
        Lq_red = lll_reduce(special_q_basis(sq.q, sq.r))
        th0, _ = siever.thresholds_for(sq)
        for strategy in ("ground", "zplane"):
            t0 = time.perf_counter()
            hits, side = sieve_side(
                Lq_red, siever.fb0, sq, siever.region, cfg.skip_below, enumerator=strategy
            )
            t1 = time.perf_counter()
            sort_and_scan(hits, th0)
            t2 = time.perf_counter()
            report.rows.append(
                BenchRow(
                    q=sq.q,
                    r=sq.r,
                    strategy=strategy,
                    planes=side.planes,
                    points=side.points,
                    hits=side.hits,
                    enum_seconds=t1 - t0,
                    sort_seconds=t2 - t1,
                )
            )
    return report
