"""Deterministic input generation and wall-clock micro-benchmarks.

Protocol: one warm-up run (excluded), then ``repeats`` timed runs of the
batch evaluator over the same input, reporting the median.  Timed runs are
single-threaded unless a parallel worker count is requested, in which case
the record is labelled as a separate implementation variant.  Before any
timing, the implementation's output is spot-checked (a benchmark of wrong
results is invalid and aborts), and after every run the result array is
checksummed: the checksum must be identical across runs.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import core, oracle, weideman
from .exceptions import BenchmarkError, DomainError

__all__ = [
    "ImplId",
    "InputSpec",
    "BenchRecord",
    "DEFAULT_INPUT_SPEC",
    "generate_inputs",
    "time_implementation",
    "exp_time_fraction",
    "records_to_csv",
    "parse_records_csv",
    "BENCH_CSV_HEADER",
]


class ImplId(str, Enum):
    EQ1 = "eq1"
    EQ3 = "eq3"
    WEIDEMAN = "weideman"


@dataclass(frozen=True)
class InputSpec:
    """Seeded uniform rectangle of evaluation points.  The lower y bound must
    stay positive: benchmarks run in the approximation's native domain."""

    size: int
    seed: int = 42
    x_range: tuple[float, float] = (-10.0, 10.0)
    y_range: tuple[float, float] = (0.1, 10.0)

    def __post_init__(self):
        if int(self.size) != self.size or self.size < 0:
            raise DomainError(f"size must be an integer >= 0, got {self.size!r}")
        for name in ("x_range", "y_range"):
            lo, hi = getattr(self, name)
            if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
                raise DomainError(f"{name} must be a finite ordered pair, got {(lo, hi)!r}")
        if self.y_range[0] <= 0.0:
            raise DomainError(f"y_range lower bound must be > 0, got {self.y_range!r}")


DEFAULT_INPUT_SPEC = InputSpec(size=2**22)


def generate_inputs(spec: InputSpec) -> np.ndarray:
    """Points drawn uniformly from the rectangle, fully determined by the
    seed.  Generator: numpy PCG64 (``default_rng``), x array drawn first and
    y second, so the same seed reproduces the byte-identical sequence on any
    platform with the same numpy bit-stream version."""
    rng = np.random.default_rng(spec.seed)
    x = rng.uniform(spec.x_range[0], spec.x_range[1], spec.size)
    y = rng.uniform(spec.y_range[0], spec.y_range[1], spec.size)
    return x + 1j * y


@dataclass(frozen=True)
class BenchRecord:
    """Timing result for one implementation on one input size.  ``impl`` is
    the canonical id (eq1/eq3/weideman), with a ``-p<N>`` suffix for the
    parallel batch variant."""

    impl: str
    size: int
    repeats: int
    median_seconds: float
    throughput: float
    exp_fraction: float | None = None

    def __post_init__(self):
        if self.repeats < 3:
            raise DomainError(f"published records need repeats >= 3, got {self.repeats!r}")
        if not self.median_seconds > 0.0:
            raise DomainError(f"median_seconds must be > 0, got {self.median_seconds!r}")
        expected = self.size / self.median_seconds
        if abs(self.throughput - expected) > 1e-9 * max(expected, 1.0):
            raise DomainError("throughput must equal size/median_seconds")
        if self.exp_fraction is not None and not 0.0 < self.exp_fraction < 1.0:
            raise DomainError(f"exp_fraction must lie in (0, 1), got {self.exp_fraction!r}")


_WEIDEMAN_CLASS_BOUND = {8: 1e-2, 16: 1e-4, 32: 1e-10}


def _resolve_impl(impl, params, degree, workers):
    impl = ImplId(impl)
    params = core._resolve_params(params)
    if impl is ImplId.EQ1:
        return impl.value, lambda zs: core.eval_eq1_batch(zs, params)
    if impl is ImplId.EQ3:
        label = impl.value if workers <= 1 else f"{impl.value}-p{workers}"
        return label, lambda zs: core.eval_batch(zs, params, workers=workers)
    coeffs = weideman.weideman_coefficients(degree)
    return impl.value, lambda zs: weideman.weideman_batch(zs, coeffs)


def _correctness_guard(impl: ImplId, zs, fn, params, degree) -> None:
    """Spot-check the implementation before timing it; abort on garbage."""
    step = max(1, zs.size // 512)
    sample = zs[::step][:512]
    got = fn(sample)
    if impl is ImplId.EQ3:
        pts = sample[:24]
        ref = np.array([complex(oracle.oracle_w(z)) for z in pts])
        rel = np.abs(got[:24] - ref) / np.abs(ref)
        bound = 1e-9
    else:
        ref = core.eval_eq3_batch(sample, core.Preset.HIGH.params)
        rel = np.abs(got - ref) / np.abs(ref)
        bound = 1e-8 if impl is ImplId.EQ1 else _WEIDEMAN_CLASS_BOUND.get(degree, 0.1)
    worst = float(rel.max())
    if not worst <= bound:
        raise BenchmarkError(
            f"correctness guard failed for {impl.value}: max relative deviation "
            f"{worst:.3e} exceeds {bound:.1e}; refusing to time wrong results")


def _timed_runs(fn, zs, repeats: int) -> list[float]:
    fn(zs[: min(zs.size, 2**18)])        # warm-up, excluded
    times = []
    checksum = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(zs)
        t1 = time.perf_counter()
        times.append(t1 - t0)
        cs = complex(np.sum(out))
        if checksum is None:
            checksum = cs
        elif cs != checksum:
            raise BenchmarkError("checksum changed between repeats; "
                                 "timed computation is not deterministic")
        del out
    return times


def _check_resolution(median: float) -> None:
    res = time.get_clock_info("perf_counter").resolution
    if median < 100.0 * res:
        raise BenchmarkError(
            f"median run time {median:.3e}s is within 100x of the timer "
            f"resolution {res:.1e}s; increase the input size")


def time_implementation(impl, zs, repeats: int = 5, params=None,
                        degree: int = weideman.DEFAULT_DEGREE,
                        workers: int = 1) -> BenchRecord:
    """Median wall time of ``repeats`` runs of an implementation over ``zs``.

    Raises
    ------
    DomainError
        If repeats < 3 or zs is empty.
    BenchmarkError
        If the correctness guard fails, the timer resolution is unusable, or
        run-to-run checksums differ.
    """
    if repeats < 3:
        raise DomainError(f"repeats must be >= 3, got {repeats!r}")
    zs = np.asarray(zs, dtype=np.complex128).ravel()
    if zs.size == 0:
        raise DomainError("cannot benchmark an empty input")
    impl = ImplId(impl)
    label, fn = _resolve_impl(impl, params, degree, workers)
    _correctness_guard(impl, zs, fn, params, degree)
    times = _timed_runs(fn, zs, repeats)
    med = statistics.median(times)
    _check_resolution(med)
    return BenchRecord(impl=label, size=int(zs.size), repeats=repeats,
                       median_seconds=med, throughput=zs.size / med)


def exp_time_fraction(zs, params=None, repeats: int = 5) -> float:
    """Share of total batch-evaluation time spent on the single
    transcendental pass B = exp(i*A), both sides measured with the same
    warm-up/median protocol on the same data."""
    zs = np.asarray(zs, dtype=np.complex128).ravel()
    if zs.size == 0:
        raise DomainError("cannot measure an empty input")
    if repeats < 3:
        raise DomainError(f"repeats must be >= 3, got {repeats!r}")
    params = core._resolve_params(params)
    A = zs * params.tau_m

    def exp_pass(a):
        return np.exp(1j * a)

    t_exp = statistics.median(_timed_runs(exp_pass, A, repeats))
    t_total = statistics.median(
        _timed_runs(lambda q: core.eval_batch(q, params), zs, repeats))
    frac = t_exp / t_total
    if not 0.0 < frac < 1.0:
        raise BenchmarkError(
            f"measured exponentiation fraction {frac!r} is outside (0, 1); "
            "timing run is not trustworthy")
    return frac


# ---------------------------------------------------------------------------
# CSV serialization (schema shared with the command-line front end)
# ---------------------------------------------------------------------------

BENCH_CSV_HEADER = "impl,size,repeats,median_seconds,throughput,exp_fraction"


def records_to_csv(records) -> str:
    lines = [BENCH_CSV_HEADER]
    for r in records:
        frac = "" if r.exp_fraction is None else repr(r.exp_fraction)
        lines.append(f"{r.impl},{r.size},{r.repeats},{r.median_seconds!r},"
                     f"{r.throughput!r},{frac}")
    return "\n".join(lines) + "\n"


def parse_records_csv(text: str) -> list[BenchRecord]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != BENCH_CSV_HEADER:
        raise ValueError(f"bad bench CSV header: {lines[:1]!r}")
    records = []
    for ln in lines[1:]:
        impl, size, repeats, med, thr, frac = ln.split(",")
        records.append(BenchRecord(
            impl=impl, size=int(size), repeats=int(repeats),
            median_seconds=float(med), throughput=float(thr),
            exp_fraction=None if frac == "" else float(frac)))
    return records
