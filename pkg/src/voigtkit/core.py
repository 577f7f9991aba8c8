"""Fourier-series evaluation of the Faddeeva function w(z) = exp(-z^2)*erfc(-iz).

The evaluator approximates the Gaussian kernel of w by a truncated Fourier
cosine series with period parameter ``tau_m`` and ``n_terms`` harmonics,
with coefficients

    a_n = (2*sqrt(pi)/tau_m) * exp(-n^2 pi^2 / tau_m^2).

Two algebraically equivalent forms are provided:

* :func:`eval_eq1` -- the raw two-sided series, one exponential per term.
  It is kept unguarded on purpose: it serves as the reference side of the
  equivalence property and as the slow baseline in benchmarks, and it
  refuses inputs near its removable 0/0 singularities.
* :func:`eval_eq3` -- the production form.  Collapsing the +n/-n term pairs
  leaves a single complex exponential per point plus a short sum of rational
  terms; the removable singularities at tau_m*z -> 0 and tau_m*z -> +-n*pi
  are evaluated by guarded truncated-series limits, so every finite input
  in the closed upper half-plane yields a finite value.

Batch evaluation follows a three-array scheme: A = tau_m*z, B = exp(i*A)
and C = A*A are materialized once each, with B the only transcendental
pass over the data.  All evaluators are elementwise, so batch output is
bitwise identical to a scalar sweep and independent of chunking.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .exceptions import DomainError, ReflectionOverflowError

__all__ = [
    "GUARD_RADIUS",
    "ApproxParams",
    "Preset",
    "VoigtLine",
    "fourier_coefficients",
    "eval_eq1",
    "eval_eq1_batch",
    "eval_eq3",
    "eval_eq3_batch",
    "eval_w",
    "eval_batch",
    "voigt_function",
    "voigt_profile",
]

_PI = math.pi
_PI2 = math.pi * math.pi
_SQRT_PI = math.sqrt(math.pi)
_SQRT_LN2 = math.sqrt(math.log(2.0))

#: Guard radius: inside |tau_m*z| < GUARD_RADIUS or |tau_m*z -+ n*pi| < GUARD_RADIUS
#: the affected 0/0 term of the production form is replaced by a 4th-order
#: truncated series of the ratio about the singular point.
GUARD_RADIUS = 1e-6

#: Below doppler_hwhm < LORENTZ_FALLBACK_RATIO * lorentz_hwhm the profile
#: degenerates to a closed-form Lorentzian (the dimensionless y would overflow).
LORENTZ_FALLBACK_RATIO = 1e-8


@dataclass(frozen=True)
class ApproxParams:
    """Fourier-series parameters: period ``tau_m``, term count ``n_terms``
    and the precomputed coefficient table ``a_0..a_N`` (immutable, safe to
    share across threads)."""

    tau_m: float
    n_terms: int
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        tau = self.tau_m
        if not (math.isfinite(tau) and tau > 0.0):
            raise DomainError(f"tau_m must be finite and > 0, got {tau!r}")
        if self.n_terms < 1:
            raise DomainError(f"n_terms must be >= 1, got {self.n_terms!r}")
        a = np.asarray(self.coefficients, dtype=np.float64)
        a.setflags(write=False)
        object.__setattr__(self, "coefficients", a)
        if a.shape != (self.n_terms + 1,):
            raise DomainError(
                f"coefficient table must have n_terms + 1 = {self.n_terms + 1} "
                f"entries, got {a.shape}"
            )
        if not (a > 0.0).all():
            raise DomainError("all coefficients must be > 0 (n_terms too large "
                              "for tau_m at binary64 precision?)")
        if not (np.diff(a) < 0.0).all():
            raise DomainError("coefficients must decrease strictly with n")
        a0_ref = 2.0 * _SQRT_PI / tau
        if abs(a[0] - a0_ref) > np.spacing(a0_ref):
            raise DomainError("a_0 must equal 2*sqrt(pi)/tau_m to within 1 ulp")


def fourier_coefficients(tau_m: float, n_terms: int) -> ApproxParams:
    """Build the coefficient table a_n = (2*sqrt(pi)/tau_m)*exp(-n^2 pi^2/tau_m^2)
    for n = 0..n_terms.

    Raises
    ------
    DomainError
        If ``tau_m <= 0``, ``n_terms < 1``, or the requested tail coefficients
        underflow to zero in binary64.
    """
    if not (isinstance(n_terms, (int, np.integer)) and not isinstance(n_terms, bool)):
        raise DomainError(f"n_terms must be an integer, got {n_terms!r}")
    tau_m = float(tau_m)
    if not (math.isfinite(tau_m) and tau_m > 0.0):
        raise DomainError(f"tau_m must be finite and > 0, got {tau_m!r}")
    if n_terms < 1:
        raise DomainError(f"n_terms must be >= 1, got {n_terms!r}")
    n = np.arange(n_terms + 1, dtype=np.float64)
    a0 = 2.0 * _SQRT_PI / tau_m
    a = a0 * np.exp(-(n * n) * (_PI2 / (tau_m * tau_m)))
    return ApproxParams(tau_m=tau_m, n_terms=int(n_terms), coefficients=a)


class Preset(Enum):
    """Named (tau_m, n_terms) configurations.

    HIGH (12, 23) preserves full binary64 accuracy and is the default
    everywhere a preset is optional; FAST (9, 12) trades accuracy for speed.
    """

    HIGH = (12.0, 23)
    FAST = (9.0, 12)

    @property
    def params(self) -> ApproxParams:
        return _preset_params(self.name)


@lru_cache(maxsize=None)
def _preset_params(name: str) -> ApproxParams:
    tau_m, n_terms = Preset[name].value
    return fourier_coefficients(tau_m, n_terms)


def _resolve_params(params) -> ApproxParams:
    if params is None:
        return Preset.HIGH.params
    if isinstance(params, Preset):
        return params.params
    if isinstance(params, ApproxParams):
        return params
    raise TypeError(f"expected ApproxParams, Preset or None, got {type(params)!r}")


@dataclass(frozen=True)
class VoigtLine:
    """Spectral line: center and integrated strength plus the Doppler
    (Gaussian) and Lorentz half-widths at half-maximum, all in the same
    wavenumber units."""

    center: float
    strength: float
    doppler_hwhm: float
    lorentz_hwhm: float

    def __post_init__(self):
        for name in ("center", "strength", "doppler_hwhm", "lorentz_hwhm"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
        if self.strength < 0.0:
            raise DomainError(f"strength must be >= 0, got {self.strength!r}")
        if self.doppler_hwhm <= 0.0:
            raise DomainError(
                f"doppler_hwhm must be > 0, got {self.doppler_hwhm!r} "
                "(pure Lorentzian lines are reached via the fallback, not y -> inf)"
            )
        if self.lorentz_hwhm < 0.0:
            raise DomainError(f"lorentz_hwhm must be >= 0, got {self.lorentz_hwhm!r}")


# ---------------------------------------------------------------------------
# input handling
# ---------------------------------------------------------------------------

def _as_complex_array(zs) -> np.ndarray:
    z = np.asarray(zs, dtype=np.complex128)
    return z


def _check_finite(z: np.ndarray) -> None:
    bad = ~np.isfinite(z)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise DomainError(f"non-finite input at index {i}: {z.ravel()[i]!r}", index=i)


def _check_scalar(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"argument must be finite, got {z!r}")
    return z


# ---------------------------------------------------------------------------
# production kernel (single-exponential form)
# ---------------------------------------------------------------------------

def _series_ratio_p4(w: np.ndarray) -> np.ndarray:
    """(exp(w) - 1)/w truncated at 4th order; |w| < 1e-6 keeps the
    truncation error below 1e-32."""
    return 1.0 + w * (0.5 + w * (1.0 / 6.0 + w * (1.0 / 24.0 + w * (1.0 / 120.0))))


# Aliased complex multiplies (x *= y, y complex) are avoided in all kernels:
# numpy routes the aliased size-1 case through a non-FMA scalar loop whose
# last bit can differ from the vector path, which would break the bitwise
# batch == scalar-sweep contract.  Non-aliased multiplies, divisions and
# additions are position-stable.

def _w_upper_plain(A, B, tau, a, n_terms):
    """Rational-term loop of the single-exponential form.  Denominators may
    vanish inside the guard band; callers overwrite those elements.
    A and B are preserved (the guard fix-up re-reads them)."""
    D = A * A                      # becomes n^2 pi^2 - A^2, updated in place
    np.negative(D, out=D)
    D += _PI2
    acc = np.zeros_like(A)
    T = np.empty_like(A)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for n in range(1, n_terms + 1):
            if n > 1:
                D += (2 * n - 1) * _PI2
            an = a[n]
            np.multiply(B, -an if n & 1 else an, out=T)   # a_n * (-1)^n * B
            T -= an
            T /= D
            acc += T
        np.multiply(acc, A, out=T)                        # A * sum
        np.multiply(T, 1j * (tau / _SQRT_PI), out=acc)
        np.subtract(1.0, B, out=T)                        # i*(1 - B)/A
        T /= A
        np.multiply(T, 1j, out=D)
        acc += D
    return acc


def _w_upper_guarded(A, B, tau, a, n_terms):
    """Same operation order as :func:`_w_upper_plain`, with every term whose
    denominator falls inside the guard radius replaced by its series limit.
    Bitwise identical to the plain loop for unguarded elements."""
    D = A * A
    np.negative(D, out=D)
    D += _PI2
    acc = np.zeros_like(A)
    T = np.empty_like(A)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for n in range(1, n_terms + 1):
            if n > 1:
                D += (2 * n - 1) * _PI2
            an = a[n]
            np.multiply(B, -an if n & 1 else an, out=T)
            T -= an
            T /= D
            npi = n * _PI
            for s in (1.0, -1.0):
                u = A - s * npi
                m = np.abs(u) < GUARD_RADIUS
                if m.any():
                    um = u[m]
                    # a_n*((-1)^n e^{iA} - 1)/(n^2 pi^2 - A^2)
                    #   == -s*a_n*(e^{iu} - 1)/u / (2 n pi + s u),  u = A - s n pi
                    T[m] = (-s * an * 1j) * _series_ratio_p4(1j * um) / (2.0 * npi + s * um)
            acc += T
        np.multiply(acc, A, out=T)
        np.multiply(T, 1j * (tau / _SQRT_PI), out=acc)
        np.subtract(1.0, B, out=T)
        T /= A
        np.multiply(T, 1j, out=D)
        m0 = np.abs(A) < GUARD_RADIUS
        if m0.any():
            D[m0] = _series_ratio_p4(1j * A[m0])          # i*(1-e^{iA})/A limit
        acc += D
    return acc


def _w_upper_kernel(z: np.ndarray, params: ApproxParams) -> np.ndarray:
    """Single-exponential form over the closed upper half-plane (1-D input)."""
    tau = params.tau_m
    a = params.coefficients
    n_terms = params.n_terms
    A = z * tau
    B = np.exp(1j * A)             # the only transcendental pass
    # |u| >= |Im u| = |Im A|: guards can only trigger where Im A is tiny.
    near = np.abs(A.imag) < GUARD_RADIUS
    if not near.any():
        return _w_upper_plain(A, B, tau, a, n_terms)
    if near.all():
        return _w_upper_guarded(A, B, tau, a, n_terms)
    w = _w_upper_plain(A, B, tau, a, n_terms)
    idx = np.flatnonzero(near)
    w[idx] = _w_upper_guarded(A[idx], B[idx], tau, a, n_terms)
    return w


def _kernel_chunked(z: np.ndarray, params: ApproxParams, workers: int) -> np.ndarray:
    if workers <= 1 or z.size < 2:
        return _w_upper_kernel(z, params)
    nw = min(int(workers), z.size)
    bounds = np.linspace(0, z.size, nw + 1, dtype=np.intp)
    out = np.empty_like(z)

    def run(lo, hi):
        out[lo:hi] = _w_upper_kernel(z[lo:hi], params)

    with ThreadPoolExecutor(max_workers=nw) as ex:
        futures = [ex.submit(run, int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:])]
        for f in futures:
            f.result()
    return out


# ---------------------------------------------------------------------------
# public evaluators
# ---------------------------------------------------------------------------

def eval_eq3(z, params=None) -> complex:
    """Faddeeva function on the closed upper half-plane via the
    single-exponential production form.

    Removable singularities (tau_m*z near 0 or near +-n*pi) are evaluated by
    guarded series limits, so any finite z with Im z >= 0 yields a finite value.

    Raises
    ------
    DomainError
        If z is non-finite or Im z < 0.
    """
    z = _check_scalar(z)
    if z.imag < 0.0:
        raise DomainError(f"eval_eq3 requires Im z >= 0, got {z!r}")
    params = _resolve_params(params)
    return complex(_w_upper_kernel(np.array([z], dtype=np.complex128), params)[0])


def eval_eq3_batch(zs, params=None, workers: int = 1) -> np.ndarray:
    """Vectorized :func:`eval_eq3`.  Output is bitwise identical to a scalar
    sweep and independent of ``workers`` or chunk boundaries."""
    params = _resolve_params(params)
    z = _as_complex_array(zs)
    flat = z.ravel()
    _check_finite(flat)
    neg = flat.imag < 0.0
    if neg.any():
        i = int(np.flatnonzero(neg)[0])
        raise DomainError(f"eval_eq3 requires Im z >= 0; index {i} is {flat[i]!r}",
                          index=i)
    return _kernel_chunked(flat, params, workers).reshape(z.shape)


def eval_eq1(z, params=None) -> complex:
    """Faddeeva function via the raw two-sided series, term by term as
    written, one exponential pair per term.

    This is the unguarded reference form: arguments with any denominator
    within :data:`GUARD_RADIUS` of zero (tau_m*z near 0 or near +-n*pi) are
    rejected rather than patched.

    Raises
    ------
    DomainError
        If z is non-finite, Im z < 0, or tau_m*z is within the guard radius
        of a removable singularity.
    """
    z = _check_scalar(z)
    if z.imag < 0.0:
        raise DomainError(f"eval_eq1 requires Im z >= 0, got {z!r}")
    params = _resolve_params(params)
    return complex(_eq1_kernel(np.array([z], dtype=np.complex128), params)[0])


def eval_eq1_batch(zs, params=None) -> np.ndarray:
    """Vectorized :func:`eval_eq1`."""
    params = _resolve_params(params)
    z = _as_complex_array(zs)
    flat = z.ravel()
    _check_finite(flat)
    neg = flat.imag < 0.0
    if neg.any():
        i = int(np.flatnonzero(neg)[0])
        raise DomainError(f"eval_eq1 requires Im z >= 0; index {i} is {flat[i]!r}",
                          index=i)
    return _eq1_kernel(flat, params).reshape(z.shape)


def _eq1_reject_singular(A: np.ndarray, n_terms: int) -> None:
    near = np.abs(A.imag) < GUARD_RADIUS
    if not near.any():
        return
    idx = np.flatnonzero(near)
    Ac = A[idx]
    r = np.abs(Ac)
    small = r < GUARD_RADIUS
    if small.any():
        i = int(idx[np.flatnonzero(small)[0]])
        raise DomainError(
            f"eval_eq1 denominator below guard radius at index {i}: |tau_m*z| < "
            f"{GUARD_RADIUS}", index=i)
    k = np.rint(np.abs(Ac.real) / _PI)
    s = np.where(Ac.real >= 0.0, 1.0, -1.0)
    hit = (k >= 1) & (k <= n_terms) & (np.abs(Ac - s * k * _PI) < GUARD_RADIUS)
    if hit.any():
        i = int(idx[np.flatnonzero(hit)[0]])
        raise DomainError(
            f"eval_eq1 denominator below guard radius at index {i}: tau_m*z within "
            f"{GUARD_RADIUS} of a multiple of pi", index=i)


def _eq1_kernel(z: np.ndarray, params: ApproxParams) -> np.ndarray:
    tau = params.tau_m
    a = params.coefficients
    A = z * tau
    _eq1_reject_singular(A, params.n_terms)
    S = np.zeros_like(A)
    for n in range(params.n_terms + 1):
        an_tau = a[n] * tau
        npi = n * _PI
        E_plus = np.exp(1j * (npi + A))
        E_minus = np.exp(1j * (A - npi))
        S += an_tau * ((1.0 - E_plus) / (npi + A) - (1.0 - E_minus) / (npi - A))
    S -= a[0] * (1.0 - np.exp(1j * A)) / z
    return S * (1j / (2.0 * _SQRT_PI))


def eval_w(z, params=None) -> complex:
    """Faddeeva function on the full complex plane.

    Im z >= 0 evaluates the production form directly; Im z < 0 uses the
    exact reflection w(z) = 2*exp(-z^2) - w(-z).

    Raises
    ------
    DomainError
        If z is non-finite.
    ReflectionOverflowError
        If exp(-z^2) exceeds the binary64 range (large |Im z| below the axis):
        the lower half-plane value is not representable.
    """
    z = _check_scalar(z)
    params = _resolve_params(params)
    return complex(eval_batch(np.array([z], dtype=np.complex128), params)[0])


def eval_batch(zs, params=None, workers: int = 1) -> np.ndarray:
    """Vectorized :func:`eval_w` over an ordered collection.

    Internally materializes the three work arrays A = tau_m*z, B = exp(i*A),
    C = A*A once each; B is the only transcendental pass over the data.
    Output order matches input order and is bitwise identical to a scalar
    sweep regardless of ``workers`` or internal chunk boundaries.

    Raises
    ------
    DomainError
        Non-finite element (reported with its index).
    ReflectionOverflowError
        exp(-z^2) overflow for a lower half-plane element (with its index).
    """
    params = _resolve_params(params)
    z = _as_complex_array(zs)
    flat = z.ravel()
    if flat.size == 0:
        return np.empty_like(z)
    _check_finite(flat)
    neg = flat.imag < 0.0
    if not neg.any():
        return _kernel_chunked(flat, params, workers).reshape(z.shape)
    zu = np.where(neg, -flat, flat)
    w = _kernel_chunked(zu, params, workers)
    idx = np.flatnonzero(neg)
    zn = flat[idx]
    with np.errstate(over="ignore", under="ignore"):
        E = np.exp(-(zn * zn))
    bad = ~np.isfinite(E)
    if bad.any():
        i = int(idx[np.flatnonzero(bad)[0]])
        raise ReflectionOverflowError(
            f"exp(-z^2) overflows binary64 at index {i} (z = {flat[i]!r}); "
            "lower half-plane value not representable", index=i)
    w[idx] = 2.0 * E - w[idx]
    return w.reshape(z.shape)


# ---------------------------------------------------------------------------
# Voigt function and line profile
# ---------------------------------------------------------------------------

def voigt_function(x: float, y: float, params=None) -> float:
    """Voigt function K(x, y) = Re w(x + i*y) for y >= 0."""
    x = float(x)
    y = float(y)
    if not (math.isfinite(x) and math.isfinite(y)):
        raise DomainError(f"voigt_function arguments must be finite, got {(x, y)!r}")
    if y < 0.0:
        raise DomainError(f"voigt_function requires y >= 0, got y = {y!r}")
    params = _resolve_params(params)
    return float(_w_upper_kernel(np.array([complex(x, y)]), params)[0].real)


def voigt_profile(grid, line: VoigtLine, params=None) -> np.ndarray:
    """Voigt profile of ``line`` sampled on ``grid`` (wavenumber ordinates).

    The profile is strength*sqrt(ln2/pi)/doppler_hwhm * K(x, y) with
    x = sqrt(ln2)*(nu - center)/doppler_hwhm and
    y = sqrt(ln2)*lorentz_hwhm/doppler_hwhm, integrating to ``strength``.
    Lines with doppler_hwhm below ``LORENTZ_FALLBACK_RATIO * lorentz_hwhm``
    use the closed-form Lorentzian instead.
    """
    if not isinstance(line, VoigtLine):
        raise TypeError(f"expected VoigtLine, got {type(line)!r}")
    nu = np.asarray(grid, dtype=np.float64)
    if not np.isfinite(nu).all():
        raise DomainError("profile grid must be finite")
    params = _resolve_params(params)
    if line.doppler_hwhm < LORENTZ_FALLBACK_RATIO * line.lorentz_hwhm:
        g = line.lorentz_hwhm
        d = nu - line.center
        return line.strength * g / (_PI * (d * d + g * g))
    x = (_SQRT_LN2 / line.doppler_hwhm) * (nu - line.center)
    y = _SQRT_LN2 * line.lorentz_hwhm / line.doppler_hwhm
    k = eval_batch(x + 1j * y, params).real
    return (line.strength * _SQRT_LN2 / (line.doppler_hwhm * _SQRT_PI)) * k
