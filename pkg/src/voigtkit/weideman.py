"""Rational approximation of w(z) after Weideman.

Implements the method of J.A.C. Weideman, "Computation of the complex error
function", SIAM J. Numer. Anal. 31 (1994) 1497-1518: sample
f(t) = exp(-t^2)*(L^2 + t^2) at t = L*tan(theta/2) on a uniform theta grid,
take the real discrete-Fourier cosine coefficients, and evaluate w as a
polynomial in the Moebius variable Z = (L + i*z)/(L - i*z).

Per-element cost is a fixed-length Horner recurrence, independent of z,
which makes this the standard fast baseline for speed/accuracy comparisons
against the Fourier-series evaluator.  Batch evaluation uses the same
in-place array discipline as the core kernel so timing comparisons isolate
algorithmic cost rather than memory strategy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError

__all__ = ["WeidemanCoeffs", "weideman_coefficients", "weideman_w", "weideman_batch"]

_SQRT_PI = math.sqrt(math.pi)

#: Term count used when no degree is given; the customary configuration,
#: good to ~1e-6 relative over the upper half-plane.
DEFAULT_DEGREE = 16


@dataclass(frozen=True)
class WeidemanCoeffs:
    """Method parameters: term count ``degree``, scale L = sqrt(degree/sqrt(2))
    and the ``degree`` polynomial coefficients, highest degree first."""

    degree: int
    l_param: float
    poly: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.degree < 4 or self.degree % 2:
            raise DomainError(f"degree must be an even integer >= 4, got {self.degree!r}")
        l_ref = math.sqrt(self.degree / math.sqrt(2.0))
        if abs(self.l_param - l_ref) > np.spacing(l_ref):
            raise DomainError("l_param must equal sqrt(degree/sqrt(2)) to within 1 ulp")
        p = np.asarray(self.poly, dtype=np.float64)
        p.setflags(write=False)
        object.__setattr__(self, "poly", p)
        if p.shape != (self.degree,):
            raise DomainError(f"poly must have exactly {self.degree} entries, got {p.shape}")
        if not np.isfinite(p).all():
            raise DomainError("poly entries must be finite")


def weideman_coefficients(degree: int = DEFAULT_DEGREE) -> WeidemanCoeffs:
    """Compute the polynomial coefficients for the given term count.

    Sampling grid, transform length and coefficient ordering follow the
    published code: theta_k = k*pi/m for k = -m+1..m-1 with m = 2*degree,
    a zero-padded endpoint, a length-2m FFT scaled by 1/(2m), and the
    ``degree`` coefficients reversed for Horner evaluation.  The transform of
    the real, even sample vector is real up to roundoff; the imaginary
    residue is discarded after a sanity bound.

    Raises
    ------
    DomainError
        If degree is odd or below 4.
    """
    if int(degree) != degree or degree < 4 or degree % 2:
        raise DomainError(f"degree must be an even integer >= 4, got {degree!r}")
    degree = int(degree)
    m = 2 * degree
    m2 = 2 * m
    k = np.arange(-m + 1, m)
    l_param = math.sqrt(degree / math.sqrt(2.0))
    theta = k * (np.pi / m)
    t = l_param * np.tan(0.5 * theta)
    f = np.empty(m2, dtype=np.float64)
    f[0] = 0.0
    f[1:] = np.exp(-t * t) * (l_param * l_param + t * t)
    spectrum = np.fft.fft(np.fft.fftshift(f)) / m2
    window = spectrum[1:degree + 1]
    residue = float(np.abs(window.imag).max())
    if residue > 1e-13:
        raise DomainError(
            f"transform imaginary residue {residue:.3e} exceeds 1e-13; "
            "sampling grid is corrupted")
    poly = window.real[::-1].copy()
    return WeidemanCoeffs(degree=degree, l_param=l_param, poly=poly)


def weideman_w(z, coeffs: WeidemanCoeffs | None = None) -> complex:
    """w(z) on the open upper half-plane via the rational approximation:
    Z = (L + i*z)/(L - i*z), p = Horner(poly, Z),
    w = 2*p/(L - i*z)^2 + (1/sqrt(pi))/(L - i*z).

    Raises
    ------
    DomainError
        If Im z <= 0 (the method is derived for the open upper half-plane).
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"argument must be finite, got {z!r}")
    if z.imag <= 0.0:
        raise DomainError(f"weideman_w requires Im z > 0, got {z!r}")
    coeffs = coeffs if coeffs is not None else _default_coeffs()
    return complex(_weideman_kernel(np.array([z], dtype=np.complex128), coeffs)[0])


def weideman_batch(zs, coeffs: WeidemanCoeffs | None = None) -> np.ndarray:
    """Vectorized :func:`weideman_w`; bitwise identical to a scalar sweep."""
    coeffs = coeffs if coeffs is not None else _default_coeffs()
    z = np.asarray(zs, dtype=np.complex128)
    flat = z.ravel()
    bad = ~np.isfinite(flat)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise DomainError(f"non-finite input at index {i}: {flat[i]!r}", index=i)
    low = flat.imag <= 0.0
    if low.any():
        i = int(np.flatnonzero(low)[0])
        raise DomainError(f"weideman_w requires Im z > 0; index {i} is {flat[i]!r}",
                          index=i)
    return _weideman_kernel(flat, coeffs).reshape(z.shape)


_DEFAULT_COEFFS = None


def _default_coeffs() -> WeidemanCoeffs:
    global _DEFAULT_COEFFS
    if _DEFAULT_COEFFS is None:
        _DEFAULT_COEFFS = weideman_coefficients(DEFAULT_DEGREE)
    return _DEFAULT_COEFFS


def _weideman_kernel(z: np.ndarray, coeffs: WeidemanCoeffs) -> np.ndarray:
    # aliased complex multiplies avoided (numpy's size-1 aliased path can
    # round differently); the Horner recurrence ping-pongs two buffers
    L = coeffs.l_param
    poly = coeffs.poly
    iz = 1j * z
    denom = L - iz                      # L - i*z, reused for both closing terms
    Z = L + iz
    Z /= denom
    p = np.full_like(z, poly[0])
    q = np.empty_like(z)
    for c in poly[1:]:
        np.multiply(p, Z, out=q)
        q += c
        p, q = q, p
    p *= 2.0
    p /= denom
    p /= denom
    np.divide(1.0 / _SQRT_PI, denom, out=q)
    p += q
    return p
