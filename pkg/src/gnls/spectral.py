"""Unitary Fourier transforms, multipliers, and dealiased cubic products.

Normalization is unitary with respect to the torus quadrature: for a field
``f`` with physical samples ``f_j`` and spectral coefficients ``fh_k``,

    sum_j |f_j|^2 * (L/N)^d  ==  sum_k |fh_k|^2

so L2-type norms read directly off the coefficients.  With this convention a
plane wave ``A*exp(i k.x)`` carries the single coefficient ``A * L^(d/2)``,
independent of N, which is what makes zero-padding between grids a pure
index embedding.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

import numpy as np

from .errors import MultiplierOverflowError, NonFiniteFieldError
from .grid import Field, FourierGrid, PHYSICAL, SPECTRAL

#: exp(x) stays finite in double precision with margin up to this exponent
OVERFLOW_EXPONENT = 600.0


def _forward_factor(grid: FourierGrid) -> float:
    return (np.sqrt(grid.L) / grid.N) ** grid.d


def forward_transform(f: Field) -> Field:
    """Physical samples -> unitary spectral coefficients."""
    if not f.is_physical:
        raise ValueError("forward_transform expects a physical-space field")
    coeffs = np.fft.fftn(f.values) * _forward_factor(f.grid)
    return Field(f.grid, coeffs, rep=SPECTRAL, t=f.t)


def inverse_transform(f: Field) -> Field:
    """Unitary spectral coefficients -> physical samples."""
    if not f.is_spectral:
        raise ValueError("inverse_transform expects a spectral-space field")
    values = np.fft.ifftn(f.values) / _forward_factor(f.grid)
    return Field(f.grid, values, rep=PHYSICAL, t=f.t)


def to_spectral(f: Field) -> Field:
    return f if f.is_spectral else forward_transform(f)


def to_physical(f: Field) -> Field:
    return f if f.is_physical else inverse_transform(f)


# ---------------------------------------------------------------------------
# Multipliers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Multiplier:
    """A scalar Fourier symbol evaluated on the wavenumber lattice.

    ``symbol`` maps |xi| -> weight for the radial symbols used here; the
    free propagator is also radial in |xi|^2 so a single-argument callable
    of |xi| covers every named instance.  ``max_log_weight`` bounds
    log(weight) on a lattice with largest frequency ``xi_max`` and drives
    the overflow guard; ``zero_nyquist`` marks symbols that are odd (or
    derived from odd symbols) whose Nyquist mode has no sign partner.
    """

    name: str
    symbol: Callable[[np.ndarray], np.ndarray]
    max_log_weight: Callable[[float], float] = dc_field(default=lambda xi_max: 0.0)
    zero_nyquist: bool = False

    def weights(self, grid: FourierGrid) -> np.ndarray:
        if self.max_log_weight(grid.xi_max) > OVERFLOW_EXPONENT:
            raise MultiplierOverflowError(
                f"multiplier overflow: {self.name} exceeds exp({OVERFLOW_EXPONENT:g}) "
                f"at |xi|_max = {grid.xi_max:g}")
        w = self.symbol(grid.xi_abs)
        if not np.all(np.isfinite(w)):
            raise MultiplierOverflowError(
                f"multiplier overflow: {self.name} non-finite on lattice "
                f"(|xi|_max = {grid.xi_max:g})")
        return w


def exp_gevrey(sigma: float) -> Multiplier:
    """e^{sigma |xi|}; identity at sigma = 0."""
    return Multiplier(
        name=f"exp-gevrey(sigma={sigma:g})",
        symbol=lambda xi: np.exp(sigma * xi),
        max_log_weight=lambda xi_max: max(sigma, 0.0) * xi_max,
    )


def japanese_bracket(s: float) -> Multiplier:
    """<xi>^s with <xi> = sqrt(1 + |xi|^2); identity at s = 0."""
    return Multiplier(
        name=f"japanese-bracket(s={s:g})",
        symbol=lambda xi: (1.0 + xi * xi) ** (s / 2.0),
    )


def free_propagator(t: float) -> Multiplier:
    """e^{-i t |xi|^2}, the Schroedinger group symbol."""
    return Multiplier(
        name=f"free-propagator(t={t:g})",
        symbol=lambda xi: np.exp(-1j * t * xi * xi),
    )


def gradient_magnitude() -> Multiplier:
    """|xi|; derived from the odd symbol xi, so the Nyquist mode is zeroed."""
    return Multiplier(
        name="gradient-magnitude",
        symbol=lambda xi: xi,
        zero_nyquist=True,
    )


def apply_multiplier(f: Field, m: Multiplier) -> Field:
    """Coefficient-wise product of a spectral field with a symbol."""
    if not f.is_spectral:
        raise ValueError("apply_multiplier expects a spectral-space field")
    out = f.values * m.weights(f.grid)
    if m.zero_nyquist:
        out = np.where(f.grid.nyquist_mask, 0.0, out)
    return Field(f.grid, out, rep=SPECTRAL, t=f.t)


# ---------------------------------------------------------------------------
# Zero-padding and dealiased products
# ---------------------------------------------------------------------------

def _centered_slices(n_small: int, n_big: int, d: int):
    lo = (n_big - n_small) // 2
    return (slice(lo, lo + n_small),) * d


def pad_spectrum(f: Field, factor: int = 2) -> Field:
    """Embed spectral coefficients into a grid ``factor`` times as fine."""
    if not f.is_spectral:
        raise ValueError("pad_spectrum expects a spectral-space field")
    g = f.grid
    big = g.refined(factor)
    small_c = np.fft.fftshift(f.values)
    big_c = np.zeros(big.shape, dtype=np.complex128)
    big_c[_centered_slices(g.N, big.N, g.d)] = small_c
    return Field(big, np.fft.ifftshift(big_c), rep=SPECTRAL, t=f.t)


def truncate_spectrum(f: Field, grid: FourierGrid) -> Field:
    """Restrict spectral coefficients to the band of a coarser grid."""
    if not f.is_spectral:
        raise ValueError("truncate_spectrum expects a spectral-space field")
    big = f.grid
    if big.L != grid.L or big.d != grid.d or big.N < grid.N:
        raise ValueError("target grid must share the torus and be coarser")
    big_c = np.fft.fftshift(f.values)
    small_c = big_c[_centered_slices(grid.N, big.N, grid.d)]
    return Field(grid, np.fft.ifftshift(small_c), rep=SPECTRAL, t=f.t)


def dealiased_triple_product(f: Field, g: Field, h: Field,
                             conjugate: Sequence[bool] = (False, True, False)) -> Field:
    """Pointwise triple product with 2x zero-padding per axis.

    Each factor is optionally conjugated (default pattern u * conj(u) * u,
    i.e. |u|^2 u).  The product is formed on the doubled grid and truncated
    back, which reproduces the exact spectral convolution whenever the
    product's bandwidth fits the doubled band.
    """
    if not (f.grid == g.grid == h.grid):
        raise ValueError("dealiased_triple_product requires a common grid")
    fine = [to_physical(pad_spectrum(to_spectral(u))) for u in (f, g, h)]
    vals = [np.conj(u.values) if c else u.values
            for u, c in zip(fine, conjugate)]
    prod = vals[0] * vals[1] * vals[2]
    prod_spec = forward_transform(Field(fine[0].grid, prod, rep=PHYSICAL, t=f.t))
    return inverse_transform(truncate_spectrum(prod_spec, f.grid))


def l4_norm(u: Field, padded: bool = True) -> float:
    """||u||_{L^4} by quadrature on the 2x-padded grid.

    |u|^4 of a band-limited field is band-limited at four times the
    bandwidth; padding makes the quadrature exact up to truncation of the
    outer half of that band.  ``padded=False`` falls back to the naive
    collocation quadrature (aliased, but cheaper).
    """
    fine = to_physical(pad_spectrum(to_spectral(u))) if padded else to_physical(u)
    q = (fine.grid.L / fine.grid.N) ** fine.grid.d
    mag2 = fine.values.real ** 2 + fine.values.imag ** 2
    return float((np.sum(mag2 * mag2) * q) ** 0.25)
