"""Majorant/minorant trigonometric polynomials of an interval indicator.

For the symmetric torus interval [-w, w] and degree K, the classical
construction (Selberg's, via Vaaler's approximation to the sawtooth;
see Vaaler, Bull. AMS 12 (1985), and Montgomery, "Ten Lectures", Ch. 1)
yields real trigonometric polynomials f- <= indicator <= f+ with

    c_0   = 2w +- 1/(K+1)                    (exactly, by assembly)
    |c_j| <= min(2w, 1/(pi |j|)) + 1/(K+1)   for 0 < |j| <= K.

The sawtooth psi(x) = {x} - 1/2 has Fourier coefficients -1/(2 pi i j);
Vaaler's polynomial damps them by the multiplier

    Jhat(t) = pi t (1 - |t|) cot(pi t) + |t|,   |t| < 1,

at t = j/(K+1), and satisfies |V(x) - psi(x)| <= F(x)/(2K+2) with F the
degree-K Fejer kernel.  Writing the interval indicator as
(b-a) + psi(x-b) - psi(x-a) and adding/subtracting the Fejer correction
at both endpoints gives the sandwich.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateWindow, InvalidDegree, InvalidSpec, MismatchedWindows

DEFAULT_T = 2
DEGREE_CAP = 10**4


@dataclass(frozen=True)
class SelbergPolynomial:
    """Real trigonometric polynomial sum_{|j|<=K} c_j e(jx).

    coeffs[K + j] holds c_j for j = -K..K; the interval is symmetric
    about 0, so all c_j are real with c_{-j} = c_j.
    """

    sign: str  # "plus" (majorant) or "minus" (minorant)
    K: int
    half_width: float
    coeffs: np.ndarray  # complex, shape (2K+1,)
    t_multiplier: int | None = None

    def coeff(self, j: int) -> complex:
        if abs(j) > self.K:
            return 0.0 + 0.0j
        return complex(self.coeffs[self.K + j])


@dataclass(frozen=True)
class SandwichReport:
    half_width: float
    K_minus: int
    K_plus: int
    grid_size: int
    max_violation_minus: float  # max of (minus - indicator)
    max_violation_plus: float  # max of (indicator - plus)
    passed: bool

    def to_dict(self) -> dict:
        return {
            "half_width": self.half_width,
            "K_minus": self.K_minus,
            "K_plus": self.K_plus,
            "grid_size": self.grid_size,
            "max_violation_minus": self.max_violation_minus,
            "max_violation_plus": self.max_violation_plus,
            "passed": self.passed,
        }


def _vaaler_multiplier(t: np.ndarray) -> np.ndarray:
    """Jhat(t) = pi t (1-|t|) cot(pi t) + |t| on (-1, 1); Jhat(0) = 1."""
    t = np.asarray(t, dtype=np.float64)
    out = np.ones_like(t)
    nz = np.abs(t) > 1e-9
    tt = t[nz]
    out[nz] = np.pi * tt * (1.0 - np.abs(tt)) / np.tan(np.pi * tt) + np.abs(tt)
    return out


def build_selberg(s: float, Delta: float, K: int, sign: str) -> SelbergPolynomial:
    """Majorant ("plus") or minorant ("minus") of the indicator of
    [-s/Delta, s/Delta] on the torus, degree K."""
    if sign not in ("plus", "minus"):
        raise InvalidSpec(f"sign must be 'plus' or 'minus', got {sign!r}")
    if K < 1:
        raise InvalidDegree(f"degree K must be >= 1, got {K}")
    w = float(s) / float(Delta)
    if not (0.0 < w < 0.5):
        raise DegenerateWindow(f"half-width s/Delta = {w} outside (0, 1/2)")
    sgn = 1.0 if sign == "plus" else -1.0
    j = np.arange(1, K + 1, dtype=np.float64)
    indicator_hat = np.sin(2.0 * np.pi * j * w) / (np.pi * j)
    sawtooth_part = indicator_hat * _vaaler_multiplier(j / (K + 1.0))
    fejer_part = (1.0 / (K + 1.0)) * (1.0 - j / (K + 1.0)) * np.cos(2.0 * np.pi * j * w)
    positive = sawtooth_part + sgn * fejer_part
    coeffs = np.empty(2 * K + 1, dtype=np.complex128)
    coeffs[K] = 2.0 * w + sgn / (K + 1.0)  # assembled, not integrated
    coeffs[K + 1 :] = positive
    coeffs[:K] = positive[::-1]
    return SelbergPolynomial(sign=sign, K=K, half_width=w, coeffs=coeffs)


def build_pair(s: float, Delta: float, K: int):
    return build_selberg(s, Delta, K, "minus"), build_selberg(s, Delta, K, "plus")


def degree_for(N: int, r: int, t: int = DEFAULT_T) -> int:
    """Default degree t * N^r, capped for desk-scale evaluation cost."""
    return min(t * N**r, DEGREE_CAP)


def eval_trig(poly: SelbergPolynomial, x) -> float | np.ndarray:
    """sum_{|j|<=K} c_j e(jx); the imaginary residue is checked to be
    below 1e-12 and discarded."""
    x = np.asarray(x, dtype=np.float64)
    scalar = x.ndim == 0
    xv = np.atleast_1d(x)
    j = np.arange(-poly.K, poly.K + 1, dtype=np.float64)
    phase = np.exp(2j * np.pi * np.outer(xv, j))
    val = phase @ poly.coeffs
    residue = float(np.max(np.abs(val.imag), initial=0.0))
    if residue > 1e-12:
        raise InvalidSpec(f"imaginary residue {residue:.3e} exceeds 1e-12")
    out = val.real
    return float(out[0]) if scalar else out


def eval_on_grid(poly: SelbergPolynomial, grid_size: int) -> np.ndarray:
    """Values at x = m/grid_size via FFT; exact placement requires
    grid_size > 2K."""
    if grid_size <= 2 * poly.K:
        raise InvalidSpec(f"grid_size {grid_size} must exceed 2K = {2 * poly.K}")
    spectrum = np.zeros(grid_size, dtype=np.complex128)
    js = np.arange(-poly.K, poly.K + 1)
    spectrum[js % grid_size] += poly.coeffs
    vals = np.fft.ifft(spectrum) * grid_size
    return vals.real


def indicator(x, w: float) -> np.ndarray:
    """Closed-window indicator: 1 where distance to the nearest integer
    is <= w."""
    x = np.asarray(x, dtype=np.float64)
    return (np.abs(x - np.round(x)) <= w).astype(np.float64)


def verify_sandwich(
    minus: SelbergPolynomial,
    plus: SelbergPolynomial,
    grid_size: int = 10**5,
    tolerance: float = 1e-12,
) -> SandwichReport:
    """Check minus <= indicator <= plus on an equispaced grid plus the
    window-boundary-adjacent points."""
    if minus.half_width != plus.half_width:
        raise MismatchedWindows(
            f"half-widths differ: {minus.half_width} vs {plus.half_width}"
        )
    w = plus.half_width
    grid = np.arange(grid_size, dtype=np.float64) / grid_size
    eps = 1e-9
    extra = np.array([w - eps, w + eps, 1.0 - w - eps, 1.0 - w + eps, w, 1.0 - w])
    ind_grid = indicator(grid, w)
    ind_extra = indicator(extra, w)
    viol_minus = max(
        float(np.max(eval_on_grid(minus, grid_size) - ind_grid)),
        float(np.max(eval_trig(minus, extra) - ind_extra)),
    )
    viol_plus = max(
        float(np.max(ind_grid - eval_on_grid(plus, grid_size))),
        float(np.max(ind_extra - eval_trig(plus, extra))),
    )
    return SandwichReport(
        half_width=w,
        K_minus=minus.K,
        K_plus=plus.K,
        grid_size=grid_size,
        max_violation_minus=viol_minus,
        max_violation_plus=viol_plus,
        passed=viol_minus <= tolerance and viol_plus <= tolerance,
    )


def coeffs_to_csv(poly: SelbergPolynomial) -> str:
    """Coefficient table as CSV text with header j,re,im."""
    lines = ["j,re,im"]
    for j in range(-poly.K, poly.K + 1):
        c = poly.coeff(j)
        lines.append(f"{j},{c.real!r},{c.imag!r}")
    return "\n".join(lines) + "\n"
