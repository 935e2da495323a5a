"""Fourier-Floquet-Hill spectra of the linearization about a traveling wave.

For each Floquet exponent mu in (-1/2, 1/2] the bi-infinite Fourier
eigenproblem is truncated to |n| <= M and solved densely.  At zero
amplitude the matrix is diagonal (scalar) or 2x2-block (two-component),
so the spectrum reproduces the closed-form eigenvalues -i*Omega_l(n+mu)
exactly; finite amplitude adds Toeplitz convolution blocks built from the
wave's Fourier coefficients.

Bubbles (connected arcs of eigenvalues off the imaginary axis) are
detected by thresholding Re(lambda) and clustering in Im(lambda).
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .models import (ModelSpec, TravelingWave, SCALAR, CANONICAL,
                     NONCANONICAL_BW, ModelError, eval_Omega, spectrum_slice)
from .collisions import CollisionEvent

__all__ = [
    "TruncationWarning", "EigensolverError", "SpectrumSet", "Bubble",
    "MuGridSpec", "build_mu_grid", "zero_wave", "assemble", "spectrum_at",
    "full_spectrum", "detect_bubbles", "zero_amplitude_check",
    "spectrum_to_csv_rows",
]

BUBBLE_THRESHOLD = 1e-7
IM_CLUSTER_GAP = 1e-2


class TruncationWarning(UserWarning):
    pass


class EigensolverError(Exception):
    pass


def zero_wave(model: ModelSpec, c: float) -> TravelingWave:
    """The trivial wave at speed c (constant coefficients)."""
    return TravelingWave(model=model.name, c=c, coefficients=[0.0, 0.0])


@dataclass
class SpectrumSet:
    """Per-mu point spectra, sorted by mu then (Im, Re)."""
    model: str
    M: int
    amplitude: float
    slices: list[tuple[float, np.ndarray]] = field(default_factory=list)

    def all_points(self) -> tuple[np.ndarray, np.ndarray]:
        """Flattened (mu, lambda) arrays over all slices."""
        mus, lams = [], []
        for mu, vals in self.slices:
            mus.append(np.full(vals.size, mu))
            lams.append(vals)
        if not mus:
            return np.empty(0), np.empty(0, dtype=complex)
        return np.concatenate(mus), np.concatenate(lams)

    def max_real_part(self) -> float:
        _, lams = self.all_points()
        return float(np.max(lams.real)) if lams.size else 0.0


@dataclass
class Bubble:
    """One off-axis eigenvalue cluster."""
    center: complex
    max_growth: float
    mu_support: tuple[float, float]
    im_support: tuple[float, float]
    nearest_event: CollisionEvent | None = None
    event_distance: float | None = None

    def to_dict(self) -> dict:
        return {
            "center_re": self.center.real,
            "center_im": self.center.imag,
            "max_growth": self.max_growth,
            "mu_support": list(self.mu_support),
            "im_support": list(self.im_support),
            "nearest_event": (None if self.nearest_event is None
                              else self.nearest_event.to_dict()),
            "event_distance": self.event_distance,
        }


# --------------------------------------------------------------------------
# mu grids

@dataclass(frozen=True)
class MuGridSpec:
    """Uniform midpoint-avoiding grid plus optional refinement windows.

    ``windows`` lists mu centers; each gets ``window_width``-wide extra
    sampling at ``refine_factor`` times the base density.
    """
    count: int = 200
    windows: tuple[float, ...] = ()
    window_width: float = 5e-3
    refine_factor: int = 10


def build_mu_grid(spec: MuGridSpec) -> np.ndarray:
    """Strictly increasing mu values in (-1/2, 1/2)."""
    if spec.count < 1:
        raise ValueError("mu grid count must be >= 1")
    base = -0.5 + (np.arange(spec.count) + 0.5) / spec.count
    parts = [base]
    for center in spec.windows:
        n_local = max(3, int(round(2 * spec.window_width
                                   * spec.refine_factor * spec.count)))
        local = np.linspace(center - spec.window_width,
                            center + spec.window_width, n_local)
        parts.append(local[(local > -0.5) & (local < 0.5)])
    grid = np.unique(np.concatenate(parts))
    return grid


# --------------------------------------------------------------------------
# Assembly

def _exp_coeffs(wave: TravelingWave, length: int) -> np.ndarray:
    """Exponential Fourier coefficients u_hat(-length..length) of the wave."""
    out = np.zeros(2 * length + 1)
    a = np.asarray(wave.coefficients, dtype=float)
    out[length] = a[0]
    top = min(length, a.size - 1)
    out[length + 1:length + 1 + top] = a[1:top + 1] / 2.0
    out[length - top:length] = a[top:0:-1] / 2.0
    return out


def _check_truncation(wave: TravelingWave, M: int) -> None:
    a = np.asarray(wave.coefficients, dtype=float)
    tail = a[min(a.size - 1, 2 * M):]
    if tail.size and np.max(np.abs(tail)) > 1e-12:
        warnings.warn(
            f"wave coefficients do not decay below 1e-12 within the "
            f"truncation (M={M}); spectra may be under-resolved",
            TruncationWarning, stacklevel=3)


def _toeplitz(col_row: np.ndarray, M: int) -> np.ndarray:
    """T[n, m] = col_row[center + (n - m)] for n, m = -M..M."""
    center = (col_row.size - 1) // 2
    idx = np.arange(2 * M + 1)
    return col_row[center + idx[:, None] - idx[None, :]]


def assemble(model: ModelSpec, wave: TravelingWave, mu: float,
             M: int) -> np.ndarray:
    """Truncated Hill matrix for one Floquet exponent.

    Scalar models give a (2M+1)-dimensional matrix; two-component models
    give 2(2M+1), ordered as the two component blocks.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    _check_truncation(wave, M)
    c = wave.c
    ks = np.arange(-M, M + 1) + mu
    if model.kind == SCALAR:
        diag = np.array([-1j * eval_Omega(model, 1, float(k), c) for k in ks])
        A = np.diag(diag)
        if wave.amplitude != 0.0 or abs(wave.mean) > 0.0:
            # linearized nonlinearity sigma d/dx (U^p u)
            w_coeffs = _nonlinear_coeffs_scalar(model, wave, M)
            A = A + (-1j * ks)[:, None] * _toeplitz(w_coeffs, M)
        return A
    if model.kind == CANONICAL:
        if wave.amplitude != 0.0:
            raise ModelError(
                f"finite-amplitude spectra are not supported for canonical "
                f"model {model.name!r}")
        n = 2 * M + 1
        A = np.zeros((2 * n, 2 * n), dtype=complex)
        from .krein import hessian_symbol
        S = hessian_symbol(model, c)
        J = np.array([[0.0, 1.0], [-1.0, 0.0]])
        for i, k in enumerate(ks):
            blk = J @ S(float(k))
            A[i, i] = blk[0, 0]
            A[i, n + i] = blk[0, 1]
            A[n + i, i] = blk[1, 0]
            A[n + i, n + i] = blk[1, 1]
        return A
    # noncanonical-bw: first-order system (q, r) with q_t = c q_x + r_x,
    # r_t = c r_x + d/dx (c^2 * q + 2 alpha Q q)
    n = 2 * M + 1
    c2 = model.c2_symbol
    ik = 1j * ks
    A = np.zeros((2 * n, 2 * n), dtype=complex)
    A[:n, :n] = np.diag(ik * c)
    A[:n, n:] = np.diag(ik)
    lower = np.diag(np.array([c2(float(k)) for k in ks], dtype=complex))
    if wave.amplitude != 0.0 or abs(wave.mean) > 0.0:
        q_coeffs = _exp_coeffs(wave, 2 * M)
        lower = lower + 2.0 * model.alpha * _toeplitz(q_coeffs, M)
    A[n:, :n] = ik[:, None] * lower
    A[n:, n:] = np.diag(ik * c)
    return A


def _nonlinear_coeffs_scalar(model: ModelSpec, wave: TravelingWave,
                             M: int) -> np.ndarray:
    """Exponential coefficients of W = sigma U^p over shifts -2M..2M."""
    if model.power == 1:
        return model.sigma * _exp_coeffs(wave, 2 * M)
    ngrid = max(8 * M, 4 * (len(wave.coefficients) - 1), 64)
    x = 2.0 * math.pi * np.arange(ngrid) / ngrid
    w = model.sigma * wave.profile(x) ** model.power
    spec = np.fft.rfft(w) / ngrid
    out = np.zeros(4 * M + 1, dtype=float)
    top = min(2 * M, spec.size - 1)
    out[2 * M] = spec[0].real
    out[2 * M + 1:2 * M + 1 + top] = spec[1:top + 1].real
    out[2 * M - top:2 * M] = spec[top:0:-1].real
    return out


# --------------------------------------------------------------------------
# Spectra

def spectrum_at(model: ModelSpec, wave: TravelingWave, mu: float,
                M: int) -> np.ndarray:
    """All eigenvalues of the truncated Hill matrix, sorted by (Im, Re)."""
    A = assemble(model, wave, mu, M)
    try:
        vals = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver failed at mu = {mu!r}") from exc
    order = np.lexsort((vals.real, vals.imag))
    return vals[order]


def full_spectrum(model: ModelSpec, wave: TravelingWave,
                  grid: MuGridSpec | np.ndarray, M: int,
                  threads: int = 1) -> SpectrumSet:
    """Point spectra over a mu grid; slices are independent eigenproblems.

    Aggregation sorts by mu, so output is identical for any thread count.
    """
    mus = build_mu_grid(grid) if isinstance(grid, MuGridSpec) else np.asarray(grid)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(
                lambda mu: spectrum_at(model, wave, float(mu), M), mus))
    else:
        results = [spectrum_at(model, wave, float(mu), M) for mu in mus]
    slices = sorted(zip((float(m) for m in mus), results), key=lambda s: s[0])
    return SpectrumSet(model=model.name, M=M, amplitude=wave.amplitude,
                       slices=slices)


def spectrum_to_csv_rows(spectrum: SpectrumSet) -> list[tuple[float, float, float]]:
    """Rows (mu, re_lambda, im_lambda) in deterministic order."""
    rows = []
    for mu, vals in spectrum.slices:
        for lam in vals:
            rows.append((mu, float(lam.real), float(lam.imag)))
    return rows


# --------------------------------------------------------------------------
# Bubble detection

def detect_bubbles(spectrum: SpectrumSet, threshold: float = BUBBLE_THRESHOLD,
                   predictions: list[CollisionEvent] | None = None
                   ) -> list[Bubble]:
    """Cluster eigenvalues with Re(lambda) > threshold into bubbles.

    Single-linkage clustering with gap 1e-2 in Im(lambda); each bubble is
    linked to the prediction whose collision ordinate is nearest its center.
    """
    mus, lams = spectrum.all_points()
    mask = lams.real > threshold
    if not np.any(mask):
        return []
    mus, lams = mus[mask], lams[mask]
    order = np.argsort(lams.imag)
    mus, lams = mus[order], lams[order]
    breaks = np.flatnonzero(np.diff(lams.imag) > IM_CLUSTER_GAP)
    bounds = [0, *(breaks + 1), lams.size]
    bubbles = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        chunk_mu, chunk = mus[lo:hi], lams[lo:hi]
        top = int(np.argmax(chunk.real))
        bubble = Bubble(
            center=complex(chunk[top]),
            max_growth=float(chunk.real.max()),
            mu_support=(float(chunk_mu.min()), float(chunk_mu.max())),
            im_support=(float(chunk.imag.min()), float(chunk.imag.max())))
        if predictions:
            non_origin = [e for e in predictions if not e.at_origin]
            if non_origin:
                best = min(non_origin,
                           key=lambda e: abs(abs(e.lam.imag)
                                             - abs(bubble.center.imag)))
                bubble.nearest_event = best
                bubble.event_distance = abs(abs(best.lam.imag)
                                            - abs(bubble.center.imag))
        bubbles.append(bubble)
    return bubbles


# --------------------------------------------------------------------------
# Zero-amplitude consistency

def _hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    if a.size == 0 or b.size == 0:
        return math.inf if a.size != b.size else 0.0
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def zero_amplitude_check(model: ModelSpec, c: float, mu_samples, M: int,
                         reference_model: ModelSpec | None = None) -> float:
    """Max Hausdorff distance, over mu samples, between the Hill spectrum of
    the zero wave and the closed-form eigenvalue set.

    ``reference_model`` defaults to ``model``; passing a different model
    measures the effect of a perturbed assembly (fault injection).
    """
    ref = reference_model or model
    wave = zero_wave(model, c)
    worst = 0.0
    for mu in mu_samples:
        computed = spectrum_at(model, wave, float(mu), M)
        exact = np.array([lam for _, lam in
                          spectrum_slice(ref, c, float(mu), range(-M, M + 1))])
        worst = max(worst, _hausdorff(computed, exact))
    return worst
