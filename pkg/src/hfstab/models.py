"""Model catalog, dispersion relations, and zero-amplitude spectra.

A model is a Hamiltonian PDE reduced to the data needed by the instability
analysis: its Poisson-structure kind, dispersion branches, and the symbol
functions of the quadratic Hamiltonian that enter the Krein signature.

Built-in model identifiers: ``gkdv``, ``kdv``, ``mkdv-focusing``,
``mkdv-defocusing``, ``whitham``, ``sine-gordon``, ``water-waves``,
``water-waves-deep``, ``boussinesq-whitham``, ``fifth-order-scalar``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

from . import dsl

__all__ = [
    "ModelError", "ModelNotDispersiveError", "UnknownModelError",
    "ModeIndex", "DispersionBranch", "ModelSpec", "TravelingWave",
    "BUILTIN_MODELS", "make_model", "model_from_config",
    "eval_omega", "eval_Omega", "bifurcation_speed",
    "zero_amp_eigenvalue", "spectrum_slice", "validate_dispersive",
    "normalize_mode",
]

SCALAR = "scalar"
CANONICAL = "canonical"
NONCANONICAL_BW = "noncanonical-bw"

_KINDS = (SCALAR, CANONICAL, NONCANONICAL_BW)


class ModelError(Exception):
    pass


class ModelNotDispersiveError(ModelError):
    pass


class UnknownModelError(ModelError):
    pass


def _sign(x: float) -> float:
    # sign(0) = 0 removes the k = 0 singularity of sign(k)*sqrt(...) branches
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


# --------------------------------------------------------------------------
# Domain types

@dataclass(frozen=True)
class ModeIndex:
    """One Fourier/Floquet mode: integer index n, Floquet exponent mu, branch l."""
    n: int
    mu: float
    l: int = 1

    def __post_init__(self):
        if not (-0.5 < self.mu <= 0.5):
            raise ValueError(f"mu must lie in (-1/2, 1/2], got {self.mu!r}")

    @property
    def k(self) -> float:
        return self.n + self.mu


def normalize_mode(n: int, mu: float, l: int = 1) -> ModeIndex:
    """Shift (n, mu) so that mu lands in (-1/2, 1/2]."""
    shift = math.floor(mu + 0.5)
    if mu - shift == -0.5:  # boundary: -1/2 is excluded, 1/2 included
        shift -= 1
    return ModeIndex(n + shift, mu - shift, l)


@dataclass(frozen=True)
class DispersionBranch:
    """One real branch omega_l(k) of the dispersion relation."""
    index: int
    evaluator: Callable[[float], float]
    parity: str = "odd"  # 'odd' or 'general'


@dataclass(frozen=True)
class ModelSpec:
    """A model prepared for the six-step analysis.

    ``kernel_symbol`` is the scalar nonlocal kernel c(k) = omega(k)/k.
    ``a_symbol``, ``b_symbol``, ``c_symbol`` are the canonical Hamiltonian
    symbols A(k) (complex), B(k), C(k); ``c2_symbol`` is the squared phase
    speed c^2(k) of the noncanonical structure.  Symbols are closed-form
    functions of k, never truncated coefficient lists, so models with
    infinitely many Hamiltonian coefficients stay exact.
    """
    name: str
    kind: str
    branches: tuple[DispersionBranch, ...]
    params: dict = field(default_factory=dict)
    even_system: bool = False
    kernel_symbol: Callable[[float], float] | None = None
    a_symbol: Callable[[float], complex] | None = None
    b_symbol: Callable[[float], float] | None = None
    c_symbol: Callable[[float], float] | None = None
    c2_symbol: Callable[[float], float] | None = None
    sigma: float = 0.0   # scalar nonlinearity sigma * u^power * u_x
    power: int = 1
    alpha: float = 0.0   # BW quadratic term alpha * q^2

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ModelError(f"unknown model kind {self.kind!r}")
        want = 1 if self.kind == SCALAR else 2
        if len(self.branches) != want:
            raise ModelError(
                f"{self.kind} model must have {want} branch(es), "
                f"got {len(self.branches)}")

    def branch(self, l: int) -> DispersionBranch:
        for b in self.branches:
            if b.index == l:
                return b
        raise ModelError(f"model {self.name!r} has no branch {l}")


@dataclass
class TravelingWave:
    """A 2*pi-periodic even traveling wave stored as a cosine series.

    ``coefficients[m]`` multiplies cos(m x); ``amplitude`` is the first
    cosine coefficient, the continuation parameter.  ``constant`` is the
    integration constant of the traveling equation (B for scalar models,
    A for the two-component Boussinesq-Whitham form).
    """
    model: str
    c: float
    coefficients: Sequence[float]
    constant: float = 0.0
    period: float = 2.0 * math.pi

    @property
    def amplitude(self) -> float:
        coeffs = self.coefficients
        return float(coeffs[1]) if len(coeffs) > 1 else 0.0

    @property
    def mean(self) -> float:
        return float(self.coefficients[0])

    def profile(self, x) -> object:
        """Evaluate the wave at x (scalar or numpy array)."""
        import numpy as np
        x = np.asarray(x, dtype=float)
        u = np.full_like(x, float(self.coefficients[0]))
        for m in range(1, len(self.coefficients)):
            u += self.coefficients[m] * np.cos(m * x)
        return u

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "c": self.c,
            "coefficients": [float(a) for a in self.coefficients],
            "amplitude": self.amplitude,
            "constant": self.constant,
        }

    @staticmethod
    def from_dict(data: Mapping) -> "TravelingWave":
        return TravelingWave(
            model=data["model"], c=float(data["c"]),
            coefficients=[float(a) for a in data["coefficients"]],
            constant=float(data.get("constant", 0.0)))


# --------------------------------------------------------------------------
# Operations

def eval_omega(model: ModelSpec, l: int, k: float) -> float:
    """Evaluate the branch-l dispersion relation at wavenumber k."""
    w = model.branch(l).evaluator(k)
    if not math.isfinite(w):
        raise ModelNotDispersiveError(
            f"model {model.name!r}: omega_{l}({k!r}) is not finite")
    return w


def eval_Omega(model: ModelSpec, l: int, k: float, c: float) -> float:
    """Dispersion relation in the frame traveling at speed c."""
    return eval_omega(model, l, k) - c * k


def bifurcation_speed(model: ModelSpec, l: int, N: int) -> float:
    """Speed at which the branch-l, harmonic-N bifurcation starts: omega_l(N)/N."""
    if N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    return eval_omega(model, l, N) / N


def zero_amp_eigenvalue(model: ModelSpec, idx: ModeIndex, c: float) -> complex:
    """Zero-amplitude stability eigenvalue -i*Omega_l(n + mu)."""
    return -1j * eval_Omega(model, idx.l, idx.k, c)


def spectrum_slice(model: ModelSpec, c: float, mu: float,
                   n_range: Sequence[int]) -> list[tuple[ModeIndex, complex]]:
    """Closed-form point spectrum for one Floquet exponent, sorted by Im."""
    out = []
    for n in n_range:
        for b in model.branches:
            idx = ModeIndex(int(n), mu, b.index)
            out.append((idx, zero_amp_eigenvalue(model, idx, c)))
    out.sort(key=lambda pair: (pair[1].imag, pair[0].l, pair[0].n))
    return out


def validate_dispersive(model: ModelSpec, grid: Sequence[float] | None = None,
                        tol: float = 1e-10) -> None:
    """Sanity-check branch reality/parity claims on a sample grid.

    Raises ModelNotDispersiveError when a branch returns a non-finite value,
    a branch declared odd is not, or an even system fails omega1 + omega2 = 0.
    """
    if grid is None:
        grid = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.5, 5.0, 10.0, 25.0]
    for b in model.branches:
        for k in grid:
            eval_omega(model, b.index, k)
            eval_omega(model, b.index, -k)
            if b.parity == "odd":
                v = abs(b.evaluator(k) + b.evaluator(-k))
                if v > tol:
                    raise ModelNotDispersiveError(
                        f"model {model.name!r}: branch {b.index} declared odd "
                        f"but |omega(k)+omega(-k)| = {v:g} at k = {k:g}")
    if model.even_system:
        for k in grid:
            v = abs(eval_omega(model, 1, k) + eval_omega(model, 2, k))
            if v > tol:
                raise ModelNotDispersiveError(
                    f"model {model.name!r}: even_system violated at k = {k:g}")


# --------------------------------------------------------------------------
# Built-in models

def _require_positive(params: Mapping[str, float], *names: str) -> None:
    for name in names:
        v = params[name]
        if not (math.isfinite(v) and v > 0):
            raise ModelError(f"parameter {name!r} must be finite and > 0, got {v!r}")


def _merged(defaults: dict, params: Mapping[str, float] | None) -> dict:
    out = dict(defaults)
    if params:
        unknown = set(params) - set(defaults)
        if unknown:
            raise ModelError(f"unknown parameter(s): {sorted(unknown)}")
        out.update(params)
    for name, v in out.items():
        if not math.isfinite(v):
            raise ModelError(f"parameter {name!r} must be finite, got {v!r}")
    return out


def _scalar_model(name, params, omega, kernel, sigma, power=1):
    return ModelSpec(
        name=name, kind=SCALAR,
        branches=(DispersionBranch(1, omega, "odd"),),
        params=params, kernel_symbol=kernel, sigma=sigma, power=power)


def _make_gkdv(params=None, *, name="gkdv", sigma_default=1.0, power=1):
    p = _merged({"sigma": sigma_default}, params)
    omega = lambda k: -k ** 3
    kernel = lambda k: -k ** 2
    return _scalar_model(name, p, omega, kernel, p["sigma"], power)


def _make_kdv(params=None):
    return _make_gkdv(params, name="kdv")


def _make_mkdv_focusing(params=None):
    return _make_gkdv(params, name="mkdv-focusing", sigma_default=3.0, power=2)


def _make_mkdv_defocusing(params=None):
    return _make_gkdv(params, name="mkdv-defocusing", sigma_default=-3.0, power=2)


def _ww_omega1(g: float, h: float) -> Callable[[float], float]:
    def omega(k: float) -> float:
        return _sign(k) * math.sqrt(g * k * math.tanh(k * h))
    return omega


def _make_whitham(params=None):
    params = dict(params or {})
    sigma = params.pop("sigma", None)
    p = _merged({"g": 1.0, "h": 1.0}, params)
    _require_positive(p, "g", "h")
    # default matches the shallow-water quadratic term scaling
    p["sigma"] = 1.5 * math.sqrt(p["g"] / p["h"]) if sigma is None else float(sigma)
    g, h = p["g"], p["h"]
    omega = _ww_omega1(g, h)

    def kernel(k: float) -> float:
        if k == 0.0:
            return math.sqrt(g * h)  # continuity limit of sqrt(g tanh(kh)/k)
        return math.sqrt(g * math.tanh(k * h) / k)

    return _scalar_model("whitham", p, omega, kernel, p["sigma"])


def _make_fifth_order(params=None):
    p = _merged({"alpha": 1.0, "beta": 0.25, "sigma": 1.0}, params)
    a, b = p["alpha"], p["beta"]
    omega = lambda k: a * k ** 3 - b * k ** 5
    kernel = lambda k: a * k ** 2 - b * k ** 4
    return _scalar_model("fifth-order-scalar", p, omega, kernel, p["sigma"])


def _canonical_even(name, params, omega1, b_symbol, c_symbol, parity="odd"):
    omega2 = lambda k: -omega1(k)
    return ModelSpec(
        name=name, kind=CANONICAL,
        branches=(DispersionBranch(1, omega1, parity),
                  DispersionBranch(2, omega2, parity)),
        params=params, even_system=True,
        a_symbol=lambda k: 0.0 + 0.0j,
        b_symbol=b_symbol, c_symbol=c_symbol)


def _make_sine_gordon(params=None):
    p = _merged({}, params)
    omega1 = lambda k: math.sqrt(1.0 + k * k)
    return _canonical_even("sine-gordon", p, omega1,
                           b_symbol=lambda k: 1.0,
                           c_symbol=lambda k: 1.0 + k * k,
                           parity="general")


def _make_water_waves(params=None):
    p = _merged({"g": 1.0, "h": 1.0}, params)
    _require_positive(p, "g", "h")
    g, h = p["g"], p["h"]
    return _canonical_even("water-waves", p, _ww_omega1(g, h),
                           b_symbol=lambda k: k * math.tanh(k * h),
                           c_symbol=lambda k: g)


def _make_water_waves_deep(params=None):
    p = _merged({"g": 1.0}, params)
    _require_positive(p, "g")
    g = p["g"]
    omega1 = lambda k: _sign(k) * math.sqrt(g * abs(k))
    return _canonical_even("water-waves-deep", p, omega1,
                           b_symbol=lambda k: abs(k),
                           c_symbol=lambda k: g)


def _make_boussinesq_whitham(params=None):
    p = _merged({"g": 1.0, "h": 1.0, "alpha": 1.0}, params)
    _require_positive(p, "g", "h")
    g, h = p["g"], p["h"]
    omega1 = _ww_omega1(g, h)

    def c2(k: float) -> float:
        if k == 0.0:
            return g * h
        return g * math.tanh(k * h) / k

    return ModelSpec(
        name="boussinesq-whitham", kind=NONCANONICAL_BW,
        branches=(DispersionBranch(1, omega1, "odd"),
                  DispersionBranch(2, lambda k: -omega1(k), "odd")),
        params=p, even_system=True, c2_symbol=c2, alpha=p["alpha"])


BUILTIN_MODELS: dict[str, Callable] = {
    "gkdv": _make_gkdv,
    "kdv": _make_kdv,
    "mkdv-focusing": _make_mkdv_focusing,
    "mkdv-defocusing": _make_mkdv_defocusing,
    "whitham": _make_whitham,
    "sine-gordon": _make_sine_gordon,
    "water-waves": _make_water_waves,
    "water-waves-deep": _make_water_waves_deep,
    "boussinesq-whitham": _make_boussinesq_whitham,
    "fifth-order-scalar": _make_fifth_order,
}


def make_model(name: str, params: Mapping[str, float] | None = None) -> ModelSpec:
    """Instantiate a built-in model by identifier."""
    try:
        factory = BUILTIN_MODELS[name]
    except KeyError:
        raise UnknownModelError(
            f"unknown model {name!r}; known: {sorted(BUILTIN_MODELS)}") from None
    return factory(params)


# --------------------------------------------------------------------------
# Custom models from DSL expressions

_CUSTOM_KEYS = {"kind", "omega1", "omega2", "c_squared", "params", "at_zero"}


def model_from_config(spec: Mapping) -> ModelSpec:
    """Build a ModelSpec from an inline custom model description.

    Keys: ``kind`` (scalar | canonical | noncanonical-bw), ``omega1``,
    optional ``omega2`` (canonical; defaults to -omega1), optional
    ``c_squared`` (BW), ``params`` mapping, and ``at_zero`` for symbols
    singular at k = 0.  Canonical models built this way default to the
    even-system Hamiltonian normalization B(k) = 1, C(k) = omega1(k)^2.
    """
    unknown = set(spec) - _CUSTOM_KEYS
    if unknown:
        raise ModelError(f"unknown custom-model key(s): {sorted(unknown)}")
    kind = spec.get("kind")
    if kind not in _KINDS:
        raise ModelError(f"custom model kind must be one of {_KINDS}, got {kind!r}")
    params = dict(spec.get("params", {}))
    at_zero = spec.get("at_zero")
    if "omega1" not in spec:
        raise ModelError("custom model requires 'omega1'")
    omega1 = dsl.compile_symbol(spec["omega1"], params)

    if kind == SCALAR:
        def kernel(k: float, _w=omega1, _z=at_zero) -> float:
            if k == 0.0:
                return 0.0 if _z is None else float(_z)
            return _w(k) / k
        return ModelSpec(
            name="custom-scalar", kind=SCALAR,
            branches=(DispersionBranch(1, omega1, "odd"),),
            params=params, kernel_symbol=kernel,
            sigma=params.get("sigma", 1.0))

    if kind == CANONICAL:
        if "omega2" in spec:
            omega2 = dsl.compile_symbol(spec["omega2"], params)
        else:
            omega2 = lambda k: -omega1(k)
        even = all(abs(omega1(k) + omega2(k)) <= 1e-10
                   for k in (0.3, 1.0, 2.7, 5.0))
        return ModelSpec(
            name="custom-canonical", kind=CANONICAL,
            branches=(DispersionBranch(1, omega1, "general"),
                      DispersionBranch(2, omega2, "general")),
            params=params, even_system=even,
            a_symbol=lambda k: 0.0 + 0.0j,
            b_symbol=lambda k: 1.0,
            c_symbol=lambda k: omega1(k) ** 2)

    # noncanonical-bw
    if "c_squared" not in spec:
        raise ModelError("noncanonical-bw custom model requires 'c_squared'")
    c2 = dsl.compile_symbol(spec["c_squared"], params, at_zero=at_zero)

    def omega_bw(k: float) -> float:
        return k * math.sqrt(c2(k))

    return ModelSpec(
        name="custom-bw", kind=NONCANONICAL_BW,
        branches=(DispersionBranch(1, omega_bw, "odd"),
                  DispersionBranch(2, lambda k: -omega_bw(k), "odd")),
        params=params, even_system=True, c2_symbol=c2,
        alpha=params.get("alpha", 1.0))
