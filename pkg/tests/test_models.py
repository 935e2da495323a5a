"""Model catalog and zero-amplitude spectrum tests."""

import math

import pytest
from hypothesis import given, strategies as st

from hfstab.models import (BUILTIN_MODELS, ModeIndex, ModelError,
                           ModelNotDispersiveError, UnknownModelError,
                           bifurcation_speed, eval_Omega, eval_omega,
                           make_model, model_from_config, normalize_mode,
                           spectrum_slice, validate_dispersive,
                           zero_amp_eigenvalue)


class TestCatalog:
    def test_all_builtins_instantiate_and_validate(self):
        for name in BUILTIN_MODELS:
            model = make_model(name)
            validate_dispersive(model)

    def test_unknown_model(self):
        with pytest.raises(UnknownModelError):
            make_model("no-such-model")

    def test_unknown_parameter_rejected(self):
        with pytest.raises(ModelError):
            make_model("kdv", {"depth": 2.0})

    def test_nonpositive_depth_rejected(self):
        with pytest.raises(ModelError):
            make_model("water-waves", {"g": 1.0, "h": -1.0})

    def test_water_wave_branch_at_zero(self):
        model = make_model("water-waves")
        assert eval_omega(model, 1, 0.0) == 0.0

    def test_whitham_kernel_continuity_at_zero(self):
        model = make_model("whitham", {"g": 2.0, "h": 3.0})
        assert model.kernel_symbol(0.0) == pytest.approx(math.sqrt(6.0))
        assert model.kernel_symbol(1e-8) == pytest.approx(math.sqrt(6.0),
                                                          abs=1e-6)

    def test_whitham_default_sigma(self):
        model = make_model("whitham", {"g": 4.0, "h": 1.0})
        assert model.sigma == pytest.approx(3.0)

    def test_even_system_branch_pairing(self):
        # for even systems there is a branch l' with omega_l(-k) = -omega_l'(k)
        for name in ("sine-gordon", "water-waves", "water-waves-deep",
                     "boussinesq-whitham"):
            model = make_model(name)
            for k in (0.3, 1.0, 2.7):
                for b in model.branches:
                    target = -eval_omega(model, b.index, -k)
                    matches = [bb.index for bb in model.branches
                               if abs(eval_omega(model, bb.index, k) - target)
                               <= 1e-12]
                    assert matches, (name, b.index, k)


class TestDispersion:
    def test_gkdv_speed(self):
        model = make_model("gkdv")
        assert bifurcation_speed(model, 1, 1) == -1.0
        assert bifurcation_speed(model, 1, 2) == -4.0

    def test_sine_gordon_speed(self):
        model = make_model("sine-gordon")
        assert bifurcation_speed(model, 1, 1) == pytest.approx(math.sqrt(2.0))

    def test_whitham_speed(self):
        model = make_model("whitham")
        assert bifurcation_speed(model, 1, 1) == pytest.approx(
            math.sqrt(math.tanh(1.0)))

    def test_zero_amp_eigenvalue_is_imaginary(self):
        model = make_model("kdv")
        c = bifurcation_speed(model, 1, 1)
        lam = zero_amp_eigenvalue(model, ModeIndex(2, 0.25), c)
        assert lam.real == 0.0
        assert lam.imag == pytest.approx(-eval_Omega(model, 1, 2.25, c))

    def test_spectrum_slice_sorted(self):
        model = make_model("water-waves")
        c = bifurcation_speed(model, 1, 1)
        pairs = spectrum_slice(model, c, 0.25, range(-3, 4))
        ims = [lam.imag for _, lam in pairs]
        assert ims == sorted(ims)
        assert len(pairs) == 14

    def test_declared_odd_but_even_raises(self):
        bad = model_from_config({"kind": "scalar", "omega1": "k^2"})
        with pytest.raises(ModelNotDispersiveError):
            validate_dispersive(bad)


class TestModeIndex:
    def test_mu_range_enforced(self):
        ModeIndex(0, 0.5)
        with pytest.raises(ValueError):
            ModeIndex(0, -0.5)
        with pytest.raises(ValueError):
            ModeIndex(0, 0.7)

    @given(st.integers(-5, 5), st.floats(-3.0, 3.0, allow_nan=False))
    def test_normalize_preserves_wavenumber(self, n, mu):
        idx = normalize_mode(n, mu)
        assert -0.5 < idx.mu <= 0.5
        assert idx.k == pytest.approx(n + mu, abs=1e-12)


class TestCustomModels:
    def test_custom_scalar(self):
        model = model_from_config(
            {"kind": "scalar", "omega1": "-k^3", "params": {"sigma": 1.0}})
        assert eval_omega(model, 1, 2.0) == -8.0
        assert model.kernel_symbol(2.0) == -4.0

    def test_custom_canonical_defaults(self):
        model = model_from_config(
            {"kind": "canonical", "omega1": "sqrt(1+k^2)"})
        assert model.even_system
        assert eval_omega(model, 2, 1.0) == pytest.approx(-math.sqrt(2.0))
        assert model.c_symbol(1.0) == pytest.approx(2.0)

    def test_custom_bw_requires_c_squared(self):
        with pytest.raises(ModelError):
            model_from_config({"kind": "noncanonical-bw", "omega1": "k"})

    def test_custom_bw(self):
        model = model_from_config(
            {"kind": "noncanonical-bw", "omega1": "k",
             "c_squared": "tanh(k)/k", "at_zero": 1.0})
        assert model.c2_symbol(0.0) == 1.0
        assert eval_omega(model, 1, 2.0) == pytest.approx(
            2.0 * math.sqrt(math.tanh(2.0) / 2.0))

    def test_unknown_key_rejected(self):
        with pytest.raises(ModelError):
            model_from_config({"kind": "scalar", "omega1": "k", "bogus": 1})


class TestTravelingWaveSerialization:
    def test_round_trip(self):
        from hfstab.models import TravelingWave
        w = TravelingWave(model="kdv", c=-0.9, coefficients=[0.0, 0.1, 0.01],
                          constant=0.005)
        w2 = TravelingWave.from_dict(w.to_dict())
        assert w2.model == w.model and w2.c == w.c
        assert list(w2.coefficients) == list(w.coefficients)
        assert w2.constant == w.constant

    def test_profile_even(self):
        from hfstab.models import TravelingWave
        import numpy as np
        w = TravelingWave(model="kdv", c=-0.9, coefficients=[0.1, 0.2, 0.05])
        x = np.linspace(0.1, 3.0, 7)
        assert np.allclose(w.profile(x), w.profile(-x))
