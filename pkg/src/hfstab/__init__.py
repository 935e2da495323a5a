"""High-frequency instability screening for periodic traveling waves.

The package mechanizes a six-step necessary-condition test: dispersion
relation, bifurcation speed, zero-amplitude spectrum, eigenvalue
collisions, Krein signatures, and a Fourier-Floquet-Hill verification of
the predictions on numerically constructed small-amplitude waves.
"""

from .models import (ModelSpec, ModeIndex, DispersionBranch, TravelingWave,
                     BUILTIN_MODELS, make_model, model_from_config,
                     eval_omega, eval_Omega, bifurcation_speed,
                     zero_amp_eigenvalue, spectrum_slice, normalize_mode,
                     ModelError, UnknownModelError, ModelNotDispersiveError,
                     SCALAR, CANONICAL, NONCANONICAL_BW)
from .collisions import (CollisionOptions, CollisionEvent, find_collisions,
                         collision_residual, mirror_events,
                         secant_curve_data, trace_first_collision_vs_depth,
                         NoCollisionFoundError)
from .krein import (run_pipeline, AnalysisReport, signature_product,
                    scalar_signature, scalar_opposite, canonical_signature,
                    canonical_opposite, bw_signature, eigenmode,
                    hessian_symbol, OVERALL_POSSIBLE, OVERALL_EXCLUDED)
from .elliptic import (elliptic_K, jacobi_sn, jacobi_cn, jacobi_dn,
                       kdv_cnoidal, mkdv_cn_wave, mkdv_sn_wave)
from .waves import (stokes_wave, solve_wave_collocation, wave_residual,
                    bw_flat_state_analysis, FlatStateReport, ResonanceError,
                    WaveConvergenceError)
from .hill import (assemble, spectrum_at, full_spectrum, detect_bubbles,
                   zero_amplitude_check, zero_wave, MuGridSpec,
                   SpectrumSet, Bubble)

__version__ = "0.1.0"
