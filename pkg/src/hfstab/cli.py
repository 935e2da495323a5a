"""Command-line front end.

Commands
--------
analyze   run the full necessary-condition pipeline, emit a JSON report
collide   locate zero-amplitude eigenvalue collisions, emit JSON
wave      construct a traveling wave by Newton continuation, emit JSON
spectrum  Hill spectrum over a Floquet grid, emit CSV plus a bubble report
curves    secant-curve data tables (and a depth trace for water waves)

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import dsl, hill, krein, waves
from .collisions import find_collisions, mirror_events, secant_curve_data, \
    trace_first_collision_vs_depth, NoCollisionFoundError
from .config import ConfigError, RunConfig, apply_flags, build_model, \
    load_config
from .models import (CANONICAL, ModelError, TravelingWave,
                     bifurcation_speed)
from .report import csv_lines, json_dumps

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_NUMERICAL_ERRORS = (
    waves.ResonanceError, waves.WaveConvergenceError,
    waves.ModesInsufficientError, hill.EigensolverError,
    NoCollisionFoundError, krein.SignatureError, dsl.EvalError,
    np.linalg.LinAlgError,
)
_CONFIG_ERRORS = (ConfigError, ModelError, dsl.ParseError, ValueError)


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", help="built-in model id")
    p.add_argument("--g", type=float, help="gravity parameter")
    p.add_argument("--h", type=float, help="depth parameter")
    p.add_argument("--alpha", type=float, help="model parameter alpha")
    p.add_argument("--beta", type=float, help="model parameter beta")
    p.add_argument("--sigma", type=float, help="nonlinearity coefficient")
    p.add_argument("--N", type=int, help="bifurcation harmonic")
    p.add_argument("--n-max", dest="n_max", type=int,
                   help="mode index bound for the collision search")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--threads", type=int, help="parallelism bound")
    p.add_argument("--config", help="JSON config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hfstab",
        description="High-frequency instability screening for periodic "
                    "traveling waves of dispersive Hamiltonian models.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full necessary-condition pipeline")
    _common_flags(p)

    p = sub.add_parser("collide", help="zero-amplitude collision search")
    _common_flags(p)

    p = sub.add_parser("wave", help="traveling-wave construction")
    _common_flags(p)
    p.add_argument("--amplitude", type=float, help="target first coefficient")
    p.add_argument("--modes", type=int, help="cosine modes M")
    p.add_argument("--steps", type=int, help="continuation increments")
    p.add_argument("--mean", type=float, help="pinned mean value")
    p.add_argument("--force", action="store_true",
                   help="allow ill-posed negative-mean continuation")

    p = sub.add_parser("spectrum", help="Hill spectrum and bubble report")
    _common_flags(p)
    p.add_argument("--wave", dest="wave_file", help="wave JSON artifact")
    p.add_argument("--amplitude", type=float, help="wave amplitude if no file")
    p.add_argument("--modes", type=int, help="cosine modes for the wave solve")
    p.add_argument("--steps", type=int, help="continuation increments")
    p.add_argument("--mean", type=float, help="pinned mean value")
    p.add_argument("--mu-count", dest="mu_count", type=int,
                   help="Floquet grid size")
    p.add_argument("--M", type=int, help="Hill truncation")
    refine = p.add_mutually_exclusive_group()
    refine.add_argument("--refine", dest="refine", action="store_true",
                        default=None, help="refine near predicted collisions")
    refine.add_argument("--no-refine", dest="refine", action="store_false",
                        default=None)

    p = sub.add_parser("curves", help="secant-curve data tables")
    _common_flags(p)
    return parser


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load(args) -> tuple[RunConfig, object]:
    cfg = apply_flags(load_config(getattr(args, "config", None)), args)
    return cfg, build_model(cfg)


# --------------------------------------------------------------------------
# Commands

def cmd_analyze(args) -> int:
    cfg, model = _load(args)
    report = krein.run_pipeline(model, N=cfg.N, n_max=cfg.n_max,
                                opts=cfg.collision)
    _write(json_dumps(report.to_dict()), cfg.output)
    return EXIT_OK


def cmd_collide(args) -> int:
    cfg, model = _load(args)
    c = bifurcation_speed(model, 1, cfg.N)
    events = find_collisions(model, c, cfg.n_max, cfg.collision)
    out = {
        "model": model.name,
        "N": cfg.N,
        "speed": c,
        "events": [e.to_dict() for e in events],
    }
    _write(json_dumps(out), cfg.output)
    return EXIT_OK


def _solve_wave(cfg, model, force: bool) -> TravelingWave:
    return waves.solve_wave_collocation(
        model, cfg.wave_amplitude, M=cfg.wave_modes, steps=cfg.wave_steps,
        mean=cfg.wave_mean, force=force)


def cmd_wave(args) -> int:
    cfg, model = _load(args)
    wave = _solve_wave(cfg, model, args.force)
    data = wave.to_dict()
    data["residual"] = waves.wave_residual(model, wave)
    _write(json_dumps(data), cfg.output)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    import json as _json

    cfg, model = _load(args)
    if model.kind == CANONICAL:
        raise ConfigError(
            f"model {model.name!r} has no finite-amplitude spectrum path; "
            "the spectrum command supports scalar and boussinesq-whitham "
            "models")
    if args.wave_file is not None:
        try:
            with open(args.wave_file) as fh:
                wave = TravelingWave.from_dict(_json.load(fh))
        except (OSError, _json.JSONDecodeError, KeyError) as exc:
            raise ConfigError(f"cannot read wave file: {exc}") from exc
        if wave.model != model.name:
            raise ConfigError(
                f"wave file is for model {wave.model!r}, not {model.name!r}")
    elif cfg.wave_amplitude == 0.0:
        wave = hill.zero_wave(model, bifurcation_speed(model, 1, cfg.N))
    else:
        wave = _solve_wave(cfg, model, force=False)

    predictions = find_collisions(model, wave.c, cfg.n_max, cfg.collision)
    windows: tuple[float, ...] = ()
    if cfg.hill_refine:
        mus = {e.mu for e in mirror_events(model, predictions)
               if not e.at_origin}
        windows = tuple(sorted(mus))
    grid = hill.MuGridSpec(count=cfg.hill_mu_count, windows=windows)
    spectrum = hill.full_spectrum(model, wave, grid, cfg.hill_M,
                                  threads=cfg.threads)
    bubbles = hill.detect_bubbles(spectrum, predictions=predictions)

    bubble_report = {
        "model": model.name,
        "M": cfg.hill_M,
        "amplitude": wave.amplitude,
        "max_re_lambda": spectrum.max_real_part(),
        "bubbles": [b.to_dict() for b in bubbles],
    }
    if wave.amplitude == 0.0:
        bubble_report["zero_amplitude_deviation"] = hill.zero_amplitude_check(
            model, wave.c, np.linspace(-0.45, 0.45, 7), min(cfg.hill_M, 32))

    csv_text = csv_lines(["mu", "re_lambda", "im_lambda"],
                         hill.spectrum_to_csv_rows(spectrum))
    if cfg.output is None:
        sys.stdout.write(csv_text)
        sys.stdout.write(json_dumps(bubble_report))
    else:
        _write(csv_text, cfg.output)
        _write(json_dumps(bubble_report), cfg.output + ".bubbles.json")
    return EXIT_OK


def cmd_curves(args) -> int:
    cfg, model = _load(args)
    c = bifurcation_speed(model, 1, cfg.N)
    k_grid = np.linspace(-0.5, 0.5, 201)
    rows = secant_curve_data(model, c, range(-3, 4), k_grid)
    csv_text = csv_lines(["l", "n", "k", "Omega"], rows)
    if model.name == "water-waves":
        h_grid = np.logspace(np.log10(0.5), 2.0, 25)
        trace = trace_first_collision_vs_depth(
            model.params["g"], h_grid, n_max=max(cfg.n_max, 3))
        trace_text = csv_lines(["h", "im_lambda"], trace)
        if cfg.output is None:
            sys.stdout.write(csv_text)
            sys.stdout.write(trace_text)
        else:
            _write(csv_text, cfg.output)
            _write(trace_text, cfg.output + ".depth.csv")
        return EXIT_OK
    _write(csv_text, cfg.output)
    return EXIT_OK


_COMMANDS = {
    "analyze": cmd_analyze,
    "collide": cmd_collide,
    "wave": cmd_wave,
    "spectrum": cmd_spectrum,
    "curves": cmd_curves,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except _CONFIG_ERRORS as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
