"""Command-line front end: scenario presets, deterministic CSV/JSON emission.

A run is described by a flat config (INI file and/or flags; flags win) and
produces up to three files in the output directory:

    trajectory.csv    one row per sample (or trajectory.json with --format json)
    diagnostics.json  growth fits, dominant-mode series, certificates, residuals
    manifest.json     resolved config, warnings, stop reason, output hashes

Identical resolved configs produce byte-identical outputs.  Exit codes:
0 success, 1 config error, 2 numerical abort, 3 verification failure.
"""
from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict, replace
from pathlib import Path

import numpy as np

from . import diagnostics as diag
from . import hankel, reduced
from .dynamics import (
    IntegratorConfig,
    Trajectory,
    exact_trajectory,
    integrate_full,
    integrate_reduced,
)
from .hardy import HardyCoeffs
from .reduced import L1State, to_fourier

__all__ = ["RunConfig", "presets", "run", "main"]

_SCHEMA = "szegolab-run-1"
_IDENTITY_TOL_HPI = 1e-10
_IDENTITY_TOL_KSQ = 1e-12


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved description of one run."""

    mode: str = "reduced"  # full | reduced | exact | verify
    alpha: float = 1.0
    b: complex = 1.0 + 0j
    c: complex = 1.0 + 0j
    p: complex = 0.0 + 0j
    coeffs: tuple[complex, ...] | None = None  # explicit full-mode datum
    datum: str | None = None  # "blowup" pins (b, c, p) = (sqrt(alpha), 1, 0)
    n_modes: int = 256
    dt: float = 1e-3
    t_end: float = 3.0
    sample_every: float = 0.1
    scheme: str = "rk4_fixed"
    adapt_tol: float = 1e-10
    pole_guard: float = 1.0 - 1e-10
    s_list: tuple[float, ...] = (1.0, 2.0)
    fit_window: tuple[float, float] | None = None
    profile_grid: int = 0
    ku2_section: int = 64
    trials: int = 100
    seed: int = 7
    verify_suite: str = "identities"  # identities | kronecker | all
    out_dir: str = "out"
    fmt: str = "csv"  # csv | json

    def integrator(self) -> IntegratorConfig:
        return IntegratorConfig(
            dt=self.dt,
            t_end=self.t_end,
            sample_every=self.sample_every,
            scheme=self.scheme,
            adapt_tol=self.adapt_tol,
            pole_guard=self.pole_guard,
        )


_PRESETS: dict[str, tuple[dict, str]] = {
    "paper-blowup": (
        dict(
            mode="reduced",
            alpha=1.0,
            datum="blowup",
            t_end=5.0,
            dt=1e-2,
            sample_every=0.05,
            scheme="rk4_adaptive",
            s_list=(1.0, 2.0),
            fit_window=(1.0, 4.0),
        ),
        "blow-up datum u0 = z + sqrt(alpha): Sobolev norms grow exponentially, "
        "asymptotic rate (2s-1) sqrt(alpha)",
    ),
    "small-data": (
        dict(
            mode="reduced",
            alpha=1.0,
            b=complex(0.1 / math.sqrt(2)),
            c=complex(0.1 / math.sqrt(2)),
            p=0j,
            t_end=50.0,
            dt=1e-2,
            sample_every=0.25,
            scheme="rk4_adaptive",
            s_list=(1.0, 2.0),
        ),
        "small datum far below the blow-up condition: no norm growth",
    ),
    "alpha-negative": (
        dict(
            mode="reduced",
            alpha=-1.0,
            b=1.0 + 0j,
            c=1.0 + 0j,
            p=0.3 + 0j,
            t_end=100.0,
            dt=1e-2,
            sample_every=0.25,
            scheme="rk4_adaptive",
            s_list=(1.0, 2.0),
        ),
        "alpha < 0: Sobolev norms stay bounded uniformly in time",
    ),
    "phase-rotation": (
        dict(
            mode="full",
            alpha=1.0,
            b=0j,
            c=1.0 + 0j,
            p=0j,
            n_modes=512,
            t_end=2.0,
            dt=1e-3,
            sample_every=0.1,
        ),
        "u0 = z solves the flow by pure phase rotation e^{-it} z",
    ),
    "verify-identities": (
        dict(mode="verify", verify_suite="identities", trials=100),
        "operator identities: Hankel of the cubic term and the shifted-Hankel "
        "square relation, on random polynomial data",
    ),
    "kronecker-rank": (
        dict(mode="verify", verify_suite="kronecker", trials=50),
        "rank of the shifted Hankel section equals max(deg A, deg B) for "
        "random rational A/B with pole-free closed disk",
    ),
    "cascade-profile": (
        dict(
            mode="exact",
            alpha=1.0,
            datum="blowup",
            n_modes=2048,
            t_end=3.0,
            dt=1e-2,
            sample_every=0.1,
            profile_grid=512,
            s_list=(1.0, 2.0),
            fit_window=(1.0, 3.0),
        ),
        "energy cascade of the blow-up solution: momentum density peaks near "
        "e^{2 sqrt(alpha) t}/4 and |u| concentrates at theta = pi/2",
    ),
}


def presets() -> dict[str, str]:
    """Preset names with one-line descriptions."""
    return {name: desc for name, (_, desc) in _PRESETS.items()}


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"complex values are written as re,im (got {text!r})")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise ConfigError(f"bad complex value {text!r}") from exc


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise ConfigError(f"bad float list {text!r}") from exc


def _read_config_file(path: str) -> dict:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    if not parser.read(path):
        raise ConfigError(f"cannot read config file {path}")
    out: dict = {}
    run = parser["run"] if parser.has_section("run") else {}
    for key, conv in (
        ("mode", str),
        ("alpha", float),
        ("n", int),
        ("trials", int),
        ("seed", int),
        ("verify_suite", str),
        ("profile_grid", int),
        ("ku2_section", int),
    ):
        if key in run:
            out["n_modes" if key == "n" else key] = conv(run[key])
    if "s_list" in run:
        out["s_list"] = _parse_float_list(run["s_list"])
    if "fit_window" in run:
        window = _parse_float_list(run["fit_window"])
        if len(window) != 2:
            raise ConfigError("fit_window needs two values lo,hi")
        out["fit_window"] = window
    init = parser["initial"] if parser.has_section("initial") else {}
    for key in ("b", "c", "p"):
        if key in init:
            out[key] = _parse_complex(init[key])
    if "coeffs" in init:
        out["coeffs"] = tuple(_parse_complex(tok) for tok in init["coeffs"].split())
    integ = parser["integrator"] if parser.has_section("integrator") else {}
    for key, conv in (
        ("dt", float),
        ("t_end", float),
        ("sample_every", float),
        ("scheme", str),
        ("adapt_tol", float),
        ("pole_guard", float),
    ):
        if key in integ:
            out[key] = conv(integ[key])
    outp = parser["output"] if parser.has_section("output") else {}
    if "dir" in outp:
        out["out_dir"] = outp["dir"]
    if "format" in outp:
        out["fmt"] = outp["format"]
    return out


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="szegolab",
        description="Simulate the alpha-Szego flow and verify its structure "
        "(conservation laws, isospectrality, blow-up criterion, cascade).",
    )
    ap.add_argument("--preset", choices=sorted(_PRESETS), help="named scenario")
    ap.add_argument("--list-presets", action="store_true")
    ap.add_argument("--config", help="INI config file; flags override it")
    ap.add_argument("--mode", choices=["full", "reduced", "exact", "verify"])
    ap.add_argument("--alpha", type=float)
    ap.add_argument("--b", help="complex re,im")
    ap.add_argument("--c", help="complex re,im")
    ap.add_argument("--p", help="complex re,im")
    ap.add_argument("--n", type=int, help="Galerkin truncation size")
    ap.add_argument("--dt", type=float)
    ap.add_argument("--t-end", type=float)
    ap.add_argument("--sample-every", type=float)
    ap.add_argument("--adaptive", action="store_true", help="step-doubling RK4")
    ap.add_argument("--s-list", help="comma list of Sobolev indices")
    ap.add_argument("--out", help="output directory")
    ap.add_argument("--format", choices=["csv", "json"], dest="fmt")
    ap.add_argument("--sweep", help="comma list of alpha values, one run each")
    ap.add_argument("--trials", type=int, help="verify-mode trial count")
    return ap


def _resolve(args: argparse.Namespace) -> RunConfig:
    overrides: dict = {}
    if args.preset:
        overrides.update(_PRESETS[args.preset][0])
    if args.config:
        overrides.update(_read_config_file(args.config))
    if args.mode:
        overrides["mode"] = args.mode
    if args.alpha is not None:
        overrides["alpha"] = args.alpha
    for key in ("b", "c", "p"):
        val = getattr(args, key)
        if val is not None:
            overrides[key] = _parse_complex(val)
            overrides["datum"] = None  # explicit coordinates replace the datum
    if args.n is not None:
        overrides["n_modes"] = args.n
    if args.dt is not None:
        overrides["dt"] = args.dt
    if args.t_end is not None:
        overrides["t_end"] = args.t_end
    if args.sample_every is not None:
        overrides["sample_every"] = args.sample_every
    if args.adaptive:
        overrides["scheme"] = "rk4_adaptive"
    if args.s_list is not None:
        overrides["s_list"] = _parse_float_list(args.s_list)
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.fmt is not None:
        overrides["fmt"] = args.fmt
    if args.trials is not None:
        overrides["trials"] = args.trials
    try:
        config = replace(RunConfig(), **overrides)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    if config.mode == "exact":
        config = replace(config, datum="blowup")
    config = _apply_datum(config)
    _validate(config)
    return config


def _apply_datum(config: RunConfig) -> RunConfig:
    if config.datum is None:
        return config
    if config.datum != "blowup":
        raise ConfigError(f"unknown datum {config.datum!r}")
    if config.alpha <= 0:
        raise ConfigError("the blow-up datum z + sqrt(alpha) needs alpha > 0")
    return replace(config, b=complex(math.sqrt(config.alpha)), c=1.0 + 0j, p=0j)


def _validate(config: RunConfig) -> None:
    if config.mode not in ("full", "reduced", "exact", "verify"):
        raise ConfigError(f"unknown mode {config.mode!r}")
    if config.fmt not in ("csv", "json"):
        raise ConfigError(f"unknown format {config.fmt!r}")
    if config.n_modes < 2:
        raise ConfigError("n must be >= 2")
    if config.mode == "full" and config.n_modes & (config.n_modes - 1):
        raise ConfigError("full mode uses fast convolution: n must be a power of two")
    if config.mode != "verify":
        try:
            config.integrator()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if config.mode in ("reduced", "exact") and config.coeffs is not None:
        raise ConfigError("explicit coefficient lists are for full mode only")
    if config.verify_suite not in ("identities", "kronecker", "all"):
        raise ConfigError(f"unknown verify suite {config.verify_suite!r}")


def _initial_state(config: RunConfig):
    if config.mode == "full":
        if config.coeffs is not None:
            arr = np.zeros(config.n_modes, dtype=np.complex128)
            coeffs = np.asarray(config.coeffs, dtype=np.complex128)
            if coeffs.size > config.n_modes:
                raise ConfigError("coefficient list longer than n")
            arr[: coeffs.size] = coeffs
            return HardyCoeffs(arr)
        return to_fourier(L1State(config.b, config.c, config.p), config.n_modes)
    return L1State(config.b, config.c, config.p)


# ---------------------------------------------------------------------------
# output writers


def _f(x: float) -> str:
    """Shortest decimal that round-trips the float."""
    return repr(float(x))


def _s_key(s: float) -> str:
    return format(float(s), "g")


def _trajectory_rows(traj: Trajectory, config: RunConfig):
    if traj.mode == "full":
        state_cols = ["u0_re", "u0_im", "u1_re", "u1_im"]

        def state_vals(rec):
            c = rec.state.coeffs
            return [c[0].real, c[0].imag, c[1].real, c[1].imag]

    else:
        state_cols = ["b_re", "b_im", "c_re", "c_im", "p_re", "p_im"]

        def state_vals(rec):
            st = rec.state
            return [st.b.real, st.b.imag, st.c.real, st.c.imag, st.p.real, st.p.imag]

    header = (
        ["t"]
        + state_cols
        + ["Q", "M", "E_alpha", "discriminant", "wiener"]
        + [f"hs_{_s_key(s)}" for s in config.s_list]
    )
    rows = []
    for rec in traj.records:
        row = (
            [rec.t]
            + state_vals(rec)
            + [
                rec.conserved.q,
                rec.conserved.m,
                rec.conserved.e_alpha,
                rec.discriminant,
                rec.wiener,
            ]
            + [rec.norms[float(s)] for s in config.s_list]
        )
        rows.append(row)
    return header, rows


def _write_trajectory(traj: Trajectory, config: RunConfig, out_dir: Path) -> str:
    header, rows = _trajectory_rows(traj, config)
    if config.fmt == "csv":
        path = out_dir / "trajectory.csv"
        lines = [",".join(header)]
        lines += [",".join(_f(v) for v in row) for row in rows]
        path.write_text("\n".join(lines) + "\n")
        return path.name
    path = out_dir / "trajectory.json"
    payload = [dict(zip(header, row)) for row in rows]
    path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n")
    return path.name


def _fit_window(config: RunConfig) -> tuple[float, float]:
    if config.fit_window is not None:
        return config.fit_window
    return (1.0, max(2.0, 0.8 * config.t_end))


def _trajectory_diagnostics(traj: Trajectory, config: RunConfig) -> dict:
    out: dict = {
        "mode": traj.mode,
        "alpha": config.alpha,
        "stop_reason": traj.stop_reason,
        "n_samples": len(traj.records),
    }
    window = _fit_window(config)
    fits = {}
    for s in config.s_list:
        try:
            g = diag.fit_growth(traj.records, s, window, alpha=config.alpha)
            fits[_s_key(s)] = {
                "window": list(g.window),
                "slope": g.slope,
                "r_squared": g.r_squared,
                "predicted": g.predicted,
            }
        except ValueError as exc:
            fits[_s_key(s)] = {"error": str(exc)}
    out["growth_fits"] = fits
    certificates = {}
    for s in config.s_list:
        sup_norm, ratio = diag.boundedness_certificate(traj.records, s)
        certificates[_s_key(s)] = {"sup_norm": sup_norm, "ratio_late_to_early": ratio}
    out["boundedness"] = certificates
    modes = []
    for rec in traj.records:
        u = rec.state if traj.mode == "full" else to_fourier(rec.state, config.n_modes)
        modes.append([rec.t, diag.dominant_mode(u)])
    out["dominant_modes"] = modes
    if traj.mode == "full":
        track = diag.wiener_track(traj.records, section_size=config.ku2_section)
        out["wiener"] = {
            "sup_wiener": track.sup_wiener,
            "max_trace_deviation": track.max_trace_deviation,
        }
        eig0 = traj.records[0].ku2_top_eigs
        if eig0 is not None:
            drift = max(
                max(abs(a - b) for a, b in zip(rec.ku2_top_eigs, eig0))
                for rec in traj.records
            )
            out["ku2_top_eig_drift"] = drift
    else:
        out["wiener"] = {"sup_wiener": max(r.wiener for r in traj.records)}
    if config.profile_grid:
        last = traj.records[-1]
        u = last.state if traj.mode == "full" else to_fourier(last.state, config.n_modes)
        thetas, values = diag.concentration_profile(u, config.profile_grid)
        out["concentration_profile"] = {
            "t": last.t,
            "theta": [float(x) for x in thetas],
            "abs_u": [float(x) for x in values],
        }
    return out


def _verify_diagnostics(config: RunConfig) -> tuple[dict, bool]:
    rng = np.random.default_rng(config.seed)
    out: dict = {"mode": "verify", "suite": config.verify_suite, "trials": config.trials}
    passed = True
    if config.verify_suite in ("identities", "all"):
        max_hpi = 0.0
        max_ksq = 0.0
        for _ in range(config.trials):
            deg = int(rng.integers(1, 9))
            coeffs = np.zeros(64, dtype=np.complex128)
            coeffs[: deg + 1] = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(
                deg + 1
            )
            u = HardyCoeffs(coeffs)
            max_hpi = max(max_hpi, hankel.verify_hpi(u, 16))
            max_ksq = max(max_ksq, hankel.verify_k_square(u, 16))
        ok = max_hpi <= _IDENTITY_TOL_HPI and max_ksq <= _IDENTITY_TOL_KSQ
        out["identities"] = {
            "max_hpi_residual": max_hpi,
            "max_k_square_residual": max_ksq,
            "tol_hpi": _IDENTITY_TOL_HPI,
            "tol_k_square": _IDENTITY_TOL_KSQ,
            "passed": ok,
        }
        passed = passed and ok
    if config.verify_suite in ("kronecker", "all"):
        ranks: dict = {}
        ok = True
        for k in (1, 2, 3, 4):
            mismatches = 0
            for _ in range(config.trials):
                numer, denom = hankel.random_rational(k, rng)
                u = hankel.rational_taylor(numer, denom, 16 * k)
                section = hankel.shifted_hankel_matrix(u, 4 * k)
                if hankel.numerical_rank(section.mat, 1e-8) != k:
                    mismatches += 1
            ranks[str(k)] = {"trials": config.trials, "mismatches": mismatches}
            ok = ok and mismatches == 0
        out["kronecker"] = {"per_degree": ranks, "passed": ok}
        passed = passed and ok
    return out, passed


def _config_dict(config: RunConfig) -> dict:
    raw = asdict(config)
    for key in ("b", "c", "p"):
        val = raw[key]
        raw[key] = [val.real, val.imag]
    if raw["coeffs"] is not None:
        raw["coeffs"] = [[z.real, z.imag] for z in raw["coeffs"]]
    raw["s_list"] = list(raw["s_list"])
    if raw["fit_window"] is not None:
        raw["fit_window"] = list(raw["fit_window"])
    return raw


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run(config: RunConfig) -> int:
    """Execute one resolved run; returns the process exit code."""
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    warnings: list[str] = []
    outputs: list[str] = []
    exit_code = 0

    if config.mode == "verify":
        diag_payload, passed = _verify_diagnostics(config)
        if not passed:
            exit_code = 3
        stop_reason = "completed"
    else:
        if config.mode == "full" and config.alpha > 0:
            horizon = math.exp(2.0 * math.sqrt(config.alpha) * config.t_end)
            if horizon > config.n_modes / 8:
                warnings.append(
                    "galerkin horizon exceeded: exp(2 sqrt(alpha) t_end) = "
                    f"{horizon:.6g} > n/8 = {config.n_modes / 8:.6g}; "
                    "high modes reach the truncation boundary"
                )
        initial = _initial_state(config)
        if config.mode == "full":
            traj = integrate_full(
                initial,
                config.alpha,
                config.integrator(),
                s_list=config.s_list,
                ku2_section=config.ku2_section,
            )
        elif config.mode == "reduced":
            traj = integrate_reduced(
                initial, config.alpha, config.integrator(), s_list=config.s_list
            )
        else:
            traj = exact_trajectory(config.alpha, config.integrator(), s_list=config.s_list)
        outputs.append(_write_trajectory(traj, config, out_dir))
        diag_payload = _trajectory_diagnostics(traj, config)
        stop_reason = traj.stop_reason
        if stop_reason != "completed":
            exit_code = 2

    diag_path = out_dir / "diagnostics.json"
    diag_path.write_text(json.dumps(diag_payload, sort_keys=True, indent=1) + "\n")
    outputs.append(diag_path.name)

    manifest = {
        "schema": _SCHEMA,
        "config": _config_dict(config),
        "stop_reason": stop_reason,
        "warnings": warnings,
        "exit_code": exit_code,
        "outputs": {name: _sha256(out_dir / name) for name in sorted(outputs)},
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=1) + "\n"
    )
    return exit_code


def _run_sweep(config: RunConfig, alphas: tuple[float, ...]) -> int:
    def one(alpha: float) -> int:
        sub = replace(
            config,
            alpha=alpha,
            out_dir=str(Path(config.out_dir) / f"alpha_{format(alpha, 'g')}"),
        )
        return run(_apply_datum(sub))

    with ThreadPoolExecutor(max_workers=min(4, len(alphas))) as pool:
        codes = list(pool.map(one, alphas))
    return max(codes)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.list_presets:
        for name, desc in sorted(presets().items()):
            print(f"{name}: {desc}")
        return 0
    try:
        config = _resolve(args)
        if args.sweep:
            alphas = _parse_float_list(args.sweep)
            if not alphas:
                raise ConfigError("--sweep needs at least one alpha")
            return _run_sweep(config, alphas)
        return run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
