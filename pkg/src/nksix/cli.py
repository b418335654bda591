"""Command line entry points.

Verbs:
  verify          run one example's check plan
  classify-cubic  stabilizer class of a harmonic cubic
  gauss           quadratic curvature invariant of a cubic
  fiber           reconstruct a cubic over a curvature matrix
  tube            build a tube over a 2-parameter base and test it
  sweep           run a whole suite, emit CSV/JSON artifacts

Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error
(unknown id, malformed input, violated precondition).
"""

from __future__ import annotations

import dataclasses
import json
import sys

import click
import numpy as np

from . import tubes as tubes_mod
from .cubics import (
    classify_stabilizer,
    fiber_solve,
    fiber_r_bounds,
    gauss_map,
    in_gauss_image,
    jacobi_eigh,
    normal_form,
    sigma,
)
from .jets import frame_at, lagrangian_residual
from .report import (
    RunConfig,
    SCHEMA_VERSION,
    Sweep,
    build_example,
    example_ids,
    run_sweep,
    run_verify,
)

EXIT_FAIL = 1
EXIT_CONFIG = 2


def _fail_config(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_CONFIG)


def _load_tensor(path: str) -> np.ndarray:
    """Array from a .npy file or a JSON nested list."""
    try:
        if path.endswith(".npy"):
            return np.asarray(np.load(path), dtype=float)
        with open(path) as fh:
            return np.asarray(json.load(fh), dtype=float)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        _fail_config(f"cannot read tensor from {path}: {exc}")


def _parse_gamma(text: str) -> float:
    named = {"pi/2": np.pi / 2.0, "asin(2/3)": float(np.arcsin(2.0 / 3.0))}
    t = text.strip().lower().replace(" ", "")
    if t in named:
        return named[t]
    try:
        return float(t)
    except ValueError:
        _fail_config(
            f"cannot parse gamma {text!r}; use a float, 'pi/2' or 'asin(2/3)'"
        )


def _config_from(path: str | None, **overrides) -> RunConfig:
    base = {}
    if path is not None:
        try:
            with open(path) as fh:
                base = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            _fail_config(f"cannot read config {path}: {exc}")
        unknown = set(base) - {f.name for f in dataclasses.fields(RunConfig)}
        if unknown:
            _fail_config(f"unknown config fields: {sorted(unknown)}")
    merged = {**base, **{k: v for k, v in overrides.items() if v is not None}}
    try:
        cfg = RunConfig(**merged)
        cfg.validate()
    except (TypeError, ValueError) as exc:
        _fail_config(str(exc))
    return cfg


def _echo_rows(sweep: Sweep) -> None:
    for example, c in sweep.rows():
        status = "PASS" if c.passed else "FAIL"
        click.echo(
            f"{status}  {example:22s} {c.csv_name:28s} "
            f"residual {c.residual:.3e}  tol {c.tol:.1e}"
        )


def _emit(sweep: Sweep, json_path, csv_path, timing: bool) -> None:
    for path, text in (
        (json_path, lambda: sweep.to_json(include_timing=timing)),
        (csv_path, lambda: sweep.to_csv()),
    ):
        if not path:
            continue
        try:
            with open(path, "w") as fh:
                fh.write(text())
        except OSError as exc:
            _fail_config(f"cannot write report to {path}: {exc}")
        click.echo(f"wrote {path}")


@click.group()
def main():
    """Verification toolkit for the explicit Lagrangian and
    pseudoholomorphic examples in the round 6-sphere."""


@main.command()
@click.argument("example_id")
@click.option("--grid", type=int, default=None, help="Samples per axis (>= 8).")
@click.option("--tol-lag", "tol_lag", type=float, default=None,
              help="Tolerance for the Lagrangian / pseudoholomorphic residual.")
@click.option("--seed", type=int, default=None, help="Seed for sampled checks.")
@click.option("--jet-mode", type=click.Choice(["analytic", "fd"]), default=None,
              help="Derivative source; fd strips analytic jets.")
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="JSON file with run-configuration fields.")
@click.option("--json", "json_path", type=click.Path(), default=None,
              help="Write the report as JSON here.")
@click.option("--csv", "csv_path", type=click.Path(), default=None,
              help="Write the report as CSV here.")
@click.option("--timing", is_flag=True, help="Include wall time in JSON output.")
def verify(example_id, grid, tol_lag, seed, jet_mode, config_path, json_path,
           csv_path, timing):
    """Run every check of one example (see `sweep --help` for ids)."""
    cfg = _config_from(
        config_path, example=example_id, grid=grid, tol_lagrangian=tol_lag,
        seed=seed, jet_mode=jet_mode,
    )
    try:
        report = run_verify(cfg)
    except KeyError as exc:
        _fail_config(exc.args[0])
    sweep = Sweep(suite="verify", reports=[report])
    _echo_rows(sweep)
    _emit(sweep, json_path or cfg.output, csv_path, timing)
    click.echo(f"{report.example}: {'PASS' if report.passed else 'FAIL'}")
    sys.exit(0 if report.passed else EXIT_FAIL)


@main.command("classify-cubic")
@click.option("--tensor", "tensor_path", type=click.Path(), default=None,
              help="3x3x3 symmetric traceless tensor (.npy or JSON).")
@click.option("--params", default=None,
              help="Normal-form parameters r,s,a,b (comma separated).")
def classify_cubic(tensor_path, params):
    """Stabilizer class of a harmonic cubic."""
    if (tensor_path is None) == (params is None):
        _fail_config("give exactly one of --tensor or --params")
    if params is not None:
        try:
            r, s, a, b = (float(x) for x in params.split(","))
        except ValueError:
            _fail_config(f"cannot parse --params {params!r}; want r,s,a,b")
        h = normal_form(r, s, a, b)
    else:
        h = _load_tensor(tensor_path)
    try:
        cls = classify_stabilizer(h)
    except ValueError as exc:
        _fail_config(str(exc))
    w, _ = jacobi_eigh(gauss_map(h))
    click.echo(json.dumps(
        {"class": cls.name, "K_eigenvalues": [float(x) for x in w]},
        sort_keys=True,
    ))


@main.command()
@click.option("--tensor", "tensor_path", type=click.Path(), required=True,
              help="3x3x3 harmonic cubic (.npy or JSON).")
def gauss(tensor_path):
    """Quadratic curvature invariant K of a harmonic cubic."""
    h = _load_tensor(tensor_path)
    if h.shape != (3, 3, 3):
        _fail_config(f"tensor must be 3x3x3, got shape {h.shape}")
    K = gauss_map(h)
    w, _ = jacobi_eigh(K)
    click.echo(json.dumps(
        {
            "K": [[float(x) for x in row] for row in K],
            "eigenvalues": [float(x) for x in w],
            "trace": float(np.trace(K)),
            "sigma": float(sigma(K)),
            "in_gauss_image": bool(in_gauss_image(K)),
        },
        sort_keys=True,
    ))


@main.command()
@click.option("--K", "k_path", type=click.Path(), required=True,
              help="Symmetric 3x3 curvature matrix (.npy or JSON).")
@click.option("--r", "r_value", type=float, required=True,
              help="Ruling parameter; must lie in the admissible interval.")
def fiber(k_path, r_value):
    """Reconstruct a harmonic cubic with the given curvature matrix."""
    K = _load_tensor(k_path)
    if K.shape != (3, 3):
        _fail_config(f"K must be 3x3, got shape {K.shape}")
    try:
        h = fiber_solve(K, r_value)
        bounds = fiber_r_bounds(K)
    except ValueError as exc:
        _fail_config(str(exc))
    roundtrip = float(np.max(np.abs(gauss_map(h) - K)))
    click.echo(json.dumps(
        {
            "cubic": [[[float(x) for x in row] for row in mat] for mat in h],
            "r_bounds": [float(bounds[0]), float(bounds[1])],
            "roundtrip_residual": roundtrip,
        },
        sort_keys=True,
    ))


@main.command()
@click.option("--base", "base_id", required=True,
              help="A 2-parameter example id (boruvka, clifford).")
@click.option("--bundle", type=click.Choice(["N1", "N2", "hopf"]), required=True,
              help="Circle-plane bundle along the base.")
@click.option("--gamma", default="pi/2", show_default=True,
              help="Tube radius: float, 'pi/2' or 'asin(2/3)'.")
@click.option("--grid", type=int, default=8, show_default=True,
              help="Samples per axis for the residual sweep.")
@click.option("--tol-lag", "tol_lag", type=float, default=1e-8, show_default=True)
def tube(base_id, bundle, gamma, grid, tol_lag):
    """Build a tube over a pseudoholomorphic base and test whether the
    result is Lagrangian and minimal."""
    try:
        base = build_example(base_id)
    except KeyError as exc:
        _fail_config(exc.args[0])
    if base.dim != 2:
        _fail_config(f"{base_id} is not a 2-parameter base")
    gam = _parse_gamma(gamma)
    maker = {"N1": tubes_mod.bundle_N1, "N2": tubes_mod.bundle_N2,
             "hopf": tubes_mod.bundle_hopf}[bundle]
    fiber_domain = None
    if bundle == "hopf" and abs(gam - np.pi / 2.0) < 1e-12:
        # the suspension collapses at the antipodal fiber angle
        fiber_domain = (1e-2, np.pi - 1e-2)
    spec = tubes_mod.TubeSpec(
        base=base, plane_bundle=maker(base), gamma=gam, bundle_name=bundle
    )
    try:
        patch = tubes_mod.make_tube(spec, fiber_domain=fiber_domain)
    except ValueError as exc:
        _fail_config(str(exc))
    lag = lagrangian_residual(patch, n_per_axis=grid)
    mean = float(np.linalg.norm(frame_at(patch, patch.anchor).mean_curvature))
    ok = lag <= tol_lag and mean <= 1e-6
    click.echo(json.dumps(
        {
            "tube": patch.name,
            "gamma": gam,
            "lagrangian_residual": lag,
            "mean_curvature": mean,
            "pass": bool(ok),
        },
        sort_keys=True,
    ))
    sys.exit(0 if ok else EXIT_FAIL)


@main.command()
@click.argument("suite", type=click.Choice(["all", "cubics", "tubes"]))
@click.option("--seed", type=int, default=None, help="Seed for randomized rows.")
@click.option("--grid", type=int, default=None, help="Samples per axis (>= 8).")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--json", "json_path", type=click.Path(), default=None)
@click.option("--csv", "csv_path", type=click.Path(), default=None)
@click.option("--timing", is_flag=True, help="Include wall time in JSON output.")
def sweep(suite, seed, grid, config_path, json_path, csv_path, timing):
    """Run a suite over the registry (ids: one per gallery example plus
    the derived tubes) and write machine-readable artifacts."""
    cfg = _config_from(config_path, seed=seed, grid=grid)
    sw = run_sweep(suite, cfg)
    _echo_rows(sw)
    _emit(sw, json_path or cfg.output, csv_path, timing)
    n = sum(1 for _ in sw.rows())
    n_fail = sum(1 for _, c in sw.rows() if not c.passed)
    click.echo(f"{suite}: {n - n_fail}/{n} checks passed"
               + (f", {n_fail} FAILED" if n_fail else ""))
    sys.exit(0 if sw.passed else EXIT_FAIL)


if __name__ == "__main__":
    main()
