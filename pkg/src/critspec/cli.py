"""Experiment runner and command-line interface.

Each experiment builds a configuration of supports and weights, assembles
the operator, solves the spectrum, and compares measured quantities (fit
coefficients, counts, covering statistics) against the predicted values.
Reports are deterministic given configuration and seed: the report hash is
taken over everything except the wall-clock runtime.

Exit codes: 0 all criteria pass, 1 a criterion failed, 2 usage error,
3 resource limit.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import asymptotics, covering, orlicz, spectra
from .assemble import (WeightFn, assemble_curve_operator,
                       assemble_measure_operator, assemble_mixed,
                       make_cell_grid)
from .errors import (InsufficientDataError, InvalidArgumentError,
                     ResourceLimitError)
from .geometry import (Circle, make_cantor_measure, make_polygon_curve,
                       make_smooth_curve, make_uniform_square_measure)
from .kernels import lower_order_kernel, reference_kernel

DEFAULT_WINDOW = (20, 60)
DEFAULT_MAX_MATRIX = 4200


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n: int = 512
    seed: int = 0
    window: tuple[int, int] = DEFAULT_WINDOW
    params: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    out_dir: str | None = None
    max_matrix_n: int = DEFAULT_MAX_MATRIX

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "n": self.n,
            "seed": self.seed,
            "window": list(self.window),
            "params": self.params,
            "tolerances": self.tolerances,
            "max_matrix_n": self.max_matrix_n,
        }

    def hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    @staticmethod
    def from_dict(data: dict) -> "ExperimentConfig":
        return ExperimentConfig(
            experiment=data["experiment"],
            n=int(data.get("n", 512)),
            seed=int(data.get("seed", 0)),
            window=tuple(data.get("window", DEFAULT_WINDOW)),
            params=dict(data.get("params", {})),
            tolerances=dict(data.get("tolerances", {})),
            out_dir=data.get("out_dir"),
            max_matrix_n=int(data.get("max_matrix_n", DEFAULT_MAX_MATRIX)),
        )


@dataclass(frozen=True)
class ExperimentReport:
    config: dict
    config_hash: str
    measured: dict
    expected: dict
    criteria: tuple[dict, ...]
    passed: bool
    runtime_seconds: float

    def payload(self) -> dict:
        from . import __version__
        return {
            "version": __version__,
            "config": self.config,
            "config_hash": self.config_hash,
            "measured": self.measured,
            "expected": self.expected,
            "criteria": list(self.criteria),
            "passed": self.passed,
        }

    def hash(self) -> str:
        blob = json.dumps(self.payload(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def to_dict(self) -> dict:
        out = self.payload()
        out["report_hash"] = self.hash()
        out["runtime_seconds"] = self.runtime_seconds
        return out

    def write(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _criterion(name: str, value: float, target: float, tolerance: float,
               relative: bool = True) -> dict:
    if relative:
        passed = abs(value - target) <= tolerance * abs(target)
    else:
        passed = abs(value - target) <= tolerance
    return {"name": name, "value": value, "target": target,
            "tolerance": tolerance, "relative": relative,
            "passed": bool(passed)}


def _bound_criterion(name: str, value: float, bound: float) -> dict:
    return {"name": name, "value": value, "target": bound,
            "tolerance": 0.0, "relative": False,
            "passed": bool(value <= bound)}


def _check_matrix_budget(n: int, config: ExperimentConfig) -> None:
    if n > config.max_matrix_n:
        raise ResourceLimitError(
            "matrix size %d exceeds the cap %d" % (n, config.max_matrix_n))


def _weight_from_params(params: dict) -> WeightFn:
    entry = params.get("weight", {"kind": "constant", "value": 1.0})
    kind = entry.get("kind", "constant")
    if kind == "constant":
        return WeightFn.constant(float(entry.get("value", 1.0)))
    if kind == "angular":
        return WeightFn.angular()
    if kind == "tabulated":
        return WeightFn.tabulated(entry["values"])
    raise InvalidArgumentError("unknown weight kind %r" % (kind,))


def _artifacts(out_dir, spectrum, prefix="spectrum") -> None:
    if out_dir is None or spectrum is None:
        return
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    spectra.write_spectrum_csv(spectrum, out / ("%s.csv" % prefix))
    pos = spectrum.side("+")
    hi = min(spectrum.trusted_k_max, len(pos))
    if hi >= 2:
        grid = np.geomspace(pos[hi - 1], pos[0], 40)
        spectra.write_counting_csv(spectrum, grid,
                                   out / ("%s_counting.csv" % prefix))


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------

def _exp_circle_weyl(config: ExperimentConfig):
    params = config.params
    radius = float(params.get("radius", 1.0))
    _check_matrix_budget(config.n, config)
    mesh = make_smooth_curve(Circle(radius=radius), config.n)
    weight = _weight_from_params(params)
    op = assemble_curve_operator(mesh, weight, reference_kernel())
    spectrum = spectra.eigensolve(op)
    fit = spectra.weyl_fit(spectrum, config.window)
    expected = asymptotics.coefficient_surface(mesh, weight, label="circle")
    tol = float(config.tolerances.get("coefficient", 0.05))
    criteria = [_criterion("c_plus", fit.c_plus, expected.c_plus, tol)]
    measured = {"c_plus": fit.c_plus, "c_minus": fit.c_minus,
                "dispersion": fit.dispersion}
    return measured, {"c_plus": expected.c_plus,
                      "c_minus": expected.c_minus}, criteria, spectrum


def _exp_polygon_weyl(config: ExperimentConfig):
    params = config.params
    vertices = params.get("vertices",
                          [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    grading = float(params.get("grading_exponent", 3.0))
    panels = max(2, config.n // len(vertices))
    if panels % 2:
        panels += 1
    mesh = make_polygon_curve(vertices, panels, grading)
    _check_matrix_budget(mesh.n_nodes, config)
    weight = _weight_from_params(params)
    op = assemble_curve_operator(mesh, weight, reference_kernel())
    spectrum = spectra.eigensolve(op)
    fit = spectra.weyl_fit(spectrum, config.window)
    expected = asymptotics.coefficient_surface(mesh, weight, label="polygon")
    tol = float(config.tolerances.get("coefficient", 0.10))
    criteria = [_criterion("c_plus", fit.c_plus, expected.c_plus, tol)]
    measured = {"c_plus": fit.c_plus, "dispersion": fit.dispersion,
                "n_nodes": mesh.n_nodes}
    return measured, {"c_plus": expected.c_plus}, criteria, spectrum


def _exp_signed_weight(config: ExperimentConfig):
    params = dict(config.params)
    params.setdefault("weight", {"kind": "angular"})
    radius = float(params.get("radius", 1.0))
    _check_matrix_budget(config.n, config)
    mesh = make_smooth_curve(Circle(radius=radius), config.n)
    weight = _weight_from_params(params)
    op = assemble_curve_operator(mesh, weight, reference_kernel())
    spectrum = spectra.eigensolve(op)
    fit = spectra.weyl_fit(spectrum, config.window)
    expected = asymptotics.coefficient_surface(mesh, weight, label="circle")
    tol = float(config.tolerances.get("coefficient", 0.10))
    criteria = [
        _criterion("c_plus", fit.c_plus, expected.c_plus, tol),
        _criterion("c_minus", fit.c_minus, expected.c_minus, tol),
    ]
    measured = {"c_plus": fit.c_plus, "c_minus": fit.c_minus,
                "dispersion": fit.dispersion}
    return measured, {"c_plus": expected.c_plus,
                      "c_minus": expected.c_minus}, criteria, spectrum


def _exp_two_surfaces(config: ExperimentConfig):
    params = config.params
    r1 = float(params.get("radius_1", 1.0))
    r2 = float(params.get("radius_2", 2.0))
    center_2 = tuple(params.get("center_2", (5.0, 0.0)))
    n1 = max(8, (config.n // 3) & ~1)
    n2 = max(8, (config.n - n1) & ~1)
    _check_matrix_budget(n1 + n2, config)
    mesh1 = make_smooth_curve(Circle(radius=r1), n1)
    mesh2 = make_smooth_curve(Circle(center=center_2, radius=r2), n2)
    weight = _weight_from_params(params)
    kern = reference_kernel()
    combined = assemble_mixed(None, [(mesh1, weight), (mesh2, weight)], kern)
    spectrum = spectra.eigensolve(combined)
    fit = spectra.weyl_fit(spectrum, config.window)
    expected = asymptotics.coefficient_total([
        asymptotics.coefficient_surface(mesh1, weight, label="circle_1"),
        asymptotics.coefficient_surface(mesh2, weight, label="circle_2"),
    ])
    tol = float(config.tolerances.get("coefficient", 0.10))
    criteria = [_criterion("c_plus", fit.c_plus, expected.c_plus, tol)]
    measured = {"c_plus": fit.c_plus, "dispersion": fit.dispersion}

    if config.out_dir is not None:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        sp1 = spectra.eigensolve(assemble_curve_operator(mesh1, weight, kern))
        sp2 = spectra.eigensolve(assemble_curve_operator(mesh2, weight, kern))
        pos = spectrum.side("+")
        hi = min(spectrum.trusted_k_max, len(pos))
        grid = np.geomspace(pos[hi - 1], pos[0], 40)
        for name, sp in (("combined", spectrum), ("surface_1", sp1),
                         ("surface_2", sp2)):
            spectra.write_counting_csv(sp, grid, out / ("counting_%s.csv" % name))
    return measured, {"c_plus": expected.c_plus}, criteria, spectrum


def _exp_mixed_ac_singular(config: ExperimentConfig):
    params = config.params
    disk_radius = float(params.get("disk_radius", 1.0))
    circle_radius = float(params.get("circle_radius", 0.5))
    delta = float(params.get("delta", 0.035))
    n_curve = int(params.get("n_curve", 192))
    v0 = float(params.get("v0", 1.0))
    mesh = make_smooth_curve(Circle(radius=circle_radius), n_curve)
    weight = _weight_from_params(params)
    grid = make_cell_grid(("disk", (0.0, 0.0), disk_radius), delta, v0=v0,
                          exclude_meshes=[mesh])
    _check_matrix_budget(grid.n_cells + n_curve, config)
    op = assemble_mixed(grid, [(mesh, weight)], reference_kernel())
    spectrum = spectra.eigensolve(op)
    fit = spectra.weyl_fit(spectrum, config.window)
    expected = asymptotics.coefficient_total([
        asymptotics.coefficient_ac(np.pi * disk_radius ** 2, v0, label="disk"),
        asymptotics.coefficient_surface(mesh, weight, label="circle"),
    ])
    tol = float(config.tolerances.get("coefficient", 0.10))
    criteria = [_criterion("c_plus", fit.c_plus, expected.c_plus, tol)]
    measured = {"c_plus": fit.c_plus, "dispersion": fit.dispersion,
                "n_cells": grid.n_cells,
                "resolved_area": grid.n_cells * delta ** 2}
    return measured, {"c_plus": expected.c_plus}, criteria, spectrum


def _sharpness(measure_op, weight_obj, obj) -> float:
    spectrum = spectra.eigensolve(measure_op)
    norm = orlicz.surface_norm(weight_obj, obj)
    pos = spectrum.side("+")
    hi = min(spectrum.trusted_k_max, len(pos))
    grid = pos[4:hi]
    return covering.empirical_estimate_constant(spectrum, norm, grid)


def _exp_cantor_estimate(config: ExperimentConfig):
    params = config.params
    depth = int(params.get("depth", 10))
    _check_matrix_budget(2 ** depth, config)
    weight = _weight_from_params(params)
    kern = reference_kernel()
    sups = {}
    for d in (depth - 1, depth):
        measure = make_cantor_measure(d)
        op = assemble_measure_operator(measure, weight, kern)
        sups[d] = _sharpness(op, weight, measure)
    variation = abs(sups[depth] / sups[depth - 1] - 1.0)
    tol = float(config.tolerances.get("stability", 0.25))
    criteria = [
        _bound_criterion("sup_variation_on_refinement", variation, tol),
    ]
    measured = {"sup_constant": sups[depth],
                "sup_constant_coarse": sups[depth - 1],
                "variation": variation}
    measure = make_cantor_measure(depth)
    spectrum = spectra.eigensolve(
        assemble_measure_operator(measure, weight, kern))
    return measured, {"finite_constant": "bounded"}, criteria, spectrum


def _exp_covering_count(config: ExperimentConfig):
    params = config.params
    grid_n = int(params.get("grid_n", 16))
    depth = int(params.get("cantor_depth", 8))
    kappa = int(params.get("kappa", 4))
    decade_points = int(params.get("decade_points", 8))
    weight = WeightFn.constant(1.0)

    measures = {
        "uniform_square": make_uniform_square_measure(grid_n),
        "cantor": make_cantor_measure(depth),
    }
    measured = {}
    criteria = []
    for name, measure in measures.items():
        vals = weight.values_on(measure)
        rho_inf = orlicz.surface_norm(vals, measure)
        lams = kappa * rho_inf / 4.0 / (10.0 ** np.linspace(0.0, 1.0, decade_points))
        products = []
        for lam in lams:
            rep = covering.build_covering(measure, vals, float(lam),
                                          kappa_config=kappa)
            products.append(rep.cube_count * lam)
        ratio = float(max(products) / min(products))
        measured[name] = {"count_times_lambda": [float(p) for p in products],
                          "ratio": ratio}
        criteria.append(_bound_criterion("%s_count_law_ratio" % name, ratio,
                                         float(config.tolerances.get("ratio", 2.0))))

    # dyadic quartering: constant weight splits the global functional in four
    uni = measures["uniform_square"]
    vals = weight.values_on(uni)
    rho_inf = orlicz.surface_norm(vals, uni)
    rep4 = covering.build_covering(uni, vals, kappa * rho_inf / 4.0,
                                   kappa_config=kappa)
    measured["dyadic_cube_count"] = rep4.cube_count
    criteria.append(_criterion("dyadic_cube_count", rep4.cube_count, 4.0,
                               0.0, relative=False))
    if config.out_dir is not None:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "covering_dyadic.txt").write_text(rep4.to_text())
    return measured, {"dyadic_cube_count": 4}, criteria, None


def _exp_lower_order_decay(config: ExperimentConfig):
    params = config.params
    radius = float(params.get("radius", 1.0))
    n = int(params.get("n", min(config.n, 256)))
    _check_matrix_budget(n, config)
    mesh = make_smooth_curve(Circle(radius=radius), n)
    weight = _weight_from_params(params)
    op = assemble_curve_operator(mesh, weight, lower_order_kernel())
    spectrum = spectra.eigensolve(op)
    pos = spectrum.side("+")
    k10 = 10 * pos[9]
    k40 = 40 * pos[39]
    ratio = float(k40 / k10)
    tol = float(config.tolerances.get("decay_ratio", 0.5))
    criteria = [_bound_criterion("k_lambda_k_decay_ratio", ratio, tol)]
    measured = {"k_lambda_10": float(k10), "k_lambda_40": float(k40),
                "ratio": ratio}
    return measured, {"decay": "k lambda_k -> 0"}, criteria, spectrum


def _exp_coefficient_table(config: ExperimentConfig):
    max_dim = int(config.params.get("max_dim", 6))
    tol = float(config.tolerances.get("agreement", 1e-8))
    rows = []
    worst = 0.0
    for n_dim in range(2, max_dim + 1):
        for d in range(1, n_dim):
            closed = asymptotics.r_symbol_closed_form(n_dim, d)
            quad_val = asymptotics.r_symbol_quadrature(n_dim, d)
            diff = abs(closed - quad_val) / max(1.0, abs(closed))
            worst = max(worst, diff)
            rows.append({"N": n_dim, "d": d, "closed": closed,
                         "quadrature": quad_val, "agree": bool(diff <= tol)})
    criteria = [_bound_criterion("worst_disagreement", worst, tol)]
    measured = {"rows": rows, "worst_disagreement": worst}
    if config.out_dir is not None:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "coefficient_table.json", "w") as fh:
            json.dump(rows, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return measured, {"agreement_tol": tol}, criteria, None


EXPERIMENTS = {
    "circle-weyl": _exp_circle_weyl,
    "polygon-weyl": _exp_polygon_weyl,
    "signed-weight": _exp_signed_weight,
    "two-surfaces": _exp_two_surfaces,
    "mixed-ac-singular": _exp_mixed_ac_singular,
    "cantor-estimate": _exp_cantor_estimate,
    "covering-count": _exp_covering_count,
    "lower-order-decay": _exp_lower_order_decay,
    "coefficient-table": _exp_coefficient_table,
}


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Execute one experiment and return its report (writing artifacts
    when an output directory is configured)."""
    if config.experiment not in EXPERIMENTS:
        raise InvalidArgumentError(
            "unknown experiment %r; see list-experiments" % (config.experiment,))
    start = time.perf_counter()
    measured, expected, criteria, spectrum = EXPERIMENTS[config.experiment](config)
    runtime = time.perf_counter() - start
    report = ExperimentReport(
        config=config.to_dict(),
        config_hash=config.hash(),
        measured=measured,
        expected=expected,
        criteria=tuple(criteria),
        passed=all(c["passed"] for c in criteria),
        runtime_seconds=runtime,
    )
    if config.out_dir is not None:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        report.write(out / "report.json")
        _artifacts(config.out_dir, spectrum)
    return report


def emit_plotdata(spectrum: spectra.Spectrum, out_dir,
                  prefix: str = "spectrum") -> list[str]:
    """Write the plot-ready CSV pair for a spectrum; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = [str(out / ("%s.csv" % prefix))]
    spectra.write_spectrum_csv(spectrum, paths[0])
    pos = spectrum.side("+")
    neg = spectrum.side("-")
    mags = np.concatenate([pos, neg])
    if mags.size:
        grid = np.geomspace(mags.min(), mags.max(), 40)
        path = str(out / ("%s_counting.csv" % prefix))
        spectra.write_counting_csv(spectrum, grid, path)
        paths.append(path)
    else:
        path = str(out / ("%s_counting.csv" % prefix))
        spectra.write_counting_csv(spectrum, [], path)
        paths.append(path)
    return paths


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="critspec",
        description="spectral experiments for weighted singular-measure operators")
    sub = parser.add_subparsers(dest="command")

    run = sub.add_parser("run", help="run one experiment")
    run.add_argument("--experiment", required=False)
    run.add_argument("--config", type=str, default=None,
                     help="JSON config file (overridden by flags)")
    run.add_argument("--out", type=str, default=None)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--n", type=int, default=None)

    sub.add_parser("list-experiments", help="list experiment names")

    coeff = sub.add_parser("coeff", help="emit the coefficient table")
    coeff.add_argument("--max-dim", type=int, default=6)
    coeff.add_argument("--out", type=str, default=None)

    spectrum_cmd = sub.add_parser("spectrum", help="spectrum of a single support")
    spectrum_cmd.add_argument("--shape", choices=["circle", "square", "cantor"],
                          default="circle")
    spectrum_cmd.add_argument("--radius", type=float, default=1.0)
    spectrum_cmd.add_argument("--depth", type=int, default=8)
    spectrum_cmd.add_argument("--n", type=int, default=256)
    spectrum_cmd.add_argument("--weight", choices=["constant", "angular"],
                          default="constant")
    spectrum_cmd.add_argument("--value", type=float, default=1.0)
    spectrum_cmd.add_argument("--out", type=str, default=".")

    norm_cmd = sub.add_parser("orlicz-norm",
                              help="averaged norm of a weight on a support")
    norm_cmd.add_argument("--shape", choices=["circle", "cantor", "square-grid"],
                          default="cantor")
    norm_cmd.add_argument("--depth", type=int, default=8)
    norm_cmd.add_argument("--n", type=int, default=64)
    norm_cmd.add_argument("--value", type=float, default=1.0)

    cov_cmd = sub.add_parser("covering", help="build a covering report")
    cov_cmd.add_argument("--measure", choices=["uniform", "cantor"],
                         default="uniform")
    cov_cmd.add_argument("--grid-n", type=int, default=16)
    cov_cmd.add_argument("--depth", type=int, default=8)
    cov_cmd.add_argument("--lam", type=float, required=True)
    cov_cmd.add_argument("--kappa", type=int, default=4)
    cov_cmd.add_argument("--out", type=str, default=None)
    return parser


def _cmd_run(args) -> int:
    if args.config:
        with open(args.config) as fh:
            config = ExperimentConfig.from_dict(json.load(fh))
    elif args.experiment:
        config = ExperimentConfig(experiment=args.experiment)
    else:
        print("run needs --experiment or --config", file=sys.stderr)
        return 2
    overrides = {}
    if args.experiment:
        overrides["experiment"] = args.experiment
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.n is not None:
        overrides["n"] = args.n
    data = config.to_dict()
    data.update(overrides)
    data["out_dir"] = args.out if args.out is not None else config.out_dir
    config = ExperimentConfig.from_dict(data)
    report = run_experiment(config)
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    return 0 if report.passed else 1


def _cmd_spectrum(args) -> int:
    weight = (WeightFn.constant(args.value) if args.weight == "constant"
              else WeightFn.angular())
    kern = reference_kernel()
    if args.shape == "circle":
        mesh = make_smooth_curve(Circle(radius=args.radius), args.n)
        op = assemble_curve_operator(mesh, weight, kern)
    elif args.shape == "square":
        panels = max(2, args.n // 4)
        if panels % 2:
            panels += 1
        mesh = make_polygon_curve(
            [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]], panels, 3.0)
        op = assemble_curve_operator(mesh, weight, kern)
    else:
        measure = make_cantor_measure(args.depth)
        op = assemble_measure_operator(measure, weight, kern)
    spectrum = spectra.eigensolve(op)
    paths = emit_plotdata(spectrum, args.out)
    print("\n".join(paths))
    return 0


def _cmd_orlicz_norm(args) -> int:
    if args.shape == "circle":
        obj = make_smooth_curve(Circle(radius=1.0), args.n)
    elif args.shape == "cantor":
        obj = make_cantor_measure(args.depth)
    else:
        obj = make_uniform_square_measure(args.n)
    value = orlicz.surface_norm(WeightFn.constant(args.value), obj)
    print(json.dumps({"shape": args.shape, "value": value}, sort_keys=True))
    return 0


def _cmd_covering(args) -> int:
    if args.measure == "uniform":
        measure = make_uniform_square_measure(args.grid_n)
    else:
        measure = make_cantor_measure(args.depth)
    weight = WeightFn.constant(1.0)
    rep = covering.build_covering(measure, weight.values_on(measure),
                                  args.lam, kappa_config=args.kappa)
    text = rep.to_text()
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        (Path(args.out) / "covering.txt").write_text(text)
    print(text, end="")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "list-experiments":
            print("\n".join(sorted(EXPERIMENTS)))
            return 0
        if args.command == "coeff":
            config = ExperimentConfig(experiment="coefficient-table",
                                      params={"max_dim": args.max_dim},
                                      out_dir=args.out)
            report = run_experiment(config)
            print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
            return 0 if report.passed else 1
        if args.command == "spectrum":
            return _cmd_spectrum(args)
        if args.command == "orlicz-norm":
            return _cmd_orlicz_norm(args)
        if args.command == "covering":
            return _cmd_covering(args)
        parser.print_help()
        return 2
    except (InvalidArgumentError, InsufficientDataError, FileNotFoundError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print("resource limit: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
