"""Command-line front end: run a configured study and write its reports.

    stripedbox <spectrum|sweep|density|validate> --config <path-or-name>
               [--out-dir DIR] [--nmax N] [--threads N]

Numeric output goes to full-precision CSV (17 significant digits) and JSON
reports carrying a schema_version and the complete resolved config, so runs
are reproducible byte for byte. Sweep and density modes additionally render
SVG figures next to the delimited output. Exit codes: 0 success, 1 usage or
config error, 2 numerical failure, 3 validation failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from stripedbox import __version__
from stripedbox.assembly import (
    QuadratureError,
    assemble_by_quadrature,
    assemble_combined,
)
from stripedbox.config import (
    SCHEMA_VERSION,
    ConfigError,
    StudyConfig,
    bundled_config_names,
    resolve_config,
)
from stripedbox.eigen import ORDERING, EigensolverError, fix_phase, solve_spectrum
from stripedbox.model import is_hermitian, is_pt_symmetric
from stripedbox.pt_analysis import (
    PairingError,
    conjugation_closure_delta,
    detect_crossovers,
    run_sweep,
)
from stripedbox.validation import cross_validate
from stripedbox.wavefunction import density_grid, wavefunction_from_spectrum

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2
EXIT_VALIDATION = 3

# Eigenvalue indices in reports are 1-based; "ordering" states the sort rule.
_ORDERING_NOTE = (
    "levels are numbered 1..nmax ascending by real part; trajectory labels that "
    "rank levels by |E| map to these indices per sample via the reported values"
)


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else _fmt(cell) for cell in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def _report_skeleton(config: StudyConfig, mode: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "generator": f"stripedbox {__version__}",
        "mode": mode,
        "config": config.to_mapping(),
    }


def _solve_study(config: StudyConfig):
    matrix = assemble_combined(
        config.geometry, config.base_potentials, config.base_field, config.basis
    )
    return fix_phase(solve_spectrum(matrix))


def run_spectrum_study(config: StudyConfig, out_dir: Path) -> list[Path]:
    spectrum = _solve_study(config)

    csv_path = out_dir / "spectrum.csv"
    _write_csv(
        csv_path,
        ["index", "re_energy_ry", "im_energy_ry", "residual"],
        (
            (str(i + 1), e.real, e.imag, r)
            for i, (e, r) in enumerate(zip(spectrum.eigenvalues, spectrum.residuals))
        ),
    )

    report = _report_skeleton(config, "spectrum")
    report.update(
        {
            "basis_size": config.basis.nmax,
            "ordering": ORDERING,
            "ordering_note": _ORDERING_NOTE,
            "matrix_frobenius_norm": float(np.linalg.norm(spectrum.matrix.entries)),
            "max_residual": float(spectrum.residuals.max()),
            "eigenvalues": [
                {"index": i + 1, "re": e.real, "im": e.imag, "residual": float(r)}
                for i, (e, r) in enumerate(zip(spectrum.eigenvalues, spectrum.residuals))
            ],
        }
    )
    json_path = out_dir / "spectrum.json"
    _write_json(json_path, report)
    return [csv_path, json_path]


def run_sweep_study(config: StudyConfig, out_dir: Path, workers: int) -> list[Path]:
    from stripedbox.figures import save_sweep_figures

    params = config.sweep
    result = run_sweep(config.sweep_spec(), workers=workers, refine=params.refine)

    phase = ["broken" if c.broken else "unbroken" for c in result.classifications]
    rows = []
    for k, lam in enumerate(result.lambdas):
        for i in range(result.branches.shape[0]):
            e = result.branches[i, k]
            rows.append((float(lam), str(i + 1), e.real, e.imag, phase[k]))
    csv_path = out_dir / "sweep.csv"
    _write_csv(
        csv_path, ["lambda", "branch", "re_energy_ry", "im_energy_ry", "phase"], rows
    )

    crossovers = detect_crossovers(result)
    report = _report_skeleton(config, "sweep")
    report.update(
        {
            "samples": int(result.lambdas.shape[0]),
            "exceptional_points": [
                {
                    "lambda_c": ep.lambda_c,
                    "branches": [i + 1 for i in ep.branches],
                    "kind": ep.kind,
                }
                for ep in result.exceptional_points
            ],
            "crossovers": [
                {
                    "lambda": ev.lambda_value,
                    "restored_magnitude_ranks": [i + 1 for i in ev.restored],
                    "broken_magnitude_ranks": [i + 1 for i in ev.broken],
                }
                for ev in crossovers
            ],
        }
    )
    json_path = out_dir / "exceptional_points.json"
    _write_json(json_path, report)

    re_path = out_dir / "sweep_re.svg"
    im_path = out_dir / "sweep_im.svg"
    save_sweep_figures(result, re_path, im_path, n_branches=params.plot_branches)
    return [csv_path, json_path, re_path, im_path]


def run_density_study(config: StudyConfig, out_dir: Path) -> list[Path]:
    from stripedbox.figures import save_density_figure

    params = config.density
    spectrum = _solve_study(config)
    wf = wavefunction_from_spectrum(spectrum, params.level - 1)
    grid = density_grid(wf, params.nx_samples, params.ny_samples)

    rows = (
        (float(grid.x[i]), float(grid.y[j]), float(grid.values[i, j]))
        for i in range(grid.x.size)
        for j in range(grid.y.size)
    )
    csv_path = out_dir / "density.csv"
    _write_csv(csv_path, ["x_bohr", "y_bohr", "density"], rows)

    energy = spectrum.eigenvalues[params.level - 1]
    svg_path = out_dir / "density.svg"
    save_density_figure(
        grid,
        svg_path,
        title=f"level {params.level}:  E = {energy.real:.4f} {energy.imag:+.4f}i Ry",
    )
    return [csv_path, svg_path]


def run_validate_study(config: StudyConfig, out_dir: Path) -> tuple[list[Path], bool]:
    params = config.validate
    checks = []

    closed = assemble_combined(
        config.geometry, config.base_potentials, config.base_field, config.basis
    )
    quad = assemble_by_quadrature(
        config.geometry, config.base_potentials, config.base_field, config.basis
    )
    quad_delta = float(np.max(np.abs(closed.entries - quad.entries)))
    checks.append(
        {
            "name": "closed_form_vs_quadrature",
            "delta": quad_delta,
            "tolerance": params.quad_check_tol,
            "passed": quad_delta <= params.quad_check_tol,
        }
    )

    spectrum = solve_spectrum(closed)
    trace_delta = float(abs(np.trace(closed.entries) - spectrum.eigenvalues.sum()))
    trace_tol = 1e-8 * max(1.0, abs(complex(np.trace(closed.entries))))
    checks.append(
        {
            "name": "trace_equals_eigenvalue_sum",
            "delta": trace_delta,
            "tolerance": trace_tol,
            "passed": trace_delta <= trace_tol,
        }
    )

    hermitian = is_hermitian(config.base_potentials, config.base_field)
    if hermitian:
        imag_max = float(np.max(np.abs(spectrum.eigenvalues.imag)))
        imag_tol = 1e-10 * max(1.0, float(np.max(np.abs(spectrum.eigenvalues.real))))
        checks.append(
            {
                "name": "hermitian_real_spectrum",
                "delta": imag_max,
                "tolerance": imag_tol,
                "passed": imag_max <= imag_tol,
            }
        )
        report = cross_validate(
            config.geometry,
            config.base_potentials,
            config.basis,
            e_tol=params.e_tol,
            levels=params.levels,
        )
        checks.append(
            {
                "name": "matrix_vs_direct_matching",
                "delta": report.max_delta,
                "tolerance": params.e_tol,
                "passed": report.passed,
                "levels": [
                    {
                        "index": lvl.index,
                        "matrix": lvl.matrix_energy,
                        "direct": lvl.direct_energy,
                        "delta": lvl.delta,
                    }
                    for lvl in report.levels
                ],
                "scan_warnings": list(report.scan_warnings),
            }
        )

    pt_sym = is_pt_symmetric(config.base_potentials) and abs(config.base_field.alpha.real) <= 1e-12
    if pt_sym:
        values = spectrum.eigenvalues
        closure_delta = conjugation_closure_delta(values)
        closure_tol = 1e-8 * max(1.0, float(np.max(np.abs(values))))
        checks.append(
            {
                "name": "conjugation_closure",
                "delta": closure_delta,
                "tolerance": closure_tol,
                "passed": closure_delta <= closure_tol,
            }
        )

    all_passed = all(c["passed"] for c in checks)
    report = _report_skeleton(config, "validate")
    report.update(
        {
            "hermitian": hermitian,
            "pt_symmetric_input": pt_sym,
            "checks": checks,
            "passed": all_passed,
        }
    )
    json_path = out_dir / "validate.json"
    _write_json(json_path, report)
    return [json_path], all_passed


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stripedbox",
        description=(
            "Eigenspectra of a 2D rigid rectangular box with striped potentials "
            "and an optional uniform field"
        ),
    )
    parser.add_argument("--version", action="version", version=f"stripedbox {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for mode, doc in (
        ("spectrum", "solve one configuration and write its eigenvalues"),
        ("sweep", "sweep lambda, track branches, and locate transitions"),
        ("density", "evaluate |psi|^2 for one level on a grid"),
        ("validate", "run oracle cross-checks for one configuration"),
    ):
        p = sub.add_parser(mode, help=doc)
        p.add_argument(
            "--config",
            required=True,
            help="path to a study config JSON, or the name of a bundled study "
            f"(one of: {', '.join(bundled_config_names())})",
        )
        p.add_argument("--out-dir", default=".", help="directory for output files")
        p.add_argument("--nmax", type=int, default=None, help="override basis.nmax")
        p.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    try:
        config = resolve_config(args.config)
        if config.mode != args.command:
            raise ConfigError(
                f"config declares mode {config.mode!r} but the {args.command!r} "
                "subcommand was invoked"
            )
        if args.nmax is not None:
            if args.nmax < 1:
                raise ConfigError("--nmax must be positive")
            if config.density is not None and config.density.level > args.nmax:
                raise ConfigError("--nmax is below the configured density level")
            config = dataclasses.replace(
                config, basis=dataclasses.replace(config.basis, nmax=args.nmax)
            )
        if args.threads < 1:
            raise ConfigError("--threads must be positive")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    try:
        if args.command == "spectrum":
            written = run_spectrum_study(config, out_dir)
        elif args.command == "sweep":
            written = run_sweep_study(config, out_dir, workers=args.threads)
        elif args.command == "density":
            written = run_density_study(config, out_dir)
        else:
            written, passed = run_validate_study(config, out_dir)
            for path in written:
                print(path)
            if not passed:
                print("validation FAILED; see validate.json", file=sys.stderr)
                return EXIT_VALIDATION
            return EXIT_OK
    except (EigensolverError, QuadratureError, PairingError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
