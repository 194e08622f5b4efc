"""Command-line entry point: ``planckmass <subcommand> [flags]``.

Every run prints one JSON document to standard output holding the artifact
version, the resolved configuration and the result. Bulk samples go to CSV
and CDF overlays to SVG on request. Exit codes: 0 success, 2 invalid
input, 1 internal error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .compare import theorem1_compare, theorem2_compare
from .derandomize import DerandomizationConfig, gaussianity_report, partition_for, sup_difference, sup_error_bar
from .eigenfunction import CoefficientError, generate_coefficients, mass_samples, sample_mass
from .field import FieldSpec, sample_ball_mass, sample_w, w_moments
from .lattice import CapExceededError, audit_a1, count_correlations, enumerate_lattice_points
from .measure import MeasureError, SpectralMeasure, from_coefficients, lebesgue_decompose
from .stats import EmpiricalDistribution, gamma_cdf, ks_to_cdf
from ._rng import uniform_centers

SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["artifact", "version", "command", "config", "result"],
    "properties": {
        "artifact": {"const": "planckmass"},
        "version": {"type": "string"},
        "command": {
            "enum": [
                "enumerate", "correlations", "audit-a1", "mass-sim", "field-sim",
                "w-dist", "derandomize", "compare-thm1", "compare-thm2",
            ]
        },
        "config": {"type": "object"},
        "result": {"type": ["object", "array"]},
    },
    "additionalProperties": False,
}


class ValidationError(ValueError):
    pass


def validate_summary(doc: dict) -> dict:
    jsonschema.validate(doc, SUMMARY_SCHEMA)
    return doc


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def dumps(doc: dict) -> str:
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2)


def emit_plot(dists, path, labels=None) -> Path:
    """Write overlaid empirical step CDFs to an SVG file."""
    if not dists:
        raise ValidationError("emit_plot needs at least one distribution")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    with matplotlib.rc_context({"svg.hashsalt": "planckmass", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        for i, d in enumerate(dists):
            x = d.samples
            y = np.arange(1, d.n + 1) / d.n
            if labels is not None:
                label = labels[i]
            else:
                label = d.provenance.get("kind", f"sample {i}")
            ax.step(np.concatenate([[x[0]], x]), np.concatenate([[0.0], y]), where="post", label=label)
        ax.set_xlabel("t")
        ax.set_ylabel("empirical CDF")
        ax.legend()
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as exc:
            raise ValidationError(f"cannot write plot to {path}: {exc}") from exc
        finally:
            plt.close(fig)
    return path


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _float_list(s):
    try:
        return [float(t) for t in s.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {s!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="planckmass", description=__doc__.splitlines()[0])
    p.add_argument("--workers", type=_positive_int, default=None,
                   help="worker threads (default: $PLANCKMASS_WORKERS or 1); never changes results")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", help="lattice points on the circle |xi|^2 = E")
    s.add_argument("--E", type=_positive_int, required=True)

    s = sub.add_parser("correlations", help="exact count of zero-sum 2l-tuples")
    s.add_argument("--E", type=_positive_int, required=True)
    s.add_argument("--l", type=int, choices=(1, 2, 3), required=True)

    s = sub.add_parser("audit-a1", help="spectral-correlation audit with explicit constant")
    s.add_argument("--E", type=_positive_int, required=True)
    s.add_argument("--gamma", type=float, required=True)
    s.add_argument("--c", type=float, required=True)
    s.add_argument("--l-max", type=int, choices=(1, 2, 3), default=3)

    s = sub.add_parser("mass-sim", help="Planck-scale mass over random centers")
    s.add_argument("--E", type=_positive_int, required=True)
    s.add_argument("--model", choices=("flat", "random-sphere"), default="flat")
    s.add_argument("--R", type=float, required=True)
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--coeff-seed", type=int, default=0)
    s.add_argument("--out", type=Path)

    s = sub.add_parser("field-sim", help="Gaussian ball mass for a measure file")
    s.add_argument("--measure", type=Path, required=True)
    s.add_argument("--R", type=float, required=True)
    s.add_argument("--m", type=_positive_int, default=256)
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", type=Path)

    s = sub.add_parser("w-dist", help="samples of the limit variable W for the atomic part")
    s.add_argument("--measure", type=Path, required=True)
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", type=Path)

    s = sub.add_parser("derandomize", help="arc coefficients and surrogate diagnostics")
    s.add_argument("--E", type=_positive_int, required=True)
    s.add_argument("--model", choices=("flat", "random-sphere"), default="flat")
    s.add_argument("--K", type=_positive_int, required=True)
    s.add_argument("--delta", type=float, default=None)
    s.add_argument("--R", type=float, default=5.0)
    s.add_argument("--n", type=_positive_int, default=5000)
    s.add_argument("--n-sup", type=_positive_int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--coeff-seed", type=int, default=0)

    s = sub.add_parser("compare-thm1", help="eigenfunction mass law vs Gaussian ball mass")
    s.add_argument("--E", type=_positive_int, required=True)
    s.add_argument("--model", choices=("flat", "random-sphere"), default="flat")
    s.add_argument("--R", type=float, required=True)
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--coeff-seed", type=int, default=0)
    s.add_argument("--plot", type=Path)

    s = sub.add_parser("compare-thm2", help="ball mass vs the limit law alpha W + beta")
    s.add_argument("--measure", type=Path, required=True)
    s.add_argument("--R-list", type=_float_list, required=True)
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--m", type=_positive_int, default=256)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--plot", type=Path)
    return p


def _coeffs(args):
    lattice = enumerate_lattice_points(args.E)
    if lattice.N == 0:
        raise ValidationError(f"E = {args.E} is not a sum of two squares")
    return generate_coefficients(lattice, args.model.replace("-", "_"), args.coeff_seed)


def _load_measure(path: Path) -> SpectralMeasure:
    try:
        return SpectralMeasure.from_json(Path(path).read_text())
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ValidationError(f"cannot read measure file {path}: {exc}") from exc


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) for v in row])


def _run(args) -> dict:
    cmd = args.command
    workers = args.workers
    if cmd == "enumerate":
        return enumerate_lattice_points(args.E).to_dict()
    if cmd == "correlations":
        lat = enumerate_lattice_points(args.E)
        if lat.N == 0:
            raise ValidationError(f"E = {args.E} has no lattice points")
        return count_correlations(lat, args.l).to_dict()
    if cmd == "audit-a1":
        return audit_a1(enumerate_lattice_points(args.E), args.gamma, args.c, args.l_max)
    if cmd == "mass-sim":
        coeffs = _coeffs(args)
        centers, values = mass_samples(coeffs, args.R, args.n, args.seed, workers)
        r = args.R / math.sqrt(coeffs.E)
        if args.out:
            _write_csv(args.out, ["x1", "x2", "r", "value"],
                       ((c[0], c[1], r, v) for c, v in zip(centers, values)))
        d = EmpiricalDistribution(values)
        return {"mean": d.mean(), "var": d.var(), "m3": d.raw_moment(3), "N": coeffs.N, "E": coeffs.E,
                "R": args.R, "r": r}
    if cmd == "field-sim":
        mu = _load_measure(args.measure)
        d = sample_ball_mass(FieldSpec(mu, args.m, args.R), args.n, args.seed, workers=workers)
        if args.out:
            _write_csv(args.out, ["value"], ((v,) for v in d.samples))
        return {**d.summary(), "alpha": mu.atomic_weight, "beta": mu.continuous_weight}
    if cmd == "w-dist":
        mu = _load_measure(args.measure)
        _, mu_a, _, _ = lebesgue_decompose(mu)
        if mu_a.is_empty:
            raise ValidationError("the measure has no atomic part")
        d = sample_w(mu_a, args.n, args.seed, workers)
        if args.out:
            _write_csv(args.out, ["value"], ((v,) for v in d.samples))
        out = {**d.summary(), "closed_form_var": w_moments(mu_a)[1]}
        masses = np.unique(np.round(mu_a.masses, 12))
        if masses.size == 1:
            # equal masses: W is Gamma(#pairs, 2 sigma)
            shape, scale = mu_a.n_atoms / 2, 2 * float(masses[0])
            out["ks_vs_reference"] = ks_to_cdf(d, lambda t: gamma_cdf(shape, scale, t))
            out["reference"] = {"law": "gamma", "shape": shape, "scale": scale}
        return out
    if cmd == "derandomize":
        coeffs = _coeffs(args)
        cfg = DerandomizationConfig(args.K, args.delta, args.R)
        part = partition_for(coeffs, cfg.K, cfg.delta)
        rep = gaussianity_report(coeffs, part, args.n, args.seed, workers)
        xs = uniform_centers(args.seed + 1, args.n_sup)
        sups = np.array([sup_difference(coeffs, x, cfg, part) for x in xs])
        rep["sup_difference_quantiles"] = {
            q: float(np.quantile(sups, float(q))) for q in ("0.1", "0.5", "0.9")
        }
        rep["sup_error_bar"] = sup_error_bar(coeffs, cfg)
        rep["partition"] = part.to_dict()
        rep["flags"] = list(cfg.flags)
        return rep
    if cmd == "compare-thm1":
        coeffs = _coeffs(args)
        rep = theorem1_compare(coeffs, args.R, args.n, args.seed, workers=workers)
        if args.plot:
            left = sample_mass(coeffs, args.R, args.n, args.seed, workers)
            right = sample_ball_mass(FieldSpec(from_coefficients(coeffs), 256, args.R), args.n, args.seed,
                                     workers=workers)
            emit_plot([left, right], args.plot, labels=["eigenfunction mass", "Gaussian ball mass"])
        return rep.to_dict()
    if cmd == "compare-thm2":
        mu = _load_measure(args.measure)
        reps = theorem2_compare(mu, args.R_list, args.n, args.seed, args.m, workers)
        if args.plot:
            dists = [sample_ball_mass(FieldSpec(mu, args.m, R), args.n, args.seed, workers=workers)
                     for R in args.R_list]
            emit_plot(dists, args.plot, labels=[f"R = {R:g}" for R in args.R_list])
        return {"reports": [r.to_dict() for r in reps]}
    raise ValidationError(f"unknown subcommand {cmd!r}")


def _config(args) -> dict:
    cfg = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()}
    # worker count never changes results, so it stays out of the summary
    cfg.pop("workers", None)
    return cfg


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2
    try:
        result = _run(args)
    except (ValidationError, ValueError, MeasureError, CoefficientError, CapExceededError) as exc:
        print(f"planckmass {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"planckmass {args.command}: internal error: {exc!r}", file=sys.stderr)
        return 1
    doc = validate_summary(
        {
            "artifact": "planckmass",
            "version": __version__,
            "command": args.command,
            "config": _config(args),
            "result": result,
        }
    )
    sys.stdout.write(dumps(doc) + "\n")
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
