"""Command-line front end.

Exit codes: 0 success, 2 invalid parameters/config, 3 capacity refusal,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .couplings import generate_couplings
from .errors import CapacityError, NumericalError, ParameterError, SpinDistillError
from .model import build_spin_operators, joint_eigenbasis
from .observables import observable_set
from .presets import preset_by_name, preset_scenarios
from .pulsemap import build_pulse_map
from .spectral import (
    convergence_pulses,
    export_spectrum_csv,
    full_spectrum,
    stationary_state,
    verify_convergence,
)
from .sweep import load_config, run_sweep, validate, write_sweep_csv


def _add_model_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file (model block is used)")
    p.add_argument("--h", type=float, help="magnetic field in J_Q")
    p.add_argument("--allow-large-N", action="store_true", dest="allow_large")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spindistill",
        description=(
            "pulsed dissipative central spin model: one-period map, "
            "stationary states, sweeps"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("couplings", help="print a coupling set")
    p.add_argument("--kind", required=True, choices=("uniform", "exponential", "gaussian"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j-max", type=float, default=0.02)
    p.add_argument("--alpha", type=float)
    p.add_argument("--out", help="write JSON here instead of stdout")

    p = sub.add_parser("spectrum", help="full spectrum of the map at one field")
    _add_model_source(p)
    p.add_argument("--out", required=True, help="spectrum CSV path")
    p.add_argument("--p-thresh", type=float, default=0.01)

    p = sub.add_parser("stationary", help="stationary state observables at one field")
    _add_model_source(p)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.add_argument("--project-degenerate", action="store_true")

    p = sub.add_parser("sweep", help="run a field sweep")
    p.add_argument("--config", help="sweep config JSON")
    p.add_argument("--preset", help="named preset scenario")
    p.add_argument("--out", help="output CSV (defaults to config output_path)")
    p.add_argument("--workers", type=int, help="parallel workers")
    p.add_argument("--allow-large-N", action="store_true", dest="allow_large")

    p = sub.add_parser("converge", help="pulse-count estimate at one field")
    _add_model_source(p)
    p.add_argument("--p-thresh", type=float, default=0.01)
    p.add_argument("--verify", action="store_true", help="check the estimate")
    p.add_argument("--out", help="write JSON here instead of stdout")

    p = sub.add_parser("validate", help="oracle-equivalence and property suite")
    p.add_argument("--seed", type=int, default=20260809)
    p.add_argument("--out", help="write the JSON report here")

    p = sub.add_parser("presets", help="list presets or dump one as config JSON")
    p.add_argument("--name")
    p.add_argument("--out", help="write the preset config JSON here")

    return parser


def _single_point(args) -> tuple:
    if args.config is None:
        raise ParameterError("--config is required")
    if args.h is None:
        raise ParameterError("--h is required")
    with open(args.config) as fh:
        raw = json.load(fh)
    model = raw["model"] if "model" in raw else raw
    from .sweep import _model_params

    params = _model_params(model, args.h)
    ops = build_spin_operators(params, allow_large=args.allow_large)
    basis = joint_eigenbasis(ops)
    pmap = build_pulse_map(params, basis, ops, allow_large=args.allow_large)
    return params, ops, basis, pmap


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=1, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _run(args) -> int:
    if args.command == "couplings":
        cs = generate_couplings(args.kind, args.n, args.j_max, args.alpha)
        _emit(
            {
                "kind": cs.kind,
                "N": cs.n,
                "j_max": cs.j_max,
                "alpha": cs.alpha,
                "values": list(cs.values),
            },
            args.out,
        )
        return 0

    if args.command == "spectrum":
        _, _, _, pmap = _single_point(args)
        spec = full_spectrum(pmap, allow_large=args.allow_large)
        export_spectrum_csv(spec, args.out, p_thresh=args.p_thresh)
        return 0

    if args.command == "stationary":
        params, ops, basis, pmap = _single_point(args)
        stat = stationary_state(
            pmap,
            on_degenerate="project" if args.project_degenerate else "error",
            allow_large=args.allow_large,
        )
        obs = observable_set(basis.to_xproduct(stat.v0.matrix), ops)
        _emit(
            {
                "h": params.h,
                "entropy": obs.entropy,
                "bath_px": obs.bath_polarization_x,
                "central_polarization": list(obs.central_polarization),
                "entropy_reduction_per_spin": obs.entropy_reduction_per_spin,
                "degeneracy_count": stat.degeneracy_count,
                "fixed_point_residual": stat.residual,
            },
            args.out,
        )
        return 0

    if args.command == "sweep":
        if bool(args.config) == bool(args.preset):
            raise ParameterError("pass exactly one of --config / --preset")
        cfg = preset_by_name(args.preset) if args.preset else load_config(args.config)
        if args.workers:
            cfg.parallelism = args.workers
        if args.allow_large:
            cfg.allow_large = True
        out = args.out or cfg.output_path
        if not out:
            raise ParameterError("no output path (--out or config output_path)")
        rows = run_sweep(cfg)
        write_sweep_csv(cfg, rows, out)
        print(f"wrote {len(rows)} rows to {out}")
        return 0

    if args.command == "converge":
        params, ops, basis, pmap = _single_point(args)
        spec = full_spectrum(pmap, allow_large=args.allow_large)
        est = convergence_pulses(spec, args.p_thresh)
        payload = {
            "h": params.h,
            "p_thresh": est.p_thresh,
            "n_puls": est.n_puls,
            "modes_counted": len(est.n_j),
            "modes_excluded_small_alpha": est.excluded_small_alpha,
            "gap": spec.gap(),
        }
        if args.verify:
            stat = stationary_state(pmap, allow_large=args.allow_large)
            payload["verified"] = verify_convergence(
                pmap, stat.v0, est.n_puls, args.p_thresh, decomposition=spec
            )
        _emit(payload, args.out)
        return 0

    if args.command == "validate":
        report = validate(seed=args.seed)
        _emit(report, args.out)
        return 0 if all(entry["pass"] for entry in report.values()) else 4

    if args.command == "presets":
        if args.name:
            cfg = preset_by_name(args.name)
            _emit(cfg.to_json_dict(), args.out)
        else:
            for cfg in preset_scenarios():
                tag = " [slow]" if cfg.slow else ""
                print(f"{cfg.name}{tag}: {cfg.description}")
        return 0

    raise ParameterError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3
    except (NumericalError, SpinDistillError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
