"""Magnetic-field sweeps: config, execution, CSV output, validation.

A sweep evaluates the stationary state (and optionally the spectrum) of
the one-period map at every grid field.  Points are independent, so they
parallelize over a worker pool; rows are emitted in grid order and the
output bytes are identical for any worker count.  Per-point failures are
recorded in the row's flag column and never abort the sweep.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .couplings import CouplingSet, generate_couplings, overhauser_max
from .density import maximally_mixed, random_density_matrix
from .errors import (
    CapacityError,
    DegenerateFixedPointError,
    ParameterError,
    SpinDistillError,
)
from .model import (
    DEFAULT_GAMMA,
    DEFAULT_T_REP,
    ModelParams,
    build_spin_operators,
    joint_eigenbasis,
)
from .observables import observable_set, von_neumann_entropy
from .oracle import build_trion_space, one_period_reference
from .pulsemap import apply_map, build_pulse_map
from .spectral import (
    SPECTRUM_BUDGET,
    SPECTRUM_BUDGET_LARGE,
    convergence_pulses,
    full_spectrum,
    stationary_state,
    verify_map_properties,
)

QUANTITIES = ("entropy", "bath_px", "central_pz", "n_puls", "gap")

_MODEL_KEYS = {"kind", "N", "j_max", "alpha", "values", "z", "gamma", "t_rep", "epsilon"}
_CONFIG_KEYS = {"model", "field_grid", "quantities", "p_thresh", "parallelism", "output_path"}
_GRID_KEYS = {"h_min", "h_max", "step"}


@dataclass
class SweepConfig:
    model: dict
    field_grid: dict | list
    quantities: tuple[str, ...]
    p_thresh: float = 0.01
    parallelism: int = 1
    output_path: str | None = None
    allow_large: bool = False
    name: str = ""
    description: str = ""
    slow: bool = False

    def grid(self) -> np.ndarray:
        return _expand_grid(self.field_grid)

    def params(self, h: float) -> ModelParams:
        return _model_params(self.model, h)

    def to_json_dict(self) -> dict:
        return {
            "model": dict(self.model),
            "field_grid": self.field_grid,
            "quantities": list(self.quantities),
            "p_thresh": self.p_thresh,
            "parallelism": self.parallelism,
            "output_path": self.output_path,
        }


@dataclass
class SweepRow:
    h: float
    entropy: float = math.nan
    bath_px: float = math.nan
    central_pz: float = math.nan
    n_puls: float = math.nan
    gap: float = math.nan
    flag: str = ""


def _model_params(model: dict, h: float) -> ModelParams:
    unknown = set(model) - _MODEL_KEYS
    if unknown:
        raise ParameterError(f"unknown model keys: {sorted(unknown)}")
    kind = model.get("kind", "uniform")
    if kind == "custom":
        couplings = CouplingSet.custom(model.get("values", []))
    else:
        n = model.get("N")
        if n is None:
            raise ParameterError("model needs a bath size N")
        if n == 0:
            couplings = CouplingSet.empty()
        else:
            couplings = generate_couplings(
                kind, n, model.get("j_max", 0.02), model.get("alpha")
            )
    return ModelParams(
        couplings=couplings,
        h=h,
        z=model.get("z", 1e-3),
        gamma=model.get("gamma", DEFAULT_GAMMA),
        t_rep=model.get("t_rep", DEFAULT_T_REP),
        epsilon=model.get("epsilon", 0.0),
    )


def _expand_grid(grid: dict | list) -> np.ndarray:
    if isinstance(grid, (list, tuple, np.ndarray)):
        hs = np.asarray(grid, dtype=float)
        if hs.size == 0:
            raise ParameterError("explicit field grid is empty")
        return hs
    unknown = set(grid) - _GRID_KEYS
    if unknown:
        raise ParameterError(f"unknown field_grid keys: {sorted(unknown)}")
    try:
        h_min, h_max, step = grid["h_min"], grid["h_max"], grid["step"]
    except KeyError as exc:
        raise ParameterError(f"field_grid missing key {exc}") from exc
    if not (h_min < h_max):
        raise ParameterError("field_grid needs h_min < h_max")
    if not (step > 0.0):
        raise ParameterError("field_grid needs step > 0")
    count = int(math.floor((h_max - h_min) / step + 1e-9)) + 1
    return h_min + step * np.arange(count)


def load_config(source: dict | str) -> SweepConfig:
    """Parse and validate a sweep config (dict or path to a JSON file)."""
    if isinstance(source, str):
        with open(source) as fh:
            raw = json.load(fh)
    else:
        raw = dict(source)
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ParameterError(f"unknown config keys: {sorted(unknown)}")
    for key in ("model", "field_grid", "quantities"):
        if key not in raw:
            raise ParameterError(f"config missing {key!r}")
    quantities = tuple(raw["quantities"])
    if not quantities:
        raise ParameterError("quantities must be non-empty")
    bad = [q for q in quantities if q not in QUANTITIES]
    if bad:
        raise ParameterError(f"unknown quantities: {bad}")
    cfg = SweepConfig(
        model=dict(raw["model"]),
        field_grid=raw["field_grid"],
        quantities=quantities,
        p_thresh=raw.get("p_thresh", 0.01),
        parallelism=raw.get("parallelism", 1),
        output_path=raw.get("output_path"),
    )
    if not (0.0 < cfg.p_thresh < 1.0):
        raise ParameterError("p_thresh must lie in (0, 1)")
    if cfg.parallelism < 1:
        raise ParameterError("parallelism must be >= 1")
    probe = cfg.params(float(cfg.grid()[0]))
    if any(q in ("n_puls", "gap") for q in quantities):
        budget = SPECTRUM_BUDGET_LARGE if cfg.allow_large else SPECTRUM_BUDGET
        if probe.dim**2 > budget:
            raise ParameterError(
                f"spectral quantities need D <= {budget}, got {probe.dim ** 2}"
            )
    return cfg


def _sweep_point(task: tuple) -> SweepRow:
    model, h, quantities, p_thresh, allow_large = task
    row = SweepRow(h=h)
    try:
        params = _model_params(model, h)
        ops = build_spin_operators(params, allow_large=allow_large)
        basis = joint_eigenbasis(ops)
        pmap = build_pulse_map(params, basis, ops, allow_large=allow_large)
        try:
            stat = stationary_state(pmap)
            rho_x = basis.to_xproduct(stat.v0.matrix)
            obs = observable_set(rho_x, ops)
            if "entropy" in quantities:
                row.entropy = obs.entropy
            if "bath_px" in quantities:
                row.bath_px = obs.bath_polarization_x
            if "central_pz" in quantities:
                row.central_pz = obs.central_polarization[2]
        except DegenerateFixedPointError:
            row.flag = "degenerate"
        if "n_puls" in quantities or "gap" in quantities:
            spec = full_spectrum(pmap, allow_large=allow_large)
            if "gap" in quantities:
                row.gap = spec.gap()
            if "n_puls" in quantities and not row.flag:
                row.n_puls = float(convergence_pulses(spec, p_thresh).n_puls)
    except SpinDistillError as exc:
        row.flag = f"error:{type(exc).__name__}"
    return row


def run_sweep(config: SweepConfig) -> list[SweepRow]:
    """Evaluate every grid point; rows come back in grid order."""
    grid = config.grid()
    tasks = [
        (config.model, float(h), config.quantities, config.p_thresh, config.allow_large)
        for h in grid
    ]
    if config.parallelism <= 1:
        return [_sweep_point(t) for t in tasks]
    import multiprocessing

    with multiprocessing.Pool(processes=config.parallelism) as pool:
        return pool.map(_sweep_point, tasks, chunksize=1)


CSV_HEADER = "h,entropy,bath_px,central_pz,n_puls,gap,flag"


def _metadata(config: SweepConfig) -> dict:
    """Echo of model, grid, and derived marker quantities.

    Runtime knobs (parallelism, output_path) are excluded so the output is
    byte-identical across worker counts.
    """
    params = config.params(config.grid()[0])
    meta = {
        "model": dict(config.model),
        "field_grid": config.field_grid
        if isinstance(config.field_grid, dict)
        else list(config.field_grid),
        "quantities": list(config.quantities),
        "p_thresh": config.p_thresh,
        "derived": {
            "couplings": list(params.couplings.values),
            "a_max": overhauser_max(params.couplings),
            "electronic_spacing": 2.0 * math.pi / params.t_rep,
            "nuclear_resonance": 2.0 * math.pi / (params.z * params.t_rep),
            "knight_offset": (
                params.couplings.j_max / (2.0 * params.z)
                if params.couplings.n
                else 0.0
            ),
        },
    }
    return meta


def _cell(value: float) -> str:
    if isinstance(value, float) and math.isnan(value):
        return ""
    return f"{value:.17g}"


def write_sweep_csv(config: SweepConfig, rows: list[SweepRow], path) -> None:
    with open(path, "w") as fh:
        fh.write("# params: " + json.dumps(_metadata(config), sort_keys=True) + "\n")
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            cells = [
                _cell(r.h),
                _cell(r.entropy),
                _cell(r.bath_px),
                _cell(r.central_pz),
                _cell(r.n_puls),
                _cell(r.gap),
                r.flag,
            ]
            fh.write(",".join(cells) + "\n")


def read_sweep_csv(path) -> tuple[dict, list[SweepRow]]:
    """Parse a sweep CSV back into metadata and rows."""
    meta = {}
    rows = []
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    body = []
    for ln in lines:
        if ln.startswith("# params:"):
            meta = json.loads(ln[len("# params:") :])
        elif ln:
            body.append(ln)
    if not body or body[0] != CSV_HEADER:
        raise ParameterError("not a sweep CSV: header line missing")
    for ln in body[1:]:
        cells = ln.split(",")
        def num(s: str) -> float:
            return float(s) if s else math.nan
        rows.append(
            SweepRow(
                h=num(cells[0]),
                entropy=num(cells[1]),
                bath_px=num(cells[2]),
                central_pz=num(cells[3]),
                n_puls=num(cells[4]),
                gap=num(cells[5]),
                flag=cells[6] if len(cells) > 6 else "",
            )
        )
    return meta, rows


def validate(params: ModelParams | None = None, seed: int = 20260809) -> dict:
    """CI-style bundle: oracle equivalence, map properties, trace
    conservation, entropy clamps, all at N <= 2.

    Returns {check_name: {pass, detail, value}}.
    """
    report: dict[str, dict] = {}
    rng = np.random.default_rng(seed)

    def add(name: str, passed: bool, detail: str, value: float) -> None:
        report[name] = {"pass": bool(passed), "detail": detail, "value": float(value)}

    from .model import default_params

    for n in (0, 1, 2):
        p = (
            params
            if params is not None and params.n_bath == n
            else default_params(n, h=0.777)
        )
        ops = build_spin_operators(p)
        basis = joint_eigenbasis(ops)
        pmap = build_pulse_map(p, basis, ops)
        space = build_trion_space(p)
        worst = 0.0
        for _ in range(5):
            rho = random_density_matrix(p.dim, rng)
            ref = one_period_reference(rho, p, basis=basis, space=space)
            out = apply_map(pmap, rho)
            worst = max(worst, float(np.linalg.norm(out.matrix - ref.matrix)))
        add(
            f"oracle_equivalence_N{n}",
            worst <= 1e-6,
            "max Frobenius deviation, map vs integrated reference",
            worst,
        )
        if n >= 1:
            prop = verify_map_properties(pmap, seed=seed + n)
            for key in (
                "p1_unit_eigenvalue",
                "p2_nonunit_traceless",
                "p3_unit_has_trace",
                "p4_modulus_bound",
                "p5_conjugate_pairs",
                "p6_unit_hermitizable",
            ):
                c = prop.checks[key]
                add(f"{key}_N{n}", c.passed, c.detail, c.value)
            c = prop.checks["trace_conservation"]
            add(f"trace_conservation_N{n}", c.passed, c.detail, c.value)
            c = prop.checks["obs_b_unit_nondegenerate"]
            add(f"degeneracy_count_N{n}", True, "unit eigenvalue degeneracy", c.value)

    # entropy clamp behaviour: slightly negative eigenvalues are tolerated
    eps = 5e-10
    rho = np.diag([1.0 - eps, 0.0, eps, -eps]).astype(complex)
    try:
        s = von_neumann_entropy(rho)
        ok = 0.0 <= s < 1e-6
        add("entropy_clamps", ok, "entropy of a near-pure clamped state", s)
    except SpinDistillError as exc:
        add("entropy_clamps", False, f"unexpected {type(exc).__name__}", math.nan)
    return report
