"""Panels from sweep CSVs.

The input format is the sweep tool's CSV interface: one `# params:` JSON
metadata line, a fixed header `h,entropy,bath_px,central_pz,n_puls,gap,flag`,
and full-precision rows with empty cells for quantities that were not
requested.  Dashed marker positions (electronic resonance +- A_max,
nuclear resonance +- j_max/(2z)) are recomputed here from the raw model
parameters in the metadata, never trusted from upstream; the echoed
derived values only serve as a cross-check.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

CSV_HEADER = "h,entropy,bath_px,central_pz,n_puls,gap,flag"
COLUMNS = CSV_HEADER.split(",")

PANEL_KINDS = ("entropy", "polarization", "npulses")

#: CSV columns each panel kind needs beyond the field axis
REQUIRED = {
    "entropy": ("entropy",),
    "polarization": ("bath_px", "central_pz"),
    "npulses": ("n_puls",),
}


class PanelError(ValueError):
    pass


@dataclass
class SweepData:
    meta: dict
    rows: dict[str, np.ndarray]

    def column(self, name: str, source: str) -> np.ndarray:
        values = self.rows[name]
        if np.all(np.isnan(values)):
            raise PanelError(f"column {name!r} is empty in {source}")
        return values


@dataclass
class Marker:
    position: float
    label: str


@dataclass
class PanelSpec:
    inputs: list[str]
    kind: str
    markers: list[Marker] = field(default_factory=list)
    log_scale: bool = False
    title: str = ""

    def __post_init__(self) -> None:
        if self.kind not in PANEL_KINDS:
            raise PanelError(f"unknown panel kind {self.kind!r}")
        bad = [m for m in self.markers if not math.isfinite(m.position)]
        if bad:
            raise PanelError("marker positions must be finite")


@dataclass
class RenderResult:
    path: str
    markers: list[Marker]
    n_curves: int


def read_sweep_csv(path: str) -> SweepData:
    meta: dict = {}
    body: list[str] = []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# params:"):
                meta = json.loads(line[len("# params:"):])
            elif line:
                body.append(line)
    if not body or body[0] != CSV_HEADER:
        raise PanelError(f"{path} is not a sweep CSV (header line missing)")
    if len(body) == 1:
        raise PanelError(f"{path} contains no data rows")
    cells = [ln.split(",") for ln in body[1:]]
    cols: dict[str, np.ndarray] = {}
    for j, name in enumerate(COLUMNS[:-1]):
        cols[name] = np.array(
            [float(row[j]) if row[j] else math.nan for row in cells]
        )
    cols["flag"] = np.array([row[6] if len(row) > 6 else "" for row in cells])
    return SweepData(meta=meta, rows=cols)


def derived_quantities(meta: dict) -> dict:
    """Marker ingredients recomputed from the raw metadata echo."""
    model = meta.get("model", {})
    derived = meta.get("derived", {})
    couplings = derived.get("couplings", [])
    t_rep = model.get("t_rep", 4.0 * math.pi)
    z = model.get("z")
    j_max = max(couplings) if couplings else model.get("j_max", 0.0)
    out = {
        "a_max": 0.5 * sum(couplings),
        "electronic_spacing": 2.0 * math.pi / t_rep,
        "nuclear_resonance": 2.0 * math.pi / (z * t_rep) if z else math.nan,
        "knight_offset": j_max / (2.0 * z) if z else math.nan,
    }
    return out


def default_markers(meta: dict, h_lo: float, h_hi: float) -> list[Marker]:
    """Dashed lines inside the window: every electronic resonance shifted
    by -+A_max, plus the Knight-shifted nuclear resonance when visible."""
    q = derived_quantities(meta)
    a_max = q["a_max"]
    spacing = q["electronic_spacing"]
    markers: list[Marker] = []
    k_lo = math.floor((h_lo - a_max) / spacing)
    k_hi = math.ceil((h_hi + a_max) / spacing)
    for k in range(k_lo, k_hi + 1):
        res = k * spacing
        for sign, tag in ((-1.0, "-"), (+1.0, "+")):
            pos = res + sign * a_max
            if h_lo <= pos <= h_hi:
                markers.append(Marker(pos, f"resonance {tag} A_max"))
    h_nuc = q["nuclear_resonance"]
    if math.isfinite(h_nuc):
        for sign, tag in ((-1.0, "-"), (+1.0, "+")):
            pos = h_nuc + sign * q["knight_offset"]
            if h_lo <= pos <= h_hi:
                markers.append(Marker(pos, f"nuclear {tag} j_max/(2z)"))
    return markers


def build_spec(
    inputs: list[str], kind: str, explicit: list[Marker] | None = None
) -> tuple[PanelSpec, list[SweepData]]:
    if not inputs:
        raise PanelError("no input CSVs")
    data = [read_sweep_csv(p) for p in inputs]
    for d, p in zip(data, inputs):
        for col in REQUIRED[kind]:
            d.column(col, p)
    if explicit is None:
        h_lo = min(float(np.nanmin(d.rows["h"])) for d in data)
        h_hi = max(float(np.nanmax(d.rows["h"])) for d in data)
        markers = default_markers(data[0].meta, h_lo, h_hi)
    else:
        markers = explicit
    return (
        PanelSpec(
            inputs=list(inputs),
            kind=kind,
            markers=markers,
            log_scale=(kind == "npulses"),
        ),
        data,
    )


def render_panel(spec: PanelSpec, out_path: str) -> RenderResult:
    """Draw the panel and write the image; returns the markers used."""
    data = [read_sweep_csv(p) for p in spec.inputs]
    fig, ax = plt.subplots(figsize=(7.2, 4.2))
    n_curves = 0
    for d, p in zip(data, spec.inputs):
        h = d.rows["h"]
        label_n = f"N={d.meta.get('model', {}).get('N', '?')}"
        if spec.kind == "entropy":
            ax.plot(h, d.column("entropy", p), lw=1.0, label=label_n)
            n_curves += 1
        elif spec.kind == "polarization":
            ax.plot(h, d.column("bath_px", p), lw=1.0, label=f"bath p_x, {label_n}")
            ax.plot(
                h, d.column("central_pz", p), lw=1.0, ls="--",
                label=f"central p_z, {label_n}",
            )
            n_curves += 2
        else:
            ax.plot(h, d.column("n_puls", p), lw=1.0, label=label_n)
            n_curves += 1
    for m in spec.markers:
        ax.axvline(m.position, color="tab:blue", ls="--", lw=0.8, alpha=0.7)
    if spec.log_scale:
        ax.set_yscale("log")
    ax.set_xlabel("h [J_Q]")
    ax.set_ylabel(
        {"entropy": "S [k_B]", "polarization": "polarization", "npulses": "n_puls"}[
            spec.kind
        ]
    )
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return RenderResult(path=out_path, markers=spec.markers, n_curves=n_curves)
