"""Figure-style panels from sweep CSVs."""

from .panels import (
    Marker,
    PanelError,
    PanelSpec,
    RenderResult,
    build_spec,
    default_markers,
    derived_quantities,
    read_sweep_csv,
    render_panel,
)

__version__ = "0.1.0"
