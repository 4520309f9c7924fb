"""Figure rendering for swaprobust CSV outputs."""

from .render import (
    PlotDataError,
    load_curve_csv,
    load_result_json,
    load_sweep_csv,
    render_curves,
    render_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "PlotDataError",
    "load_curve_csv",
    "load_result_json",
    "load_sweep_csv",
    "render_curves",
    "render_sweep",
    "__version__",
]
