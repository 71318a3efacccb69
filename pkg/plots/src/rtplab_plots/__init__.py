"""Figure rendering for rtplab experiment outputs.

Consumes only the documented CSV schemas (trace and checkpoint files); the
simulation package is not imported.
"""

from rtplab_plots.render import (
    FigureSpec,
    SchemaError,
    discover_specs,
    render,
)

__version__ = "0.1.0"

__all__ = ["FigureSpec", "SchemaError", "discover_specs", "render", "__version__"]
