"""Figure rendering for pseudoprob CSV exports.

Two figure kinds are supported: a threshold sweep (witness values along
the Werner line with one vertical marker per witness at the edge of its
detection range) and a slice map (the (t1, t2) correlation grid at fixed
t3, colored by which of W2/W3 fire). Everything drawn is read from the
CSV; the legend counts are also written as a JSON sidecar so they can be
checked without decoding the image.
"""

from .render import (
    FigureJob,
    SchemaMismatch,
    render,
    render_slice_map,
    render_werner_sweep,
)

__all__ = [
    "FigureJob",
    "SchemaMismatch",
    "render",
    "render_slice_map",
    "render_werner_sweep",
]

__version__ = "0.1.0"
