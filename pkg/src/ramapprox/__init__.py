"""Exact MacLane valuations, ramified approximation and semistable models."""

from .base_field import INF, fmt_val, parse_base, val
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["INF", "BACKEND", "fmt_val", "parse_base", "val", "__version__"]
