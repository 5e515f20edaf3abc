"""Frontals, equiaffine structures and Blaschke fields."""

from ._core import (
    FrontalError,
    blaschke_at,
    blaschke_field,
    catalog,
    evaluate,
    frame_data,
    jet,
    parse,
    reconstruct,
)

__all__ = [
    "FrontalError",
    "blaschke_at",
    "blaschke_field",
    "catalog",
    "evaluate",
    "frame_data",
    "jet",
    "parse",
    "reconstruct",
]
