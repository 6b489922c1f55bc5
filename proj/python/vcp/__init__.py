"""Vehicular cooperative perception simulator."""

from ._vcp import (
    ConfigError,
    ConstraintViolation,
    DimensionError,
    Error,
    GuardExceeded,
    IoError,
    RangeError,
    cell_value,
    decode_pairing,
    desk_config,
    fedavg,
    full_config,
    modified_interest,
    moving_average,
    occupancy_probability,
    pairing_branch_sizes,
    pairing_count,
    quadtree_candidate_cap,
    quadtree_leaves,
    quadtree_roundtrip,
    train,
    validate_config,
)

__all__ = [name for name in dir() if not name.startswith("_")]
