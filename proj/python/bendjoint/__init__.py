"""Tendon-driven bending joint simulator."""

from ._core import (
    JointSim,
    allocate,
    arc_jacobian,
    deallocate,
    fk_ring_poses,
    fk_tip,
    ik_tip,
    normalize_message,
    run_script,
    run_script_csv,
)

__all__ = [
    "JointSim",
    "allocate",
    "arc_jacobian",
    "deallocate",
    "fk_ring_poses",
    "fk_tip",
    "ik_tip",
    "normalize_message",
    "run_script",
    "run_script_csv",
]
