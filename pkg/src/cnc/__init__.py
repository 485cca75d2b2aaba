"""Proof kernel and toolchain for Commutative/Non-Commutative (CNC) logic."""

__version__ = "0.1.0"
