"""Torus homotopy groups, Rhodes groups, and evaluation subgroups.

Computes the tower invariants of a based space from a finite homotopy
model, the equivariant analogues for a transformation group acting on it,
and the Gottlieb-type evaluation subgroups that control when evaluation
maps split.  Everything is exact integer arithmetic; no floating point
enters any group computation.
"""

__version__ = "0.1.0"
