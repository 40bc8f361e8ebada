"""Exact computations with DG-rings over graded polynomial bases: depth,
local cohomology, Cohen-Macaulay predicates and theorem verifiers."""

__version__ = "0.1.0"
