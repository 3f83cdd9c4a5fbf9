"""Lattices and comparison helpers shared by the test modules."""

import numpy as np

from nulfrac import LatticeSpec

QUAD = LatticeSpec.quadratic(1.0, 0.5, 0.2)
QQUAD = LatticeSpec.q_quadratic(0.85, 0.5, 0.9, 0.1)
LIN = LatticeSpec.linear(1.0, 0.25)

NONUNIFORM = [QUAD, QQUAD]

#: PASS/FAIL lines emitted by the acceptance suite, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def rel_defect(lhs, rhs) -> float:
    """``max|lhs - rhs| / max(|lhs|, |rhs|)``."""
    lhs, rhs = np.asarray(lhs), np.asarray(rhs)
    scale = max(float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))), 1e-300)
    return float(np.max(np.abs(lhs - rhs))) / scale


def grid_defect(f, g) -> float:
    """Relative defect of two grid functions on their common grid."""
    from nulfrac import overlap

    _, a, b = overlap(f, g)
    return rel_defect(a, b)
