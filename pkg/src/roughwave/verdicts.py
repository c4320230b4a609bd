"""Verdict enums shared by the probes, the lemma certificates and the Hölder checks."""

from __future__ import annotations

import enum


class Convergence(str, enum.Enum):
    CONVERGENT = "Convergent"
    DIVERGENT = "Divergent"


class Consistency(str, enum.Enum):
    CONSISTENT = "Consistent"
    INCONSISTENT = "Inconsistent"
