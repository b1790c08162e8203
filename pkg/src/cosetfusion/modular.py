"""Minimal-model S-matrices, quantum dimensions and the Verlinde fusion oracle.

Everything here is double precision; results that must be integers are rounded
only after checking they sit within ``INTEGRALITY_TOL`` of one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from typing import Iterable

import numpy as np

from .fusion import FusionRing
from .kac import MinimalModel, PrimaryField, enumerate_primaries

STRUCTURE_TOL = 1e-9
INTEGRALITY_TOL = 1e-6


class ModularDataError(ArithmeticError):
    """Raised when an S-matrix fails unitarity/positivity or Verlinde integrality."""


@dataclass(frozen=True, eq=False)
class ModularData:
    labels: tuple
    unit: object
    S: np.ndarray
    model: MinimalModel | None = None

    def __post_init__(self):
        self.S.setflags(write=False)

    @property
    def vacuum_row(self) -> np.ndarray:
        return self.S[self.labels.index(self.unit)]

    @property
    def qdim(self) -> dict:
        row = self.vacuum_row
        return {a: float(row[i] / row[self.labels.index(self.unit)]) for i, a in enumerate(self.labels)}

    def check(self) -> list[str]:
        """Return the list of violated invariants (empty when consistent)."""
        S = self.S
        n = len(self.labels)
        problems = []
        if np.max(np.abs(S - S.T)) > STRUCTURE_TOL:
            problems.append("S is not symmetric")
        if np.max(np.abs(S @ S.T - np.eye(n))) > STRUCTURE_TOL:
            problems.append("S is not orthogonal")
        if np.any(self.vacuum_row <= 0):
            problems.append("vacuum row of S is not strictly positive")
        elif min(self.qdim.values()) < 1 - STRUCTURE_TOL:
            problems.append("a quantum dimension is below 1")
        return problems


@cache
def s_matrix(model: MinimalModel) -> ModularData:
    fields = enumerate_primaries(model)
    p, q = model.p, model.q
    n = len(fields)
    S = np.empty((n, n))
    for i, a in enumerate(fields):
        for j, b in enumerate(fields):
            sign = -1.0 if (1 + a.s * b.r + a.r * b.s) % 2 else 1.0
            S[i, j] = (
                2.0 * np.sqrt(2.0 / (p * q)) * sign
                * np.sin(np.pi * q * a.r * b.r / p)
                * np.sin(np.pi * p * a.s * b.s / q)
            )
    data = ModularData(tuple(fields), model.field(1, 1), S, model)
    problems = data.check()
    if problems:
        raise ModularDataError(f"{model}: " + "; ".join(problems))
    return data


def verlinde_coefficients(data: ModularData) -> np.ndarray:
    """Pre-rounding Verlinde values ``V[a, b, c]`` (self-conjugate theories)."""
    S = data.S
    w = S / data.vacuum_row  # w[a, x] = S_ax / S_1x
    return np.einsum("ax,bx,cx->abc", w, S, S)


def verlinde_fusion(data: ModularData) -> FusionRing:
    raw = verlinde_coefficients(data)
    rounded = np.rint(raw)
    dev = float(np.max(np.abs(raw - rounded)))
    if dev > INTEGRALITY_TOL:
        raise ModularDataError(f"Verlinde values deviate from integers by {dev:.3g}")
    if np.any(rounded < 0):
        raise ModularDataError("Verlinde formula produced a negative multiplicity")
    labels = data.labels
    consts = {
        (labels[a], labels[b], labels[c]): int(rounded[a, b, c])
        for a, b, c in np.argwhere(rounded > 0)
    }
    return FusionRing(labels, data.unit, consts)


def max_integrality_deviation(data: ModularData) -> float:
    raw = verlinde_coefficients(data)
    return float(np.max(np.abs(raw - np.rint(raw))))


def total_dim_squared(data: ModularData, subset: Iterable) -> float:
    qd = data.qdim
    total = 0.0
    for a in subset:
        if a not in qd:
            raise KeyError(f"unknown label {a!r}")
        total += qd[a] ** 2
    return total


def qdim_homomorphism_error(ring: FusionRing, qdim: dict) -> float:
    """max |d_a d_b - sum_c N_ab^c d_c| over all label pairs."""
    worst = 0.0
    for a in ring.labels:
        for b in ring.labels:
            rhs = sum(n * qdim[c] for c, n in ring.product(a, b).items())
            worst = max(worst, abs(qdim[a] * qdim[b] - rhs))
    return worst


def relabel(data: ModularData, mapping) -> ModularData:
    f = mapping if callable(mapping) else mapping.__getitem__
    return ModularData(tuple(f(a) for a in data.labels), f(data.unit), data.S.copy(), data.model)


def ising() -> ModularData:
    return s_matrix(MinimalModel(1))


def field_qdim(field: PrimaryField) -> float:
    return s_matrix(field.model).qdim[field]
