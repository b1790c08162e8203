"""Fusion rules of a commutant subalgebra from a branching decomposition.

Given irreducible V-modules ``M^i`` that decompose over a subalgebra U and its
commutant as ``M^i = sum_{alpha in J_i} W^alpha (x) M^(i,alpha)``, and assuming
the vacuum row already contains every U-module (J_1 = J), the commutant fusion
rules factor as ``N_{(i,a),(j,b)}^{(k,c)} = N_{ij}^k * N_{ab}^c``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .fusion import FusionRing, check_axioms
from .modular import ModularData, total_dim_squared

DIM_TOL = 1e-8


class HypothesisError(ValueError):
    """The factorization theorem does not apply to the given data."""


@dataclass(frozen=True)
class BranchingTable:
    """``rows[i]`` lists ``(alpha, commutant_label)`` pairs; first entries of I and J are vacua."""

    I: tuple
    J: tuple
    rows: Mapping[object, tuple]

    def __post_init__(self):
        object.__setattr__(self, "I", tuple(self.I))
        object.__setattr__(self, "J", tuple(self.J))
        object.__setattr__(self, "rows", {i: tuple(tuple(x) for x in r) for i, r in self.rows.items()})
        if set(self.rows) != set(self.I):
            raise ValueError("branching rows must be given for exactly the labels in I")
        for i, row in self.rows.items():
            for alpha, _ in row:
                if alpha not in self.J:
                    raise ValueError(f"row {i!r} uses {alpha!r}, which is not in J")

    @property
    def vacuum(self):
        return self.I[0]

    @property
    def sub_vacuum(self):
        return self.J[0]

    def J_i(self, i) -> tuple:
        return tuple(alpha for alpha, _ in self.rows[i])

    def label(self, i, alpha):
        for a, lab in self.rows[i]:
            if a == alpha:
                return lab
        raise KeyError(f"no branch {alpha!r} in row {i!r}")

    def pairs(self) -> list[tuple]:
        """``((i, alpha), label)`` in row-major order."""
        return [((i, a), lab) for i in self.I for a, lab in self.rows[i]]

    def commutant_labels(self) -> list:
        return [lab for _, lab in self.pairs()]

    def to_json(self) -> dict:
        return {
            "I": list(self.I),
            "J": list(self.J),
            "rows": {str(i): [[a, lab] for a, lab in self.rows[i]] for i in self.I},
        }

    @classmethod
    def from_json(cls, data: dict | str | Path) -> BranchingTable:
        if isinstance(data, Path):
            data = json.loads(data.read_text())
        elif isinstance(data, str):
            data = json.loads(data)
        return cls(data["I"], data["J"], {i: [tuple(x) for x in r] for i, r in data["rows"].items()})


@dataclass
class ValidationReport:
    j1_equals_j: bool
    missing: dict = field(default_factory=dict)  # i -> J labels absent from row i
    dimension: dict = field(default_factory=dict)  # i -> (sum over J_1, sum over J_i)
    duplicates: list = field(default_factory=list)
    count: int = 0
    expected_count: int = 0
    ring_mismatch: list = field(default_factory=list)

    @property
    def rows_complete(self) -> bool:
        return not self.missing

    @property
    def inequality_holds(self) -> bool:
        return all(lhs <= rhs + DIM_TOL for lhs, rhs in self.dimension.values())

    @property
    def equality_holds(self) -> bool:
        return all(abs(lhs - rhs) <= DIM_TOL for lhs, rhs in self.dimension.values())

    @property
    def ok(self) -> bool:
        return (
            self.j1_equals_j
            and self.rows_complete
            and self.inequality_holds
            and self.equality_holds
            and not self.duplicates
            and self.count == self.expected_count
            and not self.ring_mismatch
        )

    def items(self) -> list[tuple[str, bool, str]]:
        """(check name, verdict, detail) for every hypothesis tested."""
        out = [
            ("J_1 = J", self.j1_equals_j, ""),
            ("J_i = J for every i", self.rows_complete, f"missing: {self.missing}" if self.missing else ""),
            ("sum_{J_1} d^2 <= sum_{J_i} d^2 for every i", self.inequality_holds, ""),
            ("... with equality", self.equality_holds, ""),
            ("commutant labels distinct", not self.duplicates,
             f"repeated: {self.duplicates}" if self.duplicates else ""),
            ("|commutant labels| = |I|*|J|", self.count == self.expected_count,
             f"{self.count} vs {self.expected_count}"),
        ]
        if self.ring_mismatch:
            out.append(("labels agree with the supplied data", False, "; ".join(self.ring_mismatch)))
        return out


def validate(table: BranchingTable, big_ring: FusionRing, sub_data: ModularData) -> ValidationReport:
    J = set(table.J)
    mismatch = []
    if set(big_ring.labels) != set(table.I):
        mismatch.append("big ring labels != I")
    if set(sub_data.labels) != J:
        mismatch.append("subalgebra modular data labels != J")
    j1 = table.J_i(table.vacuum)
    missing = {i: sorted(J - set(table.J_i(i)), key=table.J.index) for i in table.I if J - set(table.J_i(i))}
    dims = {}
    if not mismatch:
        lhs = total_dim_squared(sub_data, j1)
        dims = {i: (lhs, total_dim_squared(sub_data, table.J_i(i))) for i in table.I}
    labels = table.commutant_labels()
    seen, dup = set(), []
    for lab in labels:
        if lab in seen:
            dup.append(lab)
        seen.add(lab)
    # the vacuum pair must be present for the unit to exist
    if table.sub_vacuum not in j1:
        mismatch.append("vacuum row lacks the subalgebra vacuum")
    return ValidationReport(
        j1_equals_j=set(j1) == J,
        missing=missing,
        dimension=dims,
        duplicates=dup,
        count=len(seen),
        expected_count=len(table.I) * len(table.J),
        ring_mismatch=mismatch,
    )


def derive_commutant_ring(table: BranchingTable, big_ring: FusionRing, sub_ring: FusionRing) -> FusionRing:
    """Commutant fusion ring with ``N_{(i,a),(j,b)}^{(k,c)} = N_ij^k N_ab^c``."""
    J = set(table.J)
    if set(table.J_i(table.vacuum)) != J:
        raise HypothesisError("vacuum row does not contain every subalgebra module (J_1 != J)")
    incomplete = [i for i in table.I if set(table.J_i(i)) != J]
    if incomplete:
        raise HypothesisError(f"rows {incomplete} do not contain every subalgebra module")
    labels = table.commutant_labels()
    if len(set(labels)) != len(labels):
        raise HypothesisError("commutant labels are not pairwise distinct")
    if set(big_ring.labels) != set(table.I) or set(sub_ring.labels) != J:
        raise HypothesisError("ring labels do not match the branching table")
    if big_ring.unit != table.vacuum or sub_ring.unit != table.sub_vacuum:
        raise HypothesisError("ring units do not match the table vacua")
    for name, ring in (("big", big_ring), ("subalgebra", sub_ring)):
        report = check_axioms(ring)
        if not report.ok:
            raise HypothesisError(f"{name} ring violates fusion axioms: {report.violations()[:3]}")

    lab = {pair: l for pair, l in table.pairs()}
    consts = {}
    for (i, j, k), n1 in big_ring.constants.items():
        for (a, b, c), n2 in sub_ring.constants.items():
            consts[lab[i, a], lab[j, b], lab[k, c]] = n1 * n2
    return FusionRing(labels, lab[table.vacuum, table.sub_vacuum], consts)


@dataclass
class ProductReport:
    failures: list = field(default_factory=list)  # (i, alpha, actual product)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def check_product_structure(table: BranchingTable, derived: FusionRing) -> ProductReport:
    """(i, vacuum) x (vacuum, alpha) must equal (i, alpha) exactly, for every i, alpha."""
    report = ProductReport()
    for i in table.I:
        for alpha in table.J:
            left = table.label(i, table.sub_vacuum)
            right = table.label(table.vacuum, alpha)
            prod = derived.product(left, right)
            report.checked += 1
            if dict(prod) != {table.label(i, alpha): 1}:
                report.failures.append((i, alpha, dict(prod)))
    return report


def derived_qdim(table: BranchingTable, big_qdim: Mapping, sub_qdim: Mapping) -> dict:
    return {lab: big_qdim[i] * sub_qdim[a] for (i, a), lab in table.pairs()}


def fp_dimensions(ring: FusionRing) -> dict:
    """Frobenius-Perron dimensions: Perron eigenvector of sum_a N_a, normalised at the unit."""
    t = ring.tensor().astype(np.float64)
    total = t.sum(axis=0)  # row b, column c: sum_a N_ab^c
    vals, vecs = np.linalg.eig(total)
    v = np.abs(np.real(vecs[:, np.argmax(np.real(vals))]))
    v = v / v[ring.index(ring.unit)]
    return {a: float(v[i]) for i, a in enumerate(ring.labels)}


def restriction_isomorphic(derived: FusionRing, ring: FusionRing, embed: Mapping) -> list:
    """Constants of ``ring`` that the image of ``embed`` fails to reproduce inside ``derived``."""
    bad = []
    for a in ring.labels:
        for b in ring.labels:
            for c in ring.labels:
                if derived.N(embed[a], embed[b], embed[c]) != ring.N(a, b, c):
                    bad.append((a, b, c))
    return bad


def sub_embedding(table: BranchingTable) -> dict:
    return {a: table.label(table.vacuum, a) for a in table.J}


def big_embedding(table: BranchingTable) -> dict:
    return {i: table.label(i, table.sub_vacuum) for i in table.I}


def build_table(I: Sequence, J: Sequence, names: Mapping) -> BranchingTable:
    """Complete table with every row containing all of J; ``names[(i, a)]`` gives labels."""
    return BranchingTable(I, J, {i: [(a, names[i, a]) for a in J] for i in I})


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


def run_checks(
    table: BranchingTable,
    big_ring: FusionRing,
    sub_ring: FusionRing,
    sub_data: ModularData,
) -> tuple[list[Check], FusionRing | None]:
    """Validate, derive the commutant ring, and run every consistency check on it."""
    from .modular import qdim_homomorphism_error

    checks = []
    report = validate(table, big_ring, sub_data)
    checks.extend(Check(f"validate: {name}", ok, detail) for name, ok, detail in report.items())
    for name, ring in (("big", big_ring), ("subalgebra", sub_ring)):
        ax = check_axioms(ring)
        checks.append(Check(f"{name} ring axioms", ax.ok, "; ".join(ax.violations()[:3])))
    try:
        derived = derive_commutant_ring(table, big_ring, sub_ring)
    except HypothesisError as exc:
        checks.append(Check("derive commutant ring", False, str(exc)))
        return checks, None
    checks.append(Check("derive commutant ring", True, f"{len(derived)} labels"))

    ax = check_axioms(derived)
    checks.append(Check("derived ring axioms", ax.ok, "; ".join(ax.violations()[:3])))
    prod = check_product_structure(table, derived)
    checks.append(Check("(i,1) x (1,a) = (i,a)", prod.ok,
                        f"{prod.checked} pairs" if prod.ok else str(prod.failures[:3])))
    bad = restriction_isomorphic(derived, sub_ring, sub_embedding(table))
    checks.append(Check("vacuum row reproduces the subalgebra ring", not bad, str(bad[:3]) if bad else ""))
    bad = restriction_isomorphic(derived, big_ring, big_embedding(table))
    checks.append(Check("vacuum column reproduces the big ring", not bad, str(bad[:3]) if bad else ""))

    big_dims = fp_dimensions(big_ring)
    qd = derived_qdim(table, big_dims, sub_data.qdim)
    err = qdim_homomorphism_error(derived, qd)
    checks.append(Check("d(i,a) = d_i d_a is a fusion homomorphism", err <= DIM_TOL, f"max error {err:.2e}"))
    fp = fp_dimensions(derived)
    err = max(abs(fp[k] - qd[k]) for k in qd)
    checks.append(Check("Frobenius-Perron dims of the derived ring = d_i d_a", err <= DIM_TOL,
                        f"max error {err:.2e}"))
    return checks, derived
