"""The 3C-algebra example: five U(2k) modules branching over L(1/2,0) (x) M.

M = L(21/22,0) + L(21/22,8). Each U(2k) decomposes as
``L(1/2,0) (x) M_{k,0} + L(1/2,1/2) (x) M_{k,1} + L(1/2,1/16) (x) M_{k,2}``,
where every M_{k,l} is a sum of two L(21/22, h) modules. The branching table
and the weights live in ``data/`` and go through the generic commutant engine.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from importlib import resources
from itertools import product

from .characters import DirectSum, Minimal, Tensor, lowest_weight
from .commutant import BranchingTable, derive_commutant_ring
from .fusion import AdmissibleTriple, FusionRing, is_admissible, minimal_model_fusion
from .kac import MinimalModel, PrimaryField, enumerate_primaries, parse_fraction
from .modular import ModularData, relabel, s_matrix

P, Q = 11, 12
RANK = 5

ISING = MinimalModel(1)
C9 = MinimalModel(9)


def u_label(k: int) -> str:
    return f"U({2 * k})"


def m_label(k: int, l: int) -> str:
    return f"M_{{{k},{l}}}"


def u_admissible(i: int, j: int, k: int) -> bool:
    """Whether U(2k) occurs in U(2i) x U(2j).

    Uses the labels (2i+1, 1): with (2i-1, 1) the index i = 0 gives r = -1, which
    is outside 0 < r < p and would leave U(0) without its unit role.
    """
    return is_admissible(AdmissibleTriple(P, Q, (2 * i + 1, 1), (2 * j + 1, 1), (2 * k + 1, 1)))


def printed_admissible(i: int, j: int, k: int) -> bool:
    """The same rule with the literal (2i-1, 1) labels, kept for comparison."""
    return is_admissible(AdmissibleTriple(P, Q, (2 * i - 1, 1), (2 * j - 1, 1), (2 * k - 1, 1)))


def fusion_channels(i: int, j: int) -> list[int]:
    return [k for k in range(RANK) if u_admissible(i, j, k)]


def build_u_ring() -> FusionRing:
    labels = [u_label(k) for k in range(RANK)]
    consts = {
        (u_label(i), u_label(j), u_label(k)): 1
        for i, j, k in product(range(RANK), repeat=3)
        if u_admissible(i, j, k)
    }
    return FusionRing(labels, u_label(0), consts)


def ising_ring() -> FusionRing:
    return minimal_model_fusion(ISING).relabel(str)


def ising_data() -> ModularData:
    return relabel(s_matrix(ISING), str)


@dataclass(frozen=True)
class ThreeCDataset:
    branching: BranchingTable
    sub_weights: dict  # J label -> Ising weight
    constituents: dict  # commutant label -> tuple of L(21/22, h) weights
    sub_central_charge: Fraction
    commutant_central_charge: Fraction

    def ising_field(self, alpha: str) -> PrimaryField:
        return PrimaryField.parse(alpha)

    def commutant_fields(self, label: str) -> tuple[PrimaryField, ...]:
        return tuple(_unique_field(C9, h) for h in self.constituents[label])

    def decomp_spec(self, i: str) -> DirectSum:
        """U(2k) as a sum of six [1/2, h] (x) [21/22, h'] tensor products."""
        summands = []
        for alpha, lab in self.branching.rows[i]:
            w = Minimal(self.ising_field(alpha))
            for f in self.commutant_fields(lab):
                summands.append(Tensor((w, Minimal(f))))
        return DirectSum(tuple(summands))

    def decomp_specs(self) -> dict[str, DirectSum]:
        return {i: self.decomp_spec(i) for i in self.branching.I}

    def u_specs_by_k(self) -> dict[int, DirectSum]:
        return {2 * k: self.decomp_spec(u_label(k)) for k in range(RANK)}

    def weight_pairs(self) -> list[tuple[str, Fraction, Fraction]]:
        """All (U label, Ising weight, L(21/22) weight) summands: 30 in total."""
        out = []
        for i in self.branching.I:
            for alpha, lab in self.branching.rows[i]:
                for h in self.constituents[lab]:
                    out.append((i, self.sub_weights[alpha], h))
        return out

    def lowest_weights(self) -> dict[str, Fraction]:
        out = {i: lowest_weight(self.decomp_spec(i)) for i in self.branching.I}
        for lab in self.branching.commutant_labels():
            out[lab] = min(self.constituents[lab])
        return out


def _unique_field(model: MinimalModel, h: Fraction) -> PrimaryField:
    matches = [f for f in enumerate_primaries(model) if f.h == h]
    if len(matches) != 1:
        raise ValueError(f"weight {h} matches {len(matches)} fields of {model}")
    return matches[0]


@cache
def load_dataset() -> ThreeCDataset:
    data = resources.files("cosetfusion") / "data"
    table = BranchingTable.from_json(json.loads((data / "threec.json").read_text()))
    side = json.loads((data / "threec_weights.json").read_text())
    return ThreeCDataset(
        branching=table,
        sub_weights={k: parse_fraction(v) for k, v in side["subalgebra"]["weights"].items()},
        constituents={
            k: tuple(parse_fraction(x) for x in v)
            for k, v in side["commutant"]["constituents"].items()
        },
        sub_central_charge=parse_fraction(side["subalgebra"]["central_charge"]),
        commutant_central_charge=parse_fraction(side["commutant"]["central_charge"]),
    )


def build_m_ring() -> FusionRing:
    return derive_commutant_ring(load_dataset().branching, build_u_ring(), ising_ring())


def lowest_weights() -> dict[str, Fraction]:
    return load_dataset().lowest_weights()


def rule_family_failures(m_ring: FusionRing) -> list[str]:
    """Compare the derived ring with the four displayed rule families.

    Channels k come from the admissible-triple rule directly, not from the U ring.
    """
    fails = []

    def expect(a, b, want):
        got = dict(m_ring.product(a, b))
        want = {lab: 1 for lab in want}
        if got != want:
            fails.append(f"{a} x {b}: expected {sorted(want)}, got {sorted(got)}")

    for i, j in product(range(RANK), repeat=2):
        ks = fusion_channels(i, j)
        for l in range(3):
            expect(m_label(i, 0), m_label(j, l), [m_label(k, l) for k in ks])
        expect(m_label(i, 1), m_label(j, 1), [m_label(k, 0) for k in ks])
        expect(m_label(i, 1), m_label(j, 2), [m_label(k, 2) for k in ks])
        expect(m_label(i, 2), m_label(j, 2), [m_label(k, 0) for k in ks] + [m_label(k, 1) for k in ks])
    return fails


def kac_table_matches() -> list[tuple[Fraction, Fraction, PrimaryField | None, PrimaryField | None]]:
    """For each of the 30 summands, the Kac fields (m=1, m=9) realising its weights."""
    out = []
    for _, h1, h9 in load_dataset().weight_pairs():
        f1 = [f for f in enumerate_primaries(ISING) if f.h == h1]
        f9 = [f for f in enumerate_primaries(C9) if f.h == h9]
        out.append((h1, h9, f1[0] if f1 else None, f9[0] if f9 else None))
    return out
