"""Finite commutative fusion rings and the admissible-triple rule for minimal models."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cache
from itertools import product
from math import gcd
from typing import Callable, Hashable, Iterable, Mapping

import numpy as np

from .kac import MinimalModel, PrimaryField, enumerate_primaries

Label = Hashable


class FusionRing:
    """Label set with a unit and sparse non-negative structure constants N_{ab}^c.

    Constants absent from ``constants`` are zero. Instances are treated as immutable.
    """

    def __init__(self, labels: Iterable[Label], unit: Label, constants: Mapping[tuple, int]):
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate labels")
        if unit not in self.labels:
            raise ValueError(f"unit {unit!r} is not a label")
        self.unit = unit
        self._index = {a: i for i, a in enumerate(self.labels)}
        consts = {}
        for (a, b, c), n in constants.items():
            for x in (a, b, c):
                if x not in self._index:
                    raise KeyError(f"unknown label {x!r}")
            if n < 0:
                raise ValueError(f"negative structure constant N[{a},{b}->{c}] = {n}")
            if n:
                consts[a, b, c] = int(n)
        self.constants = consts
        self._products: dict[tuple, Counter] = {}
        for (a, b, c), n in consts.items():
            self._products.setdefault((a, b), Counter())[c] = n

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"FusionRing({len(self.labels)} labels, unit={self.unit!r})"

    def __eq__(self, other):
        if not isinstance(other, FusionRing):
            return NotImplemented
        return (
            set(self.labels) == set(other.labels)
            and self.unit == other.unit
            and self.constants == other.constants
        )

    def N(self, a: Label, b: Label, c: Label) -> int:
        return self.constants.get((a, b, c), 0)

    def index(self, label: Label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown label {label!r}") from None

    def tensor(self) -> np.ndarray:
        """Dense array ``T[i, j, k] = N_{labels[i], labels[j]}^{labels[k]}``."""
        n = len(self.labels)
        t = np.zeros((n, n, n), dtype=np.int64)
        for (a, b, c), v in self.constants.items():
            t[self._index[a], self._index[b], self._index[c]] = v
        return t

    def product(self, a: Label, b: Label) -> Counter:
        self.index(a), self.index(b)
        return Counter(self._products.get((a, b), ()))

    def relabel(self, mapping: Mapping | Callable) -> FusionRing:
        f = mapping if callable(mapping) else mapping.__getitem__
        return FusionRing(
            [f(a) for a in self.labels],
            f(self.unit),
            {(f(a), f(b), f(c)): n for (a, b, c), n in self.constants.items()},
        )

    def restrict(self, labels: Iterable[Label]) -> FusionRing:
        """Sub-table on ``labels``; only meaningful when they span a based subring."""
        keep = list(labels)
        ks = set(keep)
        unit = self.unit if self.unit in ks else keep[0]
        return FusionRing(
            keep,
            unit,
            {k: n for k, n in self.constants.items() if set(k) <= ks},
        )

    def to_json(self, label_str: Callable[[Label], str] = str) -> dict:
        return {
            "labels": [label_str(a) for a in self.labels],
            "unit": label_str(self.unit),
            "constants": [
                {"a": label_str(a), "b": label_str(b), "c": label_str(c), "n": n}
                for (a, b, c), n in sorted(
                    self.constants.items(),
                    key=lambda kv: tuple(self._index[x] for x in kv[0]),
                )
            ],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> FusionRing:
        if isinstance(data, str):
            data = json.loads(data)
        consts = {(e["a"], e["b"], e["c"]): e["n"] for e in data["constants"]}
        return cls(data["labels"], data["unit"], consts)

    def to_markdown(self, label_str: Callable[[Label], str] = str) -> str:
        names = [label_str(a) for a in self.labels]
        lines = ["| ⊠ | " + " | ".join(names) + " |", "|---" * (len(names) + 1) + "|"]
        for a, an in zip(self.labels, names):
            cells = []
            for b in self.labels:
                prod = self.product(a, b)
                terms = [
                    (f"{n}·" if n > 1 else "") + label_str(c)
                    for c in self.labels
                    if (n := prod.get(c, 0))
                ]
                cells.append(" ⊕ ".join(terms) or "0")
            lines.append(f"| {an} | " + " | ".join(cells) + " |")
        return "\n".join(lines)


def fuse(ring: FusionRing, a: Iterable[Label] | Mapping, b: Iterable[Label] | Mapping) -> Counter:
    """Bilinear extension of the fusion product to multisets of simple labels."""
    ca, cb = Counter(a), Counter(b)
    out: Counter = Counter()
    for x, mx in ca.items():
        for y, my in cb.items():
            for c, n in ring.product(x, y).items():
                out[c] += mx * my * n
    return +out


@dataclass
class AxiomReport:
    unit: list[tuple] = field(default_factory=list)
    commutativity: list[tuple] = field(default_factory=list)
    associativity: list[tuple] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.unit or self.commutativity or self.associativity)

    def __bool__(self):
        # truthy when there is something to report
        return not self.ok

    def violations(self) -> list[str]:
        return (
            [f"unit: N[1,{b}->{c}]" for b, c in self.unit]
            + [f"commutativity: N[{a},{b}->{c}]" for a, b, c in self.commutativity]
            + [f"associativity: ({a},{b},{c};{d})" for a, b, c, d in self.associativity]
        )


def check_axioms(ring: FusionRing) -> AxiomReport:
    """Exhaustive unit / commutativity / associativity check.

    Associativity compares sum_e N_ab^e N_ec^d with sum_f N_bc^f N_af^d for every
    quadruple (a, b, c, d).
    """
    t = ring.tensor()
    labels = ring.labels
    n = len(labels)
    report = AxiomReport()

    u = t[ring.index(ring.unit)]
    for b, c in np.argwhere(u != np.eye(n, dtype=np.int64)):
        report.unit.append((labels[b], labels[c]))

    for a, b, c in np.argwhere(t != t.transpose(1, 0, 2)):
        report.commutativity.append((labels[a], labels[b], labels[c]))

    # float matmul is exact here: entries are small integers, sums stay far below 2**53
    tf = t.astype(np.float64)
    left = (tf.reshape(n * n, n) @ tf.reshape(n, n * n)).reshape(n, n, n, n)
    # left[a,b,c,d] = sum_e N[a,b,e] N[e,c,d]
    bc = tf.reshape(n * n, n)  # rows (b,c), cols f
    af = tf.transpose(0, 2, 1).reshape(n * n, n)  # rows (a,d), cols f
    right = (bc @ af.T).reshape(n, n, n, n).transpose(2, 0, 1, 3)
    # right[a,b,c,d] = sum_f N[b,c,f] N[a,f,d]
    for a, b, c, d in np.argwhere(left != right):
        report.associativity.append((labels[a], labels[b], labels[c], labels[d]))
    return report


@dataclass(frozen=True)
class AdmissibleTriple:
    p: int
    q: int
    first: tuple[int, int]
    second: tuple[int, int]
    third: tuple[int, int]


def is_admissible(triple: AdmissibleTriple) -> bool:
    p, q = triple.p, triple.q
    if p < 2 or q < 2 or gcd(p, q) != 1:
        raise ValueError(f"admissibility needs coprime p, q >= 2, got p={p}, q={q}")
    (r1, s1), (r2, s2), (r3, s3) = triple.first, triple.second, triple.third
    return (
        0 < r1 < p and 0 < r2 < p and 0 < r3 < p
        and 0 < s1 < q and 0 < s2 < q and 0 < s3 < q
        and r1 + r2 + r3 < 2 * p
        and s1 + s2 + s3 < 2 * q
        and r1 + r2 > r3 and r1 + r3 > r2 and r2 + r3 > r1
        and s1 + s2 > s3 and s1 + s3 > s2 and s2 + s3 > s1
        and (r1 + r2 + r3) % 2 == 1
        and (s1 + s2 + s3) % 2 == 1
    )


def admissible_any_representative(a: PrimaryField, b: PrimaryField, c: PrimaryField) -> bool:
    model = a.model
    return any(
        is_admissible(AdmissibleTriple(model.p, model.q, x, y, z))
        for x, y, z in product(a.representatives(), b.representatives(), c.representatives())
    )


@cache
def minimal_model_fusion(model: MinimalModel) -> FusionRing:
    fields = enumerate_primaries(model)
    consts = {
        (a, b, c): 1
        for a, b, c in product(fields, repeat=3)
        if admissible_any_representative(a, b, c)
    }
    return FusionRing(fields, model.field(1, 1), consts)
