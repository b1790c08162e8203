"""Virasoro unitary minimal models: central charges, Kac table, conformal weights."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property


@dataclass(frozen=True, order=True)
class MinimalModel:
    """The unitary minimal model L(c_m, 0), with p = m+2 and q = m+3."""

    m: int

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"minimal model index must be a positive integer, got {self.m!r}")

    @property
    def p(self) -> int:
        return self.m + 2

    @property
    def q(self) -> int:
        return self.m + 3

    @property
    def c(self) -> Fraction:
        return central_charge(self)

    def field(self, r: int, s: int) -> PrimaryField:
        return PrimaryField.make(self, r, s)

    def __str__(self):
        return f"M({self.p},{self.q})"


def central_charge(model: MinimalModel) -> Fraction:
    return 1 - Fraction(6, model.p * model.q)


def kac_weight(model: MinimalModel, r: int, s: int) -> Fraction:
    """h_{r,s} for raw (not necessarily canonical) Kac labels."""
    p, q = model.p, model.q
    return Fraction((r * q - s * p) ** 2 - 1, 4 * p * q)


def canonical_label(model: MinimalModel, r: int, s: int) -> tuple[int, int]:
    if not (1 <= r <= model.p - 1 and 1 <= s <= model.q - 1):
        raise ValueError(f"({r},{s}) outside the Kac table of {model}")
    return min((r, s), (model.p - r, model.q - s))


@dataclass(frozen=True)
class PrimaryField:
    """A Kac label (r, s), always stored as the canonical orbit representative.

    Use :meth:`make` (or :meth:`MinimalModel.field`) to build one from raw labels;
    the constructor itself rejects non-canonical pairs.
    """

    model: MinimalModel
    r: int
    s: int

    def __post_init__(self):
        if canonical_label(self.model, self.r, self.s) != (self.r, self.s):
            raise ValueError(f"({self.r},{self.s}) is not the canonical representative")

    @classmethod
    def make(cls, model: MinimalModel, r: int, s: int) -> PrimaryField:
        return cls(model, *canonical_label(model, r, s))

    @classmethod
    def parse(cls, text: str, model: MinimalModel | None = None) -> PrimaryField:
        """Parse ``"m:r.s"`` or, given ``model``, the short form ``"r.s"``."""
        head, sep, tail = text.strip().partition(":")
        if sep:
            m = int(head)
            if model is not None and model.m != m:
                raise ValueError(f"label {text!r} does not belong to {model}")
            model = MinimalModel(m)
        else:
            tail = head
        if model is None:
            raise ValueError(f"label {text!r} needs a model prefix 'm:'")
        r, dot, s = tail.partition(".")
        if not dot:
            raise ValueError(f"malformed field label {text!r}, expected 'r.s'")
        return cls.make(model, int(r), int(s))

    @cached_property
    def h(self) -> Fraction:
        return kac_weight(self.model, self.r, self.s)

    @property
    def short(self) -> str:
        return f"{self.r}.{self.s}"

    def representatives(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.r, self.s), (self.model.p - self.r, self.model.q - self.s)

    def __str__(self):
        return f"{self.model.m}:{self.r}.{self.s}"


def conformal_weight(field: PrimaryField) -> Fraction:
    return field.h


def enumerate_primaries(model: MinimalModel) -> list[PrimaryField]:
    """All (p-1)(q-1)/2 inequivalent primaries, sorted by (h, r, s)."""
    fields = {
        PrimaryField.make(model, r, s)
        for r in range(1, model.p)
        for s in range(1, model.q)
    }
    return sorted(fields, key=lambda f: (f.h, f.r, f.s))


def find_by_weight(model: MinimalModel, h: Fraction) -> list[PrimaryField]:
    return [f for f in enumerate_primaries(model) if f.h == h]


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"malformed rational {text!r}") from None
