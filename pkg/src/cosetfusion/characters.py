"""Virasoro characters, character expressions, and the E8 branching identity check."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import isqrt, lcm
from typing import Mapping, Sequence, Union

from .kac import MinimalModel, PrimaryField, central_charge
from .qseries import QSeries, eta_inverse_series, first_difference, theta_sqrt2_e8


def _theta_exponents(p: int, q: int, a: int, bound: Fraction) -> list[int]:
    """Integers ``(2pqn + a)^2`` over n in Z with ``(2pqn + a)^2/(4pq) < bound``."""
    lim = bound * 4 * p * q
    if lim <= 0:
        return []
    out = []
    root = isqrt(int(lim)) + 1
    period = 2 * p * q
    n_lo = -((root + a) // period) - 1
    n_hi = (root - a) // period + 1
    for n in range(n_lo, n_hi + 1):
        x = (period * n + a) ** 2
        if x < lim:
            out.append(x)
    return out


@lru_cache(maxsize=None)
def minimal_character(field: PrimaryField, order) -> QSeries:
    """Character of L(c_m, h_{r,s}), known below the absolute exponent ``order``.

    Rocha-Caridi form: eta^{-1} * sum_n (q^{(2pqn+qr-ps)^2/4pq} - q^{(2pqn+qr+ps)^2/4pq}).
    """
    order = Fraction(order)
    model = field.model
    p, q, r, s = model.p, model.q, field.r, field.s
    d = 4 * p * q
    val = Fraction((q * r - p * s) ** 2, d)  # lowest exponent of the theta difference
    # precision bookkeeping for the product numerator * eta^{-1}
    num_bound = order + Fraction(1, 24)
    eta_bound = order - val
    terms: dict[int, int] = {}
    for x in _theta_exponents(p, q, q * r - p * s, num_bound):
        terms[x] = terms.get(x, 0) + 1
    for x in _theta_exponents(p, q, q * r + p * s, num_bound):
        terms[x] = terms.get(x, 0) - 1
    dd = lcm(d, 24, num_bound.denominator)
    if eta_bound <= 0:
        # nothing known below order is nonzero; keep the exact valuation for precision tracking
        return QSeries({}, dd, offset=val - Fraction(1, 24), order=order)
    numerator = QSeries({x * (dd // d): c for x, c in terms.items()}, dd, offset=val, order=num_bound)
    chi = numerator * eta_inverse_series(eta_bound)
    return chi.truncate(order)


# character expressions --------------------------------------------------------


@dataclass(frozen=True)
class Minimal:
    field: PrimaryField

    def __str__(self):
        c, h = self.field.model.c, self.field.h
        return f"[{c},{h}]"


@dataclass(frozen=True)
class EtaInversePower:
    n: int


@dataclass(frozen=True)
class ThetaSqrt2E8:
    pass


@dataclass(frozen=True)
class Tensor:
    factors: tuple

    def __str__(self):
        return "⊗".join(str(f) for f in self.factors)


@dataclass(frozen=True)
class DirectSum:
    summands: tuple

    def __str__(self):
        return " ⊕ ".join(str(s) for s in self.summands)


CharacterSpec = Union[Minimal, EtaInversePower, ThetaSqrt2E8, Tensor, DirectSum]


def bracket(c, h) -> Minimal:
    """Leaf for ``[c, h]``: the minimal-model module of central charge c and weight h."""
    c, h = Fraction(c), Fraction(h)
    # c = 1 - 6/((m+2)(m+3)) determines m
    pq = Fraction(6, 1 - c) if c != 1 else None
    if pq is None or pq.denominator != 1:
        raise ValueError(f"{c} is not a unitary minimal-model central charge")
    m = (isqrt(4 * int(pq) + 1) - 5) // 2
    if m < 1 or central_charge(MinimalModel(m)) != c:
        raise ValueError(f"{c} is not a unitary minimal-model central charge")
    model = MinimalModel(m)
    matches = {PrimaryField.make(model, r, s) for r in range(1, model.p) for s in range(1, model.q)
               if PrimaryField.make(model, r, s).h == h}
    if len(matches) != 1:
        raise ValueError(f"weight {h} is not in the Kac table of c={c}" if not matches
                         else f"weight {h} is ambiguous for c={c}")
    return Minimal(matches.pop())


def central_charge_of(spec: CharacterSpec) -> Fraction:
    if isinstance(spec, Minimal):
        return spec.field.model.c
    if isinstance(spec, EtaInversePower):
        return Fraction(spec.n)
    if isinstance(spec, ThetaSqrt2E8):
        return Fraction(0)
    if isinstance(spec, Tensor):
        return sum((central_charge_of(f) for f in spec.factors), Fraction(0))
    if isinstance(spec, DirectSum):
        cs = {central_charge_of(s) for s in spec.summands}
        if len(cs) != 1:
            raise ValueError("direct sum of modules with different central charges")
        return cs.pop()
    raise TypeError(f"not a character spec: {spec!r}")


def lowest_weight(spec: CharacterSpec) -> Fraction:
    """Minimal conformal weight over the summands of a spec built from minimal leaves."""
    if isinstance(spec, Minimal):
        return spec.field.h
    if isinstance(spec, Tensor):
        return sum((lowest_weight(f) for f in spec.factors), Fraction(0))
    if isinstance(spec, DirectSum):
        return min(lowest_weight(s) for s in spec.summands)
    raise TypeError(f"lowest weight undefined for {type(spec).__name__}")


def evaluate(spec: CharacterSpec, order) -> QSeries:
    """Expand a character expression, known below the absolute exponent ``order``."""
    order = Fraction(order)
    if isinstance(spec, Minimal):
        return minimal_character(spec.field, order)
    if isinstance(spec, EtaInversePower):
        # eta^{-n} has lowest exponent -n/24
        base = eta_inverse_series(order + Fraction(spec.n - 1, 24))
        return (base ** spec.n).truncate(order)
    if isinstance(spec, ThetaSqrt2E8):
        return theta_sqrt2_e8(order)
    if isinstance(spec, Tensor):
        lows = [_valuation(f) for f in spec.factors]
        total = sum(lows, Fraction(0))
        result = QSeries.monomial(0)
        for f, low in zip(spec.factors, lows):
            # each factor needs precision order - (sum of the other factors' lowest exponents)
            result = result * evaluate(f, order - (total - low))
        return result.truncate(order)
    if isinstance(spec, DirectSum):
        result = QSeries.zero(order)
        for s in spec.summands:
            result = result + evaluate(s, order)
        return result
    raise TypeError(f"not a character spec: {spec!r}")


def _valuation(spec: CharacterSpec) -> Fraction:
    """Exact lowest exponent of the expanded character."""
    if isinstance(spec, Minimal):
        return spec.field.h - spec.field.model.c / 24
    if isinstance(spec, EtaInversePower):
        return Fraction(-spec.n, 24)
    if isinstance(spec, ThetaSqrt2E8):
        return Fraction(0)
    if isinstance(spec, Tensor):
        return sum((_valuation(f) for f in spec.factors), Fraction(0))
    if isinstance(spec, DirectSum):
        return min(_valuation(s) for s in spec.summands)
    raise TypeError(f"not a character spec: {spec!r}")


# E8 decomposition -------------------------------------------------------------


def e8_chain_tuples() -> list[tuple[int, ...]]:
    """All (k_0, ..., k_8) with 0 <= k_j <= j+1 and every k_j even."""
    ranges = [range(0, j + 2, 2) for j in range(9)]
    return list(product(*ranges))


def chain_factor(m: int, k_prev: int, k_next: int) -> PrimaryField:
    """The m-th tensor factor L(c_m, h^m_{k_{m-1}+1, k_m+1})."""
    return PrimaryField.make(MinimalModel(m), k_prev + 1, k_next + 1)


@dataclass
class DecompositionReport:
    order: int
    passed: bool
    lhs_leading: Fraction | None
    rhs_leading: Fraction | None
    tuples: int
    central_charge_total: Fraction
    first_mismatch: tuple | None = None
    lhs: QSeries | None = field(default=None, repr=False)
    rhs: QSeries | None = field(default=None, repr=False)

    def summary(self) -> str:
        if self.passed:
            return (f"PASS: Theta(sqrt2 E8)/eta^8 matches the {self.tuples}-tuple sum "
                    f"through q^({self.lhs_leading}+{self.order})")
        if self.first_mismatch is None:
            return f"FAIL: central charges sum to {self.central_charge_total}, not 8"
        e, a, b = self.first_mismatch
        return f"FAIL: first divergence at q^({e}): lhs {a}, rhs {b}"


def verify_e8_decomposition(order: int = 10, u_specs: Mapping[int, CharacterSpec] | None = None
                            ) -> DecompositionReport:
    """Compare Theta_{sqrt2 E8} eta^{-8} with the sum over the A8 coset chain.

    The right-hand side runs over every admissible tuple (k_0..k_8) of the product of
    the eight Virasoro characters times the U(k_8) character, exactly, through
    ``order`` integer steps above the leading exponent -1/3.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    if u_specs is None:
        from .threec import load_dataset
        u_specs = load_dataset().u_specs_by_k()
    c_u = {central_charge_of(s) for s in u_specs.values()}
    if len(c_u) != 1:
        raise ValueError("U modules with differing central charges")
    c_total = sum((central_charge(MinimalModel(m)) for m in range(1, 9)), Fraction(0)) + c_u.pop()
    lead = Fraction(-1, 3)
    bound = lead + order + 1
    if c_total != 8:
        return DecompositionReport(order, False, None, None, 0, c_total)

    lhs = evaluate(Tensor((ThetaSqrt2E8(), EtaInversePower(8))), bound)

    # characters needed per factor, each with enough precision for the whole product
    vals = {}
    for m in range(1, 9):
        for kp in range(0, m + 1, 2):
            for kn in range(0, m + 2, 2):
                f = chain_factor(m, kp, kn)
                vals[m, kp, kn] = f.h - f.model.c / 24
    u_vals = {k: _valuation(s) for k, s in u_specs.items()}
    floor = sum((min(v for (mm, _, _), v in vals.items() if mm == m) for m in range(1, 9)), Fraction(0)) \
        + min(u_vals.values())

    chars = {}
    for key, v in vals.items():
        m = key[0]
        others = floor - min(w for (mm, _, _), w in vals.items() if mm == m)
        chars[key] = minimal_character(chain_factor(*key), bound - others)
    u_chars = {k: evaluate(s, bound - (floor - min(u_vals.values()))) for k, s in u_specs.items()}

    # depth-first over tuples, sharing prefix products
    rhs = QSeries.zero(bound)
    count = 0

    def walk(m: int, k_prev: int, acc: QSeries):
        nonlocal rhs, count
        for k in range(0, m + 2, 2):
            nxt = acc * chars[m, k_prev, k]
            if m == 8:
                rhs = rhs + (nxt * u_chars[k]).truncate(bound)
                count += 1
            else:
                walk(m + 1, k, nxt)

    walk(1, 0, QSeries.monomial(0))

    mismatch = first_difference(lhs, rhs)
    return DecompositionReport(
        order=order,
        passed=mismatch is None and count == len(e8_chain_tuples()),
        lhs_leading=lhs.leading_exponent(),
        rhs_leading=rhs.leading_exponent(),
        tuples=count,
        central_charge_total=c_total,
        first_mismatch=mismatch,
        lhs=lhs,
        rhs=rhs,
    )


@dataclass
class PositivityReport:
    lowest: dict
    vacuum: object
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_weight_positivity(specs: Mapping[object, CharacterSpec], vacuum) -> PositivityReport:
    lowest = {name: lowest_weight(s) for name, s in specs.items()}
    failures = []
    for name, h in lowest.items():
        if name == vacuum and h != 0:
            failures.append((name, h, "vacuum module must have lowest weight 0"))
        elif name != vacuum and h <= 0:
            failures.append((name, h, "non-vacuum lowest weight must be positive"))
    return PositivityReport(lowest, vacuum, failures)


def tensor_of(*specs: CharacterSpec) -> Tensor:
    return Tensor(tuple(specs))


def direct_sum(specs: Sequence[CharacterSpec]) -> DirectSum:
    return DirectSum(tuple(specs))
