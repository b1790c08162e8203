"""Truncated formal q-series with exact integer coefficients and rational exponents.

A series lives in powers of ``q**(1/denom)``. Terms are stored sparsely as
``{k: coeff}`` meaning ``coeff * q**(k/denom)``. ``offset`` is a lower bound on
the support and ``order`` an exclusive upper bound on the exponents that are
known (``None`` for an exact, finite series).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Iterator

import numpy as np

MAX_DENOM = 10**9


class TruncationError(ValueError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _min_order(*orders):
    known = [o for o in orders if o is not None]
    return min(known) if known else None


class QSeries:
    __slots__ = ("denom", "offset", "order", "_terms")

    def __init__(self, terms: dict[int, int], denom: int = 1, offset=None, order=None):
        if denom < 1 or denom > MAX_DENOM:
            raise OverflowError(f"exponent denominator {denom} out of range")
        self.denom = denom
        self.order = None if order is None else _frac(order)
        if self.order is not None and (self.order * denom).denominator != 1:
            raise ValueError(f"order {self.order} is not a multiple of 1/{denom}")
        kept = {}
        for k, c in terms.items():
            if c and (self.order is None or Fraction(k, denom) < self.order):
                kept[k] = c
        self._terms = kept
        if offset is None:
            offset = Fraction(min(kept), denom) if kept else (self.order or Fraction(0))
        self.offset = _frac(offset)
        if (self.offset * denom).denominator != 1:
            raise ValueError(f"offset {self.offset} is not a multiple of 1/{denom}")
        if kept and Fraction(min(kept), denom) < self.offset:
            raise ValueError("a term lies below the declared offset")

    # construction -----------------------------------------------------------

    @classmethod
    def zero(cls, order=None) -> QSeries:
        order = None if order is None else _frac(order)
        # O(q^order) carries no information below order
        return cls({}, 1 if order is None else order.denominator,
                   offset=Fraction(0) if order is None else order, order=order)

    @classmethod
    def monomial(cls, exponent, coeff: int = 1, order=None) -> QSeries:
        e = _frac(exponent)
        d = e.denominator if order is None else lcm(e.denominator, _frac(order).denominator)
        return cls({e.numerator * (d // e.denominator): coeff}, d, offset=e, order=order)

    @classmethod
    def from_coefficients(cls, offset, coeffs: Iterable[int], step=1, order=None) -> QSeries:
        """Coefficients at ``offset, offset+step, ...``; ``order`` defaults to the end of the list."""
        offset, step = _frac(offset), _frac(step)
        coeffs = list(coeffs)
        if order is None:
            order = offset + step * len(coeffs)
        d = lcm(offset.denominator, step.denominator, _frac(order).denominator)
        k0, dk = int(offset * d), int(step * d)
        return cls({k0 + i * dk: c for i, c in enumerate(coeffs) if c}, d, offset=offset, order=order)

    def rescale(self, denom: int) -> QSeries:
        if denom % self.denom:
            raise ValueError(f"cannot rescale denominator {self.denom} to {denom}")
        f = denom // self.denom
        return QSeries({k * f: c for k, c in self._terms.items()}, denom, self.offset, self.order)

    def truncate(self, order) -> QSeries:
        order = _frac(order)
        if self.order is not None and order > self.order:
            raise TruncationError(f"cannot extend precision from {self.order} to {order}")
        d = lcm(self.denom, order.denominator)
        s = self.rescale(d)
        return QSeries(s._terms, d, self.offset, order)

    # access -----------------------------------------------------------------

    def items(self) -> Iterator[tuple[Fraction, int]]:
        for k in sorted(self._terms):
            yield Fraction(k, self.denom), self._terms[k]

    def __iter__(self):
        return self.items()

    def __len__(self):
        return len(self._terms)

    def coefficient(self, exponent) -> int:
        e = _frac(exponent)
        if self.order is not None and e >= self.order:
            raise TruncationError(f"coefficient of q^{e} is beyond the truncation order {self.order}")
        k = e * self.denom
        return self._terms.get(int(k), 0) if k.denominator == 1 else 0

    def coefficients(self, step=1, start=None) -> list[int]:
        """Dense coefficient list at ``start, start+step, ...`` below ``order``."""
        if self.order is None:
            raise TruncationError("dense coefficients of an exact series need an explicit order")
        start = self.offset if start is None else _frac(start)
        step = _frac(step)
        out = []
        e = start
        while e < self.order:
            out.append(self.coefficient(e))
            e += step
        return out

    def leading_exponent(self) -> Fraction | None:
        return Fraction(min(self._terms), self.denom) if self._terms else None

    def leading_coefficient(self) -> int:
        return self._terms[min(self._terms)] if self._terms else 0

    def is_zero(self) -> bool:
        return not self._terms

    def support_step(self) -> Fraction | None:
        """Largest step ``g`` with every exponent in ``leading + g*Z`` (None for <2 terms)."""
        ks = sorted(self._terms)
        g = 0
        for k in ks[1:]:
            g = gcd(g, k - ks[0])
        return Fraction(g, self.denom) if g else None

    # arithmetic -------------------------------------------------------------

    def _common(self, other: QSeries) -> tuple[int, QSeries, QSeries]:
        d = lcm(self.denom, other.denom)
        if d > MAX_DENOM:
            raise OverflowError(f"common exponent denominator {d} too large")
        return d, self.rescale(d), other.rescale(d)

    def __add__(self, other):
        if isinstance(other, int):
            other = QSeries.monomial(0, other)
        if not isinstance(other, QSeries):
            return NotImplemented
        d, a, b = self._common(other)
        terms = dict(a._terms)
        for k, c in b._terms.items():
            terms[k] = terms.get(k, 0) + c
        return QSeries(terms, d, min(a.offset, b.offset), _min_order(a.order, b.order))

    __radd__ = __add__

    def __neg__(self):
        return QSeries({k: -c for k, c in self._terms.items()}, self.denom, self.offset, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return QSeries({k: c * other for k, c in self._terms.items()}, self.denom, self.offset, self.order)
        if not isinstance(other, QSeries):
            return NotImplemented
        d, a, b = self._common(other)
        # known precision of a*b: (a + O(q^A))(b + O(q^B)) = ab + O(q^min(A+val b, B+val a))
        order = _min_order(
            None if a.order is None else a.order + b.offset,
            None if b.order is None else b.order + a.offset,
        )
        limit = None if order is None else order * d
        terms: dict[int, int] = {}
        bt = sorted(b._terms.items())
        for ka, ca in a._terms.items():
            for kb, cb in bt:
                k = ka + kb
                if limit is not None and k >= limit:
                    break
                terms[k] = terms.get(k, 0) + ca * cb
        return QSeries(terms, d, a.offset + b.offset, order)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = QSeries.monomial(0, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self, order=None) -> QSeries:
        """Multiplicative inverse; the leading coefficient must be +1 or -1.

        For an exact series ``order`` must be given (absolute bound of the result).
        """
        if self.is_zero():
            raise ZeroDivisionError("inverse of a zero series")
        lead_c = self.leading_coefficient()
        if lead_c not in (1, -1):
            raise ValueError("integer inverse needs a unit leading coefficient")
        v = self.leading_exponent()
        # relative precision is preserved: 1/(q^v (1 + O(q^(A-v)))) known below -v + (A - v)
        if self.order is not None:
            own = self.order - 2 * v
            order = own if order is None else min(_frac(order), own)
        elif order is None:
            raise TruncationError("inverting an exact series needs an explicit order")
        order = _frac(order)
        step = self.support_step() or Fraction(1)
        n = int(np.ceil((order + v) / step)) if order + v > 0 else 0
        # unit part u(x) = sum u_i x^i with x = q^step
        u = [0] * n
        for e, c in self.items():
            i = (e - v) / step
            if i < n:
                u[int(i)] = c
        inv = [0] * n
        for i in range(n):
            acc = (1 if i == 0 else 0) - sum(u[j] * inv[i - j] for j in range(1, i + 1) if u[j])
            inv[i] = acc * lead_c
        res = QSeries.from_coefficients(-v, inv, step, order=-v + step * n)
        return res.truncate(order) if order < res.order else res

    def __eq__(self, other):
        if isinstance(other, int):
            other = QSeries.monomial(0, other)
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.order == other.order and (self - other).is_zero()

    def __hash__(self):
        return hash((tuple(self.items()), self.order))

    def __repr__(self):
        shown = list(self.items())[:8]
        body = " + ".join(f"{c}*q^({e})" for e, c in shown) or "0"
        if len(self) > 8:
            body += " + ..."
        if self.order is not None:
            body += f" + O(q^({self.order}))"
        return f"QSeries({body})"


def first_difference(a: QSeries, b: QSeries) -> tuple[Fraction, int, int] | None:
    """Lowest exponent where the two series disagree, as (exponent, a_coeff, b_coeff)."""
    diff = a - b
    if diff.is_zero():
        return None
    e = diff.leading_exponent()
    return e, a.coefficient(e), b.coefficient(e)


# eta ------------------------------------------------------------------------


def euler_product(order) -> QSeries:
    """prod_{n>=1} (1 - q^n) + O(q^order)."""
    order = _frac(order)
    n = max(int(np.ceil(order)), 1)
    c = [0] * n
    c[0] = 1
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            c[i] -= c[i - k]
    return QSeries.from_coefficients(0, c, 1, order=order)


def eta_series(order) -> QSeries:
    """q^(1/24) prod (1 - q^n), known below ``order``."""
    order = _frac(order)
    e = euler_product(max(order - Fraction(1, 24), Fraction(1)))
    return (QSeries.monomial(Fraction(1, 24)) * e).truncate(order)


def partition_numbers(n: int) -> list[int]:
    """p(0..n-1) as the inverse of the Euler product."""
    return euler_product(n).inverse().coefficients(1, 0)[:n]


def eta_inverse_series(order) -> QSeries:
    """q^(-1/24) sum_n p(n) q^n, known below ``order``."""
    order = _frac(order)
    depth = order + Fraction(1, 24)
    n = max(int(np.ceil(depth)), 1)
    s = QSeries.from_coefficients(Fraction(-1, 24), partition_numbers(n), 1)
    return s.truncate(order)


# E8 theta ------------------------------------------------------------------

E8_EDGES = ((1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4))


def e8_gram() -> np.ndarray:
    """Cartan matrix of E8 (Bourbaki numbering), the Gram matrix of the simple roots."""
    g = 2 * np.eye(8, dtype=np.int64)
    for i, j in E8_EDGES:
        g[i - 1, j - 1] = g[j - 1, i - 1] = -1
    return g


def lattice_norm_counts(gram: np.ndarray, max_norm: int, chunk: int = 1 << 18) -> np.ndarray:
    """counts[k] = #{x in Z^n : x^T G x = k} for 0 <= k <= max_norm.

    Fincke-Pohst enumeration; floating point only decides which candidates to
    visit (with slack), every reported norm is recomputed in exact integers.
    """
    gram = np.asarray(gram, dtype=np.int64)
    n = gram.shape[0]
    R = np.linalg.cholesky(gram.astype(np.float64)).T  # G = R^T R, R upper triangular
    bound = max_norm + 1e-7
    counts = np.zeros(max_norm + 1, dtype=np.int64)

    def walk(X: np.ndarray, partial: np.ndarray, i: int):
        # X holds coordinates i+1..n-1 in columns i+1.. ; partial = sum over fixed rows
        if i < 0:
            norms = np.einsum("ki,ij,kj->k", X, gram, X)
            norms = norms[norms <= max_norm]
            counts[:] += np.bincount(norms, minlength=max_norm + 1)
            return
        lin = X[:, i + 1:] @ R[i, i + 1:] if i + 1 < n else np.zeros(len(X))
        center = -lin / R[i, i]
        rad = np.sqrt(np.maximum(bound - partial, 0.0)) / R[i, i]
        lo = np.ceil(center - rad - 1e-9).astype(np.int64)
        hi = np.floor(center + rad + 1e-9).astype(np.int64)
        width = np.maximum(hi - lo + 1, 0)
        rows = np.repeat(np.arange(len(X)), width)
        starts = np.repeat(np.cumsum(width) - width, width)
        xi = np.repeat(lo, width) + (np.arange(len(rows)) - starts)
        newX = X[rows].copy()
        newX[:, i] = xi
        newp = partial[rows] + (R[i, i] * xi + lin[rows]) ** 2
        keep = newp <= bound
        newX, newp = newX[keep], newp[keep]
        for s in range(0, len(newX), chunk):
            walk(newX[s:s + chunk], newp[s:s + chunk], i - 1)

    walk(np.zeros((1, n), dtype=np.int64), np.zeros(1), n - 1)
    return counts


def sigma3(n: int) -> int:
    return sum(d**3 for d in range(1, n + 1) if n % d == 0)


def theta_e8(order, method: str = "enumerate") -> QSeries:
    """Theta series of E8, sum over lattice vectors of q^(norm/2), below ``order``."""
    order = _frac(order)
    top = int(np.ceil(order)) - 1  # largest integer exponent kept
    if top < 0:
        return QSeries.zero(order)
    if method == "enumerate":
        counts = lattice_norm_counts(e8_gram(), 2 * top)
        coeffs = [int(counts[2 * k]) for k in range(top + 1)]
        if any(counts[1::2]):
            raise ArithmeticError("odd norm found in an even lattice")
    elif method == "sigma3":
        coeffs = [1] + [240 * sigma3(k) for k in range(1, top + 1)]
    else:
        raise ValueError(f"unknown method {method!r}")
    return QSeries.from_coefficients(0, coeffs, 1, order=order)


def theta_sqrt2_e8(order) -> QSeries:
    """Theta series of sqrt(2)E8, i.e. Theta_E8(q^2).

    Computed by lattice enumeration and checked against 240*sigma_3.
    """
    order = _frac(order)
    half = order / 2
    enum = theta_e8(half, "enumerate")
    if enum != theta_e8(half, "sigma3"):
        raise ArithmeticError("E8 theta series: enumeration disagrees with 240*sigma_3")
    coeffs = enum.coefficients(1, 0)
    return QSeries.from_coefficients(0, coeffs, 2, order=order)
