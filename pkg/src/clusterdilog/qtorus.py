"""Truncated series in a quantum torus and compact quantum dilogarithms.

Elements are finite sums  sum_a c_a Y_a  with exponent vectors ``a`` in the
non-negative cone, coefficients in Q(q) written to the left, and

    Y_a Y_b = q^{-L(a, b)} Y_{a+b},

where ``L`` is a skew-symmetric integer pairing.  Terms of total degree above
the bound are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .qrat import QRat

Exponent = tuple[int, ...]
Pairing = tuple[tuple[int, ...], ...]


class NegativeConeError(ValueError):
    pass


def as_pairing(rows: Iterable[Iterable[int]]) -> Pairing:
    lam = tuple(tuple(int(v) for v in row) for row in rows)
    n = len(lam)
    if any(len(r) != n for r in lam):
        raise ValueError("pairing must be square")
    for i in range(n):
        for j in range(n):
            if lam[i][j] != -lam[j][i]:
                raise ValueError("pairing must be skew-symmetric")
    return lam


def pair(lam: Pairing, a: Sequence[int], b: Sequence[int]) -> int:
    total = 0
    for i, ai in enumerate(a):
        if ai:
            row = lam[i]
            total += ai * sum(row[j] * bj for j, bj in enumerate(b) if bj)
    return total


@dataclass(frozen=True)
class TruncatedSeries:
    n: int
    degree: int
    terms: Mapping[Exponent, QRat] = field(default_factory=dict)

    @classmethod
    def one(cls, n: int, degree: int) -> "TruncatedSeries":
        return cls(n, degree, {(0,) * n: QRat(1)})

    @classmethod
    def from_terms(cls, n: int, degree: int, terms: Mapping[Exponent, QRat]) -> "TruncatedSeries":
        clean = {}
        for a, c in terms.items():
            if len(a) != n:
                raise ValueError(f"exponent {a} has wrong length")
            if any(v < 0 for v in a):
                raise NegativeConeError(f"exponent {a} outside the non-negative cone")
            if sum(a) <= degree and not c.is_zero():
                clean[tuple(a)] = c
        return cls(n, degree, clean)

    def coefficient(self, a: Sequence[int]) -> QRat:
        return self.terms.get(tuple(a), QRat(0))

    def is_one(self) -> bool:
        zero = (0,) * self.n
        return len(self.terms) == 1 and zero in self.terms and self.terms[zero].is_one()

    def scaled(self, shift: int) -> "TruncatedSeries":
        """Substitute Y_a -> q^{shift*|a|} Y_a (valid for a one-variable series)."""
        return TruncatedSeries(
            self.n, self.degree, {a: c * QRat.q_power(shift * sum(a)) for a, c in self.terms.items()}
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.n, self.degree) == (other.n, other.degree) and dict(self.terms) == dict(other.terms)

    def __hash__(self):  # pragma: no cover - dict field
        return hash((self.n, self.degree, frozenset(self.terms)))


def normal_product(a: TruncatedSeries, b: TruncatedSeries, lam: Pairing) -> TruncatedSeries:
    if a.n != b.n or a.degree != b.degree:
        raise ValueError("rank/degree mismatch in series product")
    if len(lam) != a.n:
        raise ValueError("pairing has wrong rank")
    D = a.degree
    out: dict[Exponent, QRat] = {}
    for ea, ca in a.terms.items():
        da = sum(ea)
        for eb, cb in b.terms.items():
            if da + sum(eb) > D:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            c = ca * cb
            p = pair(lam, ea, eb)
            if p:
                c = c * QRat.q_power(-p)
            prev = out.get(e)
            out[e] = c if prev is None else prev + c
    return TruncatedSeries(a.n, D, {e: c for e, c in out.items() if not c.is_zero()})


def psi_coefficients(k: int, sign: int, m_max: int) -> list[QRat]:
    """Coefficients of x^m in Psi_{q^k}(x)^{sign}, m = 0..m_max.

    Psi_{q^k}(x) = 1 / prod_{j>=0} (1 + q^{k(2j+1)} x).  Both the function and
    its inverse satisfy a first-order q-difference equation under x -> q^{2k} x,
    which gives the coefficient recursions below.
    """
    if k < 1:
        raise ValueError("base exponent must be positive")
    coeffs = [QRat(1)]
    for m in range(1, m_max + 1):
        q2km = QRat.q_power(2 * k * m)
        if sign > 0:
            # Psi(q^{2k} x) = (1 + q^k x) Psi(x)
            c = coeffs[-1] * QRat.q_power(k) / (q2km - 1)
        else:
            # P(x) = (1 + q^k x) P(q^{2k} x)
            c = coeffs[-1] * QRat.q_power(k * (2 * m - 1)) / (1 - q2km)
        coeffs.append(c)
    return coeffs


def psi_series(alpha: Sequence[int], k: int, sign: int, degree: int, n: int | None = None) -> TruncatedSeries:
    alpha = tuple(int(v) for v in alpha)
    n = len(alpha) if n is None else n
    if len(alpha) != n:
        raise ValueError("exponent vector has wrong length")
    if not any(alpha):
        raise ValueError("dilogarithm argument must be a nonzero exponent vector")
    if any(v < 0 for v in alpha):
        raise NegativeConeError(f"exponent {alpha} outside the non-negative cone")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    size = sum(alpha)
    coeffs = psi_coefficients(k, sign, degree // size)
    # Y_a commutes with itself, so x^m = Y_{m a} exactly.
    terms = {tuple(m * v for v in alpha): c for m, c in enumerate(coeffs)}
    return TruncatedSeries(n, degree, terms)


@dataclass(frozen=True)
class DilogFactor:
    """Psi_{q^k}(Y_alpha)^{sign}."""

    alpha: Exponent
    k: int = 1
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(int(v) for v in self.alpha))
        if not any(self.alpha):
            raise ValueError("dilogarithm argument must be nonzero")
        if self.k < 1:
            raise ValueError("base exponent must be positive")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def inverse(self) -> "DilogFactor":
        return DilogFactor(self.alpha, self.k, -self.sign)


@dataclass(frozen=True)
class DilogWord:
    lam: Pairing
    factors: tuple[DilogFactor, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "lam", as_pairing(self.lam))
        object.__setattr__(self, "factors", tuple(self.factors))
        for f in self.factors:
            if len(f.alpha) != self.n:
                raise ValueError(f"factor {f.alpha} does not match rank {self.n}")

    @property
    def n(self) -> int:
        return len(self.lam)

    def __len__(self) -> int:
        return len(self.factors)

    def inverse(self) -> "DilogWord":
        return DilogWord(self.lam, tuple(f.inverse() for f in reversed(self.factors)))

    def with_factors(self, factors: Iterable[DilogFactor]) -> "DilogWord":
        return DilogWord(self.lam, tuple(factors))


def word_to_series(w: DilogWord, degree: int) -> TruncatedSeries:
    for f in w.factors:
        if any(v < 0 for v in f.alpha):
            raise NegativeConeError(f"factor argument {f.alpha} outside the non-negative cone")
    acc = TruncatedSeries.one(w.n, degree)
    cache: dict[DilogFactor, TruncatedSeries] = {}
    for f in w.factors:
        s = cache.get(f)
        if s is None:
            s = cache[f] = psi_series(f.alpha, f.k, f.sign, degree, w.n)
        acc = normal_product(acc, s, w.lam)
    return acc


@dataclass(frozen=True)
class Verdict:
    verified: bool
    degree: int
    monomial: Exponent | None = None
    lhs_coefficient: QRat | None = None
    rhs_coefficient: QRat | None = None

    def __bool__(self) -> bool:
        return self.verified

    def to_json(self) -> dict:
        out = {"verified": self.verified, "degree": self.degree}
        if not self.verified:
            out.update(
                monomial=list(self.monomial),
                lhs=str(self.lhs_coefficient),
                rhs=str(self.rhs_coefficient),
            )
        return out


def compare_series(a: TruncatedSeries, b: TruncatedSeries) -> Verdict:
    """Coefficientwise comparison; the first difference is the lowest-degree one."""
    keys = sorted(set(a.terms) | set(b.terms), key=lambda e: (sum(e), e))
    for e in keys:
        ca, cb = a.coefficient(e), b.coefficient(e)
        if ca != cb:
            return Verdict(False, a.degree, e, ca, cb)
    return Verdict(True, a.degree)


def verify_identity(lhs: DilogWord, rhs: DilogWord, degree: int) -> Verdict:
    if lhs.lam != rhs.lam:
        raise ValueError("both sides must share one pairing")
    return compare_series(word_to_series(lhs, degree), word_to_series(rhs, degree))


def folding_check(k: int, degree: int) -> Verdict:
    """Psi_q(x) against prod_{j=1..k} Psi_{q^k}(q^{k-2j+1} x), one commuting variable."""
    if k < 1:
        raise ValueError("fold order must be positive")
    lam = ((0,),)
    lhs = psi_series((1,), 1, 1, degree)
    rhs = TruncatedSeries.one(1, degree)
    for j in range(1, k + 1):
        rhs = normal_product(rhs, psi_series((1,), k, 1, degree).scaled(k - 2 * j + 1), lam)
    return compare_series(lhs, rhs)
