"""Rogers dilogarithm and the classical identities attached to mutation loops."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Sequence

from .mutation import ExchangeMatrix, apply_sequence, initial_seed

PI2_6 = math.pi ** 2 / 6
_EPS = 2.0 ** -52


def _li2_series(z: float) -> tuple[float, float]:
    """sum z^k / k^2 for |z| <= 1/2, with a bound on the neglected tail."""
    total = 0.0
    term = z
    k = 1
    az = abs(z)
    while True:
        add = term / (k * k)
        total += add
        tail = az ** (k + 1) / ((k + 1) ** 2 * (1 - az)) if az else 0.0
        if tail < 1e-17:
            return total, tail + 4 * k * _EPS * max(abs(total), 1e-300)
        k += 1
        term *= z


def li2(x: float) -> float:
    """Real dilogarithm for x <= 1."""
    return _li2(x)[0]


def _li2(x: float) -> tuple[float, float]:
    if x > 1:
        raise ValueError("li2 is real only for x <= 1")
    if x == 1:
        return PI2_6, 0.0
    if x == 0:
        return 0.0, 0.0
    if x < -1:
        # Li2(x) = -pi^2/6 - log(-x)^2/2 - Li2(1/x)
        v, e = _li2(1 / x)
        lg = math.log(-x)
        return -PI2_6 - 0.5 * lg * lg - v, e + 8 * _EPS * (1 + lg * lg)
    if x < -0.5:
        # Landen: Li2(x) = -Li2(x/(x-1)) - log(1-x)^2/2, with x/(x-1) in (1/3, 1/2]
        v, e = _li2_series(x / (x - 1))
        lg = math.log1p(-x)
        return -v - 0.5 * lg * lg, e + 8 * _EPS * (1 + lg * lg)
    if x <= 0.5:
        return _li2_series(x)
    # reflection: Li2(x) = pi^2/6 - log(x) log(1-x) - Li2(1-x)
    v, e = _li2_series(1 - x)
    p = math.log(x) * math.log1p(-x)
    return PI2_6 - p - v, e + 8 * _EPS * (1 + abs(p))


@dataclass(frozen=True)
class RogersEval:
    x: float
    value: float
    abs_err_bound: float


def rogers_eval(x: float) -> RogersEval:
    """L(x) = Li2(x) + log(x) log(1-x) / 2 on [0, 1], with an error bound."""
    x = float(x)
    if not 0.0 <= x <= 1.0 or math.isnan(x):
        raise ValueError(f"Rogers dilogarithm needs 0 <= x <= 1, got {x}")
    if x == 0.0:
        return RogersEval(x, 0.0, 0.0)
    if x == 1.0:
        return RogersEval(x, PI2_6, _EPS)
    if x <= 0.5:
        v, e = _li2_series(x)
        p = 0.5 * math.log(x) * math.log1p(-x)
        val = v + p
    else:
        # L(x) = pi^2/6 - L(1-x); keeps the series argument below 1/2
        inner = rogers_eval(1.0 - x)
        val, e = PI2_6 - inner.value, inner.abs_err_bound
        p = 0.0
    return RogersEval(x, val, e + 8 * _EPS * (1 + abs(p) + abs(val)))


def rogers_L(x: float) -> float:
    return rogers_eval(x).value


def five_term_check(x: float, y: float) -> float:
    """L(x) + L(y) - L(x(1-y)/(1-xy)) - L(xy) - L(y(1-x)/(1-xy))."""
    if not (0 < x < 1 and 0 < y < 1):
        raise ValueError("five-term relation needs 0 < x, y < 1")
    d = 1 - x * y
    return (
        rogers_L(x) + rogers_L(y)
        - rogers_L(x * (1 - y) / d) - rogers_L(x * y) - rogers_L(y * (1 - x) / d)
    )


def _arg(v: Fraction, eps: int) -> float:
    w = v if eps > 0 else 1 / v
    return float(w / (1 + w))


def loop_sum_terms(B: ExchangeMatrix, y0: Sequence[Fraction], seq: Iterable[int],
                   convention: Literal["before", "after"] = "before") -> list[float]:
    """Terms (eps_t / d_k) L(y^eps / (1 + y^eps)) along the sequence.

    ``before`` feeds the value of the mutated variable just before step t,
    ``after`` the value just after it.  The 1/d_k weight is 1 for
    skew-symmetric B and is what makes non-simply-laced loops sum to zero.
    """
    _, steps = apply_sequence(initial_seed(B, y0), seq)
    out = []
    for st in steps:
        v = st.y_before if convention == "before" else st.y_after
        out.append(st.eps * rogers_L(_arg(v, st.eps)) / B.d[st.k - 1])
    return out


def loop_sum_check(B: ExchangeMatrix, y0: Sequence[Fraction], seq: Iterable[int],
                   convention: Literal["before", "after"] = "before") -> float:
    return math.fsum(loop_sum_terms(B, y0, seq, convention))
