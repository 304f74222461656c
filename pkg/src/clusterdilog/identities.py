"""Dilogarithm identity words: shorthand notation, loop identities, rank-2 library."""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from .mutation import ExchangeMatrix, Rank2Type, Step
from .qtorus import DilogFactor, DilogWord, Pairing


class ConeViolation(ValueError):
    pass


_TOKEN = re.compile(r"\s*(\d)(?:\^(?:\{(\d+)\}|(\d+)))?\s*")


def parse_shorthand(s: str, n: int) -> tuple[int, ...]:
    """Exponent vector from digit shorthand: "1234" -> (1,1,1,1).

    Repeated digits accumulate ("12344"), and ``d^m`` or ``d^{m}`` counts as
    m copies of ``d`` ("1^2 2" is the same as "112").  A power runs to the next
    space or brace, so "1^2 2^3" needs its space.
    """
    if n > 9:
        raise ValueError("digit shorthand only covers rank <= 9")
    body = s.strip().removeprefix("(").removesuffix(")")
    if not body.strip() or _TOKEN.sub("", body):
        raise ValueError(f"not a shorthand exponent: {s!r}")
    vec = [0] * n
    for digit, braced, bare in _TOKEN.findall(body):
        i = int(digit)
        if not 1 <= i <= n:
            raise ValueError(f"digit {i} out of range 1..{n}")
        vec[i - 1] += int(braced or bare or 1)
    return tuple(vec)


def shorthand(alpha: Sequence[int]) -> str:
    if len(alpha) > 9:
        return "+".join(f"{v}e{i + 1}" if v != 1 else f"e{i + 1}" for i, v in enumerate(alpha) if v)
    return "".join(str(i + 1) * v for i, v in enumerate(alpha) if v > 0)


def format_factor(f: DilogFactor) -> str:
    s = f"({shorthand(f.alpha)})"
    if f.k != 1:
        s += f"_q^{f.k}"
    if f.sign < 0:
        s += "^-1"
    return s


def format_word(w: DilogWord | Iterable[DilogFactor]) -> str:
    factors = w.factors if isinstance(w, DilogWord) else w
    return "".join(format_factor(f) for f in factors) or "1"


_FACTOR = re.compile(r"\s*\(([0-9^ {}]+)\)(?:_q\^(\d+))?(\^-1)?\s*")


def parse_word(text: str, lam: Pairing) -> DilogWord:
    """Inverse of :func:`format_word`."""
    n = len(lam)
    text = text.strip()
    if text in ("", "1"):
        return DilogWord(lam, ())
    factors = []
    pos = 0
    for m in _FACTOR.finditer(text):
        if m.start() != pos:
            break
        factors.append(
            DilogFactor(parse_shorthand(m.group(1), n), int(m.group(2) or 1), -1 if m.group(3) else 1)
        )
        pos = m.end()
    if pos != len(text):
        raise ValueError(f"cannot parse word at offset {pos}: {text[pos:pos + 20]!r}")
    return DilogWord(lam, factors)


def identity_from_loop(trace: Sequence[Step], B: ExchangeMatrix) -> DilogWord:
    """Tropical-form word  prod_t Psi_{q^{d_k}}(Y_{eps_t c_t})^{eps_t}  over D*B.

    ``B`` is the exchange matrix of the initial seed of the loop.
    """
    factors = []
    for t, st in enumerate(trace, 1):
        alpha = tuple(st.eps * v for v in st.c)
        if any(v < 0 for v in alpha):
            raise ConeViolation(f"step {t}: eps*c = {alpha} is not in the non-negative cone")
        factors.append(DilogFactor(alpha, B.d[st.k - 1], st.eps))
    return DilogWord(B.pairing(), factors)


def split_identity(w: DilogWord) -> tuple[DilogWord, DilogWord]:
    """Rewrite ``w = 1`` as ``lhs = rhs``.

    lhs is the leading run of positive factors; the rest is moved to the right
    by inversion, so rhs is the reversed tail with signs flipped.
    """
    cut = 0
    while cut < len(w.factors) and w.factors[cut].sign > 0:
        cut += 1
    lhs = w.with_factors(w.factors[:cut])
    rhs = w.with_factors(w.factors[cut:]).inverse()
    return lhs, rhs


def mirror(w: DilogWord) -> DilogWord:
    """Reverse the factor order and negate the pairing.

    This is the anti-isomorphism Y_a -> Y_a of quantum tori with opposite
    pairings, so it maps true identities to true identities.
    """
    return DilogWord(tuple(tuple(-v for v in row) for row in w.lam), tuple(reversed(w.factors)))


def _w(lam: Pairing, text: str) -> DilogWord:
    return parse_word(text, lam)


RANK2_PAIRINGS: dict[Rank2Type, Pairing] = {
    Rank2Type.A1xA1: ((0, 0), (0, 0)),
    Rank2Type.A2: ((0, -1), (1, 0)),
    Rank2Type.B2: ((0, -2), (2, 0)),
    Rank2Type.G2: ((0, -3), (3, 0)),
}

# exchange matrices whose D*B gives the pairings above
RANK2_MATRICES: dict[Rank2Type, tuple[tuple[tuple[int, int], tuple[int, int]], tuple[int, int]]] = {
    Rank2Type.A1xA1: (((0, 0), (0, 0)), (1, 1)),
    Rank2Type.A2: (((0, -1), (1, 0)), (1, 1)),
    Rank2Type.B2: (((0, -2), (1, 0)), (1, 2)),
    Rank2Type.G2: (((0, -1), (3, 0)), (3, 1)),
}


def rank2_identity(kind: Rank2Type | str) -> tuple[DilogWord, DilogWord]:
    kind = Rank2Type(kind)
    lam = RANK2_PAIRINGS.get(kind)
    if lam is None:
        raise ValueError("no finite identity for an infinite rank-2 type")
    if kind is Rank2Type.A1xA1:
        return _w(lam, "(1)(2)"), _w(lam, "(2)(1)")
    if kind is Rank2Type.A2:
        return _w(lam, "(1)(2)"), _w(lam, "(2)(12)(1)")
    if kind is Rank2Type.B2:
        return _w(lam, "(1)(2)_q^2"), _w(lam, "(2)_q^2(12)(112)_q^2(1)")
    # the long root 1^2 2^3 carries base q^3 like the other long roots
    return (
        _w(lam, "(1)_q^3(2)"),
        _w(lam, "(2)(1222)_q^3(122)(11222)_q^3(12)(1)_q^3"),
    )


def factor_to_json(f: DilogFactor) -> dict:
    return {"alpha": list(f.alpha), "k": f.k, "sign": f.sign}


def factor_from_json(x, n: int) -> DilogFactor:
    if isinstance(x, str):
        return DilogFactor(parse_shorthand(x, n))
    return DilogFactor(tuple(x["alpha"]), int(x.get("k", 1)), int(x.get("sign", 1)))


def word_to_json(w: DilogWord) -> dict:
    return {"n": w.n, "Lambda": [list(r) for r in w.lam], "factors": [factor_to_json(f) for f in w.factors]}


def word_from_json(data: dict) -> DilogWord:
    lam = tuple(tuple(r) for r in data["Lambda"])
    if "n" in data and int(data["n"]) != len(lam):
        raise ValueError("n does not match the pairing size")
    return DilogWord(lam, tuple(factor_from_json(x, len(lam)) for x in data["factors"]))


def identity_to_json(lhs: DilogWord, rhs: DilogWord, **extra) -> dict:
    if lhs.lam != rhs.lam:
        raise ValueError("both sides must share one pairing")
    out = dict(extra)
    out.update(
        n=lhs.n,
        Lambda=[list(r) for r in lhs.lam],
        lhs=[factor_to_json(f) for f in lhs.factors],
        rhs=[factor_to_json(f) for f in rhs.factors],
    )
    return out


def identity_from_json(data: dict) -> tuple[DilogWord, DilogWord]:
    lam = tuple(tuple(r) for r in data["Lambda"])
    n = len(lam)
    return (
        DilogWord(lam, tuple(factor_from_json(x, n) for x in data["lhs"])),
        DilogWord(lam, tuple(factor_from_json(x, n) for x in data["rhs"])),
    )
