"""Exact seed mutation: exchange matrices, y-variables at a sample point, c-vectors.

Indices in the public API are 1-based, matching the way mutation sequences
are usually written down.  Internally everything is 0-based.
"""

from __future__ import annotations

import enum
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Matrix = tuple[tuple[int, ...], ...]


class NotSkewSymmetrizable(ValueError):
    pass


class SignCoherenceError(RuntimeError):
    """A c-vector with entries of both signs showed up (should never happen)."""


def _as_matrix(entries: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(v) for v in row) for row in entries)


def skew_symmetrizer(entries: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Minimal positive integer d with d_i b_ij = -d_j b_ji.

    Each connected component of the support graph is normalized separately
    to coprime entries, so the overall gcd is 1 as well.
    """
    n = len(entries)
    for i in range(n):
        for j in range(n):
            bij, bji = entries[i][j], entries[j][i]
            if i == j and bij != 0:
                raise NotSkewSymmetrizable(f"nonzero diagonal entry at {i + 1}")
            if bij * bji > 0 or (bij == 0) != (bji == 0):
                raise NotSkewSymmetrizable(
                    f"entries b[{i + 1}][{j + 1}]={bij} and b[{j + 1}][{i + 1}]={bji} "
                    "admit no positive symmetrizer"
                )
    d: list[Fraction | None] = [None] * n
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = Fraction(1)
        component = [root]
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if entries[i][j] == 0:
                    continue
                # d_j = d_i |b_ij| / |b_ji|
                want = d[i] * abs(entries[i][j]) / abs(entries[j][i])
                if d[j] is None:
                    d[j] = want
                    component.append(j)
                    queue.append(j)
                elif d[j] != want:
                    raise NotSkewSymmetrizable(
                        f"inconsistent symmetrizer ratios around index {j + 1}"
                    )
        scale = lcm(*(d[i].denominator for i in component))
        ints = [int(d[i] * scale) for i in component]
        g = gcd(*ints)
        for i, v in zip(component, ints):
            d[i] = Fraction(v // g)
    return tuple(int(v) for v in d)


@dataclass(frozen=True)
class ExchangeMatrix:
    entries: Matrix
    d: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def pairing(self) -> Matrix:
        """The skew-symmetric form D*B."""
        return tuple(
            tuple(self.d[i] * self.entries[i][j] for j in range(self.n)) for i in range(self.n)
        )

    def permuted(self, perm: Sequence[int]) -> "ExchangeMatrix":
        """Relabel so that new index i is old index perm[i] (0-based)."""
        e = tuple(tuple(self.entries[a][b] for b in perm) for a in perm)
        return ExchangeMatrix(e, tuple(self.d[a] for a in perm))

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


def validate_matrix(entries: Iterable[Iterable[int]], d: Sequence[int] | None = None) -> ExchangeMatrix:
    """Check that ``entries`` is a square skew-symmetrizable integer matrix.

    If ``d`` is given it is checked instead of computed; otherwise the minimal
    symmetrizer is attached.
    """
    m = _as_matrix(entries)
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise ValueError("exchange matrix must be square and non-empty")
    if d is None:
        return ExchangeMatrix(m, skew_symmetrizer(m))
    d = tuple(int(v) for v in d)
    if len(d) != n or any(v <= 0 for v in d):
        raise NotSkewSymmetrizable("symmetrizer must be n positive integers")
    for i in range(n):
        if m[i][i] != 0:
            raise NotSkewSymmetrizable(f"nonzero diagonal entry at {i + 1}")
        for j in range(n):
            if d[i] * m[i][j] != -d[j] * m[j][i]:
                raise NotSkewSymmetrizable(f"d does not symmetrize entry ({i + 1},{j + 1})")
    return ExchangeMatrix(m, d)


def _check_index(n: int, k: int) -> int:
    if not 1 <= k <= n:
        raise IndexError(f"mutation index {k} out of range 1..{n}")
    return k - 1


def _mutate_entries(b: Matrix, k: int) -> Matrix:
    n = len(b)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == k or j == k:
                row.append(-b[i][j])
            else:
                bik, bkj = b[i][k], b[k][j]
                sgn = (bik > 0) - (bik < 0)
                row.append(b[i][j] + sgn * max(0, bik * bkj))
        out.append(tuple(row))
    return tuple(out)


def mutate_matrix(B: ExchangeMatrix, k: int) -> ExchangeMatrix:
    return ExchangeMatrix(_mutate_entries(B.entries, _check_index(B.n, k)), B.d)


def tropical_sign(c: Sequence[int]) -> int:
    pos = any(v > 0 for v in c)
    neg = any(v < 0 for v in c)
    if pos and neg:
        raise SignCoherenceError(f"c-vector {tuple(c)} is not sign-coherent")
    if not (pos or neg):
        raise SignCoherenceError("zero c-vector")
    return 1 if pos else -1


@dataclass(frozen=True)
class SeedState:
    """Exchange matrix, y-values at a positive rational point, and c-vectors.

    ``c[j]`` is the c-vector of ``y_j`` (the j-th column of the C-matrix).
    """

    B: ExchangeMatrix
    y: tuple[Fraction, ...]
    c: Matrix

    @property
    def n(self) -> int:
        return self.B.n

    @property
    def C(self) -> Matrix:
        """C-matrix with c-vectors as columns."""
        return tuple(tuple(col[i] for col in self.c) for i in range(self.n))

    def permuted(self, perm: Sequence[int]) -> "SeedState":
        return SeedState(
            self.B.permuted(perm),
            tuple(self.y[a] for a in perm),
            tuple(tuple(self.c[a][b] for b in range(self.n)) for a in perm),
        )


def initial_seed(B: ExchangeMatrix, y: Sequence[Fraction | int]) -> SeedState:
    y = tuple(Fraction(v) for v in y)
    if len(y) != B.n:
        raise ValueError("sample point has the wrong length")
    if any(v <= 0 for v in y):
        raise ValueError("sample point must be strictly positive")
    ident = tuple(tuple(int(i == j) for i in range(B.n)) for j in range(B.n))
    return SeedState(B, y, ident)


def random_sample_point(n: int, seed: int | None = 0, bits: int = 64) -> tuple[Fraction, ...]:
    rng = random.Random(seed)
    top = (1 << bits) - 1
    return tuple(Fraction(rng.randint(1, top), rng.randint(1, top)) for _ in range(n))


def mutate_seed(s: SeedState, k: int) -> SeedState:
    n = s.n
    k0 = _check_index(n, k)
    b = s.B.entries
    yk = s.y[k0]
    y = []
    for j in range(n):
        if j == k0:
            y.append(1 / yk)
            continue
        bkj = b[k0][j]
        v = s.y[j] * yk ** max(0, bkj) * (1 + yk) ** (-bkj)
        y.append(v)
    return SeedState(ExchangeMatrix(_mutate_entries(b, k0), s.B.d), tuple(y), _mutate_c(s.c, b, k0))


def _mutate_c(c: Matrix, b: Matrix, k0: int) -> Matrix:
    ck = c[k0]
    eps = tropical_sign(ck)
    out = []
    for j in range(len(c)):
        if j == k0:
            out.append(tuple(-v for v in ck))
        else:
            m = max(0, eps * b[k0][j])
            out.append(tuple(a + m * e for a, e in zip(c[j], ck)) if m else c[j])
    return tuple(out)


@dataclass(frozen=True)
class Step:
    k: int
    c: tuple[int, ...]
    eps: int
    y_before: Fraction
    y_after: Fraction


def apply_sequence(s: SeedState, seq: Iterable[int]) -> tuple[SeedState, tuple[Step, ...]]:
    """Mutate along ``seq``; record the c-vector and tropical sign of each step.

    ``y_after`` is the value of the mutated variable in the new seed, which is
    simply ``1 / y_before``.
    """
    steps = []
    for k in seq:
        k0 = _check_index(s.n, k)
        c = s.c[k0]
        eps = tropical_sign(c)
        before = s.y[k0]
        s = mutate_seed(s, k)
        steps.append(Step(k, c, eps, before, s.y[k0]))
    return s, tuple(steps)


def c_vector_trace(B: ExchangeMatrix, seq: Iterable[int]) -> tuple[Matrix, tuple[tuple[int, tuple[int, ...], int], ...]]:
    """Exchange matrix and c-vectors only, from C = identity.

    Returns the final c-vectors and one ``(k, c, eps)`` per step.  Cheap even
    where exact y-values would be enormous.
    """
    b = B.entries
    c: Matrix = tuple(tuple(int(i == j) for i in range(B.n)) for j in range(B.n))
    steps = []
    for k in seq:
        k0 = _check_index(B.n, k)
        steps.append((k, c[k0], tropical_sign(c[k0])))
        c = _mutate_c(c, b, k0)
        b = _mutate_entries(b, k0)
    return c, tuple(steps)


class Rank2Type(str, enum.Enum):
    A1xA1 = "A1xA1"
    A2 = "A2"
    B2 = "B2"
    G2 = "G2"
    INFINITE = "Infinite"

    @property
    def loop_length(self) -> int | None:
        return {"A1xA1": 4, "A2": 5, "B2": 6, "G2": 8}.get(self.value)


def rank2_class(B: ExchangeMatrix, i: int, j: int) -> Rank2Type:
    i0, j0 = _check_index(B.n, i), _check_index(B.n, j)
    if i0 == j0:
        raise ValueError("rank-2 class needs two distinct indices")
    p = abs(B.entries[i0][j0] * B.entries[j0][i0])
    return [Rank2Type.A1xA1, Rank2Type.A2, Rank2Type.B2, Rank2Type.G2][p] if p <= 3 else Rank2Type.INFINITE


def seed_to_json(s: SeedState) -> dict:
    return {
        "n": s.n,
        "B": s.B.tolist(),
        "d": list(s.B.d),
        "y_num": [str(v.numerator) for v in s.y],
        "y_den": [str(v.denominator) for v in s.y],
    }


def seed_from_json(data: dict) -> SeedState:
    """Read ``{"n", "B", "y_num", "y_den"}`` (big integers as decimal strings).

    ``d`` is optional; without it the minimal symmetrizer is computed.
    The c-vectors start from the identity, i.e. the seed is an initial seed.
    """
    B = validate_matrix(data["B"], data.get("d"))
    if "n" in data and int(data["n"]) != B.n:
        raise ValueError("n does not match the matrix size")
    if "y_num" in data:
        y = [Fraction(int(a), int(b)) for a, b in zip(data["y_num"], data["y_den"], strict=True)]
    else:
        y = random_sample_point(B.n, int(data.get("seed", 0)))
    return initial_seed(B, y)
