"""Named seeds, their canonical loops, and the identity and trace files shipped with them."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Sequence

from .graph import Closure
from .identities import identity_from_json, identity_from_loop, split_identity
from .mutation import ExchangeMatrix, SeedState, apply_sequence, initial_seed, random_sample_point, validate_matrix
from .qtorus import DilogWord
from .rewrite import RewriteTrace, load_trace

D4_MATRIX = ((0, 0, 0, -1), (0, 0, 0, -1), (0, 0, 0, -1), (1, 1, 1, 0))
# steps 6 and 7 swapped relative to D4_SEQUENCE; closes too, with those two c-vectors exchanged
D4_SWAPPED_SEQUENCE = (1, 2, 3, 4, 1, 3, 2, 4, 1, 2, 3, 4, 1, 2, 3, 4)
D4_SEQUENCE = (1, 2, 3, 4) * 4

GENUS1_MATRIX = (
    (0, 0, -1, 1, -1, 1),
    (0, 0, 1, -1, 1, -1),
    (1, -1, 0, 1, 0, -1),
    (-1, 1, -1, 0, 1, 0),
    (1, -1, 0, -1, 0, 1),
    (-1, 1, 1, 0, -1, 0),
)
GENUS1_SEQUENCE = (
    5, 6, 4, 3, 6, 5, 1, 2, 4, 3, 6, 5, 3, 4, 2, 1,
    6, 5, 3, 4, 5, 6, 1, 2, 3, 4, 5, 6, 4, 3, 2, 1,
)


@dataclass(frozen=True)
class Fixture:
    name: str
    B: ExchangeMatrix
    sequence: tuple[int, ...] | None = None
    closure: Closure | None = None  # how the stored sequence closes, when known
    identity_file: str | None = None
    trace_file: str | None = None
    description: str = ""

    @property
    def n(self) -> int:
        return self.B.n

    def seed(self, seed: int | None = 0, y: Sequence[Fraction] | None = None) -> SeedState:
        return initial_seed(self.B, y if y is not None else random_sample_point(self.n, seed))

    def loop_word(self, seed: int | None = 0) -> DilogWord:
        if self.sequence is None:
            raise ValueError(f"fixture {self.name!r} has no loop sequence")
        _, steps = apply_sequence(self.seed(seed), self.sequence)
        return identity_from_loop(steps, self.B)

    def identity(self) -> tuple[DilogWord, DilogWord]:
        """Shipped identity if there is one, otherwise the split loop word."""
        if self.identity_file is not None:
            return identity_from_json(_load_json(self.identity_file))
        return split_identity(self.loop_word())

    def trace(self) -> RewriteTrace:
        if self.trace_file is None:
            raise ValueError(f"fixture {self.name!r} has no rewrite trace")
        with _data(self.trace_file).open() as fp:
            return load_trace(fp)


def _data(name: str):
    node = resources.files(__package__).joinpath("data")
    for part in name.split("/"):
        node = node.joinpath(part)
    return node


def _load_json(name: str) -> dict:
    return json.loads(_data(name).read_text())


def akan_matrix(k: int, n: int) -> ExchangeMatrix:
    """Square product of an A_k and an A_n path on a k x n grid.

    Vertex (r, c) gets label r*n + c + 1.  With colour (r + c) mod 2,
    horizontal arrows run from colour 0 to colour 1 and vertical arrows from
    colour 1 to colour 0, so every unit square is an oriented 4-cycle.
    """
    if k < 1 or n < 1:
        raise ValueError("akan needs k, n >= 1")
    size = k * n
    b = [[0] * size for _ in range(size)]

    def arrow(src: int, dst: int) -> None:
        b[src][dst] += 1
        b[dst][src] -= 1

    for r in range(k):
        for c in range(n):
            v = r * n + c
            even = (r + c) % 2 == 0
            if c + 1 < n:
                w = v + 1
                arrow(v, w) if even else arrow(w, v)
            if r + 1 < k:
                w = v + n
                arrow(w, v) if even else arrow(v, w)
    return validate_matrix(b)


def akan_sequence(k: int, n: int, half_steps: int | None = None) -> tuple[int, ...]:
    """Bipartite sequence: all colour-0 vertices, then all colour-1 vertices, and so on.

    The default number of half steps is (k + 1) + (n + 1), the sum of the two
    Coxeter numbers.
    """
    if half_steps is None:
        half_steps = k + n + 2
    colours = ([], [])
    for r in range(k):
        for c in range(n):
            colours[(r + c) % 2].append(r * n + c + 1)
    out: list[int] = []
    for t in range(half_steps):
        out.extend(colours[t % 2])
    return tuple(out)


def akan(k: int, n: int) -> Fixture:
    return Fixture(
        f"akan({k},{n})",
        akan_matrix(k, n),
        akan_sequence(k, n),
        description=f"(A{k},A{n}) square-product quiver with its bipartite sequence",
    )


def _rank2(name: str, entries, d, seq_len: int) -> Fixture:
    return Fixture(
        name,
        validate_matrix(entries, d),
        (1, 2) * (seq_len // 2),
        Closure.STRICT,
        identity_file=f"rank2/{name}.json",
        description=f"rank-2 seed of type {name.upper()}",
    )


def _builtin() -> dict[str, Fixture]:
    a3a3 = akan(3, 3)
    fx = [
        Fixture("d4", validate_matrix(D4_MATRIX), D4_SEQUENCE, Closure.STRICT,
                identity_file="d4_identity.json", description="D4 star quiver 1,2,3 <- 4"),
        Fixture("genus1", validate_matrix(GENUS1_MATRIX), GENUS1_SEQUENCE, Closure.STRICT,
                description="once-punctured torus with two boundary marked points"),
        Fixture("a3a3", a3a3.B, a3a3.sequence, Closure.PERMUTATION,
                identity_file="a3a3_identity.json", trace_file="a3a3_trace.jsonl",
                description="(A3,A3) quiver; 36 bipartite steps close up to the flip i -> 10 - i"),
        _rank2("a1a1", ((0, 0), (0, 0)), (1, 1), 4),
        _rank2("a2", ((0, -1), (1, 0)), (1, 1), 10),
        _rank2("b2", ((0, -2), (1, 0)), (1, 2), 6),
        _rank2("g2", ((0, -1), (3, 0)), (3, 1), 8),
    ]
    return {f.name: f for f in fx}


_ALIASES = {"pentagon": "a2", "a1a1-loop": "a1a1", "a2-loop": "a2"}
_AKAN = re.compile(r"akan[(\-_ ]?(\d+)[,\-_ x](\d+)\)?")


class FixtureRegistry:
    """Lookup by name; ``akan(k,n)`` (or ``akan-k-n``) builds the generated family."""

    def __init__(self) -> None:
        self._fixtures = _builtin()

    def names(self) -> list[str]:
        return list(self._fixtures)

    def aliases(self) -> dict[str, str]:
        return dict(_ALIASES)

    def __contains__(self, name: str) -> bool:
        try:
            self[name]
        except KeyError:
            return False
        return True

    def __getitem__(self, name: str) -> Fixture:
        key = name.strip().lower()
        key = _ALIASES.get(key, key)
        if key in self._fixtures:
            return self._fixtures[key]
        m = _AKAN.fullmatch(key)
        if m:
            return akan(int(m.group(1)), int(m.group(2)))
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(self.names())}")

    def __iter__(self):
        return iter(self._fixtures.values())


REGISTRY = FixtureRegistry()
