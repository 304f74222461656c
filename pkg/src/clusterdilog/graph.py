"""Exchange-graph exploration, seed keys, and loop verification."""

from __future__ import annotations

import enum
import hashlib
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

from .mutation import (
    ExchangeMatrix,
    Rank2Type,
    SeedState,
    Step,
    apply_sequence,
    initial_seed,
    mutate_seed,
    random_sample_point,
    rank2_class,
)

Mode = Literal["labeled", "unlabeled"]


class ResourceLimit(RuntimeError):
    pass


def _encode(y: Sequence[Fraction], d: Sequence[int], b: Sequence[Sequence[int]]) -> bytes:
    parts = ["y:" + ",".join(f"{v.numerator}/{v.denominator}" for v in y),
             "d:" + ",".join(map(str, d)),
             "B:" + ";".join(",".join(map(str, row)) for row in b)]
    return "|".join(parts).encode()


def canonical_permutation(s: SeedState) -> tuple[int, ...]:
    """0-based relabelling giving the lexicographically smallest (y, d, rows, B).

    Indices are first split into cells by the permutation-invariant data
    (y value, d, sorted row of B); only ties inside a cell are searched.
    """
    n = s.n
    b = s.B.entries
    sig = [(s.y[i], s.B.d[i], tuple(sorted(b[i]))) for i in range(n)]
    order = sorted(range(n), key=lambda i: sig[i])
    cells = [list(g) for _, g in itertools.groupby(order, key=lambda i: sig[i])]
    if all(len(c) == 1 for c in cells):
        return tuple(order)
    best, best_perm = None, None
    for choice in itertools.product(*(itertools.permutations(c) for c in cells)):
        perm = [i for cell in choice for i in cell]
        enc = tuple(b[perm[i]][perm[j]] for i in range(n) for j in range(n))
        if best is None or enc < best:
            best, best_perm = enc, perm
    return tuple(best_perm)


def canonical_key(s: SeedState, mode: Mode = "unlabeled") -> bytes:
    if mode == "labeled":
        t = s
    elif mode == "unlabeled":
        t = s.permuted(canonical_permutation(s))
    else:
        raise ValueError(f"unknown key mode {mode!r}")
    return hashlib.blake2b(_encode(t.y, t.B.d, t.B.entries), digest_size=20).digest()


class Closure(str, enum.Enum):
    STRICT = "strict"
    PERMUTATION = "up_to_permutation"
    OPEN = "open"


@dataclass(frozen=True)
class LoopReport:
    closed: Closure
    length: int
    permutation: tuple[int, ...] | None = None
    trace: tuple[Step, ...] = ()

    @property
    def is_loop(self) -> bool:
        return self.closed is not Closure.OPEN

    def to_json(self) -> dict:
        return {
            "closed": self.closed.value,
            "length": self.length,
            "permutation": list(self.permutation) if self.permutation else None,
            "trace": [
                {"k": st.k, "c": list(st.c), "eps": st.eps} for st in self.trace
            ],
        }


def match_seeds(final: SeedState, initial: SeedState) -> tuple[Closure, tuple[int, ...] | None]:
    """How ``final`` relates to ``initial``.

    The permutation p (1-based) says initial variable i sits at position p[i]
    of the final seed.
    """
    if final.y == initial.y and final.B == initial.B:
        return Closure.STRICT, tuple(range(1, initial.n + 1))
    if sorted(final.y) != sorted(initial.y):
        return Closure.OPEN, None
    candidates = [[j for j in range(final.n) if final.y[j] == v] for v in initial.y]
    for choice in itertools.product(*candidates):
        if len(set(choice)) != len(choice):
            continue
        if final.B.permuted(choice) == initial.B:
            return Closure.PERMUTATION, tuple(j + 1 for j in choice)
    return Closure.OPEN, None


def verify_loop(B: ExchangeMatrix, y0: Sequence[Fraction] | None, seq: Sequence[int],
                recheck_seed: int | None = 1_000_003) -> LoopReport:
    """Classify ``seq`` as a strict loop, a loop up to relabelling, or open.

    A closure found at ``y0`` is re-checked at a second random sample point
    (skipped when ``recheck_seed`` is None); any disagreement means open.
    """
    seq = list(seq)
    if y0 is None:
        y0 = random_sample_point(B.n, 0)
    s0 = initial_seed(B, y0)
    final, trace = apply_sequence(s0, seq)
    closed, perm = match_seeds(final, s0)
    if closed is not Closure.OPEN and recheck_seed is not None:
        s1 = initial_seed(B, random_sample_point(B.n, recheck_seed))
        f1, _ = apply_sequence(s1, seq)
        if match_seeds(f1, s1) != (closed, perm):
            closed, perm = Closure.OPEN, None
    if closed is Closure.STRICT:
        perm = None
    return LoopReport(closed, len(seq), perm, trace)


@dataclass
class GraphSlice:
    vertices: dict[bytes, SeedState] = field(default_factory=dict)
    depth: dict[bytes, int] = field(default_factory=dict)
    edges: list[tuple[bytes, bytes, int]] = field(default_factory=list)
    truncated: bool = False
    mode: Mode = "unlabeled"

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "truncated": self.truncated,
            "vertices": [{"key": k.hex(), "depth": self.depth[k]} for k in sorted(self.vertices)],
            "edges": [[u.hex(), v.hex(), k] for u, v, k in self.edges],
        }


def explore(s: SeedState, max_depth: int = 8, max_vertices: int = 10**6,
            mode: Mode = "unlabeled") -> GraphSlice:
    """Breadth-first ball of radius ``max_depth`` around ``s``.

    Edges are reported from the representative state stored for each vertex;
    in unlabeled mode the index on the way back may differ from the index on
    the way out.  ``truncated`` is set when the depth bound leaves neighbours
    undiscovered.  Exceeding ``max_vertices`` raises :class:`ResourceLimit`.
    """
    if max_depth < 0 or max_vertices < 1:
        raise ValueError("bounds must be positive")
    g = GraphSlice(mode=mode)
    root = canonical_key(s, mode)
    g.vertices[root] = s
    g.depth[root] = 0
    frontier = [root]
    edges: set[tuple[bytes, bytes, int]] = set()
    for level in range(max_depth + 1):
        nxt: list[bytes] = []
        for u in sorted(frontier):
            rep = g.vertices[u]
            for k in range(1, s.n + 1):
                t = mutate_seed(rep, k)
                v = canonical_key(t, mode)
                if v not in g.vertices:
                    if level == max_depth:
                        g.truncated = True
                        continue
                    if len(g.vertices) >= max_vertices:
                        raise ResourceLimit(f"more than {max_vertices} vertices")
                    g.vertices[v] = t
                    g.depth[v] = level + 1
                    nxt.append(v)
                edges.add((u, v, k))
        frontier = nxt
        if not frontier:
            break
    g.edges = sorted(edges)
    return g


def export_dot(g: GraphSlice, name: str = "exchange") -> str:
    lines = [f"digraph {name} {{"]
    for k in sorted(g.vertices):
        lines.append(f'  "{k.hex()[:10]}" [label="{k.hex()[:6]}"];')
    seen = set()
    for u, v, k in g.edges:
        pair_ = (min(u, v), max(u, v))
        if pair_ in seen:
            continue
        seen.add(pair_)
        lines.append(f'  "{u.hex()[:10]}" -> "{v.hex()[:10]}" [label="{k}", dir=none];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def rank2_loops(s: SeedState, bound: int = 24) -> list[tuple[int, int, LoopReport]]:
    """Alternate mutations i, j, i, ... for every pair until the seed recurs.

    Pairs whose rank-2 type is infinite are still run up to ``bound`` and come
    back as open loops.
    """
    start = canonical_key(s, "unlabeled")
    out = []
    for i, j in itertools.combinations(range(1, s.n + 1), 2):
        cur = s
        steps: list[Step] = []
        report = None
        for t in range(1, bound + 1):
            k = i if t % 2 else j
            cur, st = apply_sequence(cur, [k])
            steps.append(st[0])
            if canonical_key(cur, "unlabeled") == start:
                closed, perm = match_seeds(cur, s)
                if closed is not Closure.OPEN:
                    report = LoopReport(closed, t, None if closed is Closure.STRICT else perm, tuple(steps))
                    break
        if report is None:
            report = LoopReport(Closure.OPEN, bound, None, tuple(steps))
        out.append((i, j, report))
    return out


def rank2_summary(s: SeedState, bound: int = 24) -> list[tuple[int, int, Rank2Type, LoopReport]]:
    return [(i, j, rank2_class(s.B, i, j), r) for i, j, r in rank2_loops(s, bound)]
