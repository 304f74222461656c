"""Pentagon/commutation rewriting of dilogarithm words.

Three moves act on a word (positions are 0-based):

* ``commute_swap`` at p swaps factors p, p+1 when their arguments commute;
* ``pentagon_expand`` at p replaces Psi(a) Psi(b) by Psi(b) Psi(a+b) Psi(a),
  provided both have sign +1, the same base q^k and <a, b> = -k;
* ``pentagon_contract`` at p is the inverse replacement.
"""

from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

from .identities import factor_from_json, format_factor, shorthand
from .qtorus import DilogFactor, DilogWord, Pairing, pair


class MoveKind(str, enum.Enum):
    COMMUTE = "commute_swap"
    EXPAND = "pentagon_expand"
    CONTRACT = "pentagon_contract"


class MoveNotApplicable(ValueError):
    pass


@dataclass(frozen=True)
class RewriteMove:
    kind: MoveKind
    position: int

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "position": self.position}

    @classmethod
    def from_json(cls, d: dict) -> "RewriteMove":
        return cls(MoveKind(d["kind"]), int(d["position"]))


def _add(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def _pentagon_ok(lam: Pairing, a: DilogFactor, b: DilogFactor) -> str | None:
    """None when Psi(a) Psi(b) is the left side of a pentagon, else the reason."""
    if a.sign != 1 or b.sign != 1:
        return "pentagon needs two factors with sign +1"
    if a.k != b.k:
        return f"pentagon needs equal bases (got q^{a.k}, q^{b.k})"
    p = pair(lam, a.alpha, b.alpha)
    if p != -a.k:
        return f"pentagon needs <a,b> = {-a.k}, got {p}"
    return None


def apply_move(w: DilogWord, m: RewriteMove) -> DilogWord:
    f = w.factors
    p = m.position
    if m.kind is MoveKind.COMMUTE:
        if not 0 <= p < len(f) - 1:
            raise MoveNotApplicable(f"no factor pair at position {p}")
        a, b = f[p], f[p + 1]
        v = pair(w.lam, a.alpha, b.alpha)
        if v != 0:
            raise MoveNotApplicable(
                f"{format_factor(a)} and {format_factor(b)} do not commute (<a,b> = {v})"
            )
        return w.with_factors(f[:p] + (b, a) + f[p + 2:])
    if m.kind is MoveKind.EXPAND:
        if not 0 <= p < len(f) - 1:
            raise MoveNotApplicable(f"no factor pair at position {p}")
        a, b = f[p], f[p + 1]
        reason = _pentagon_ok(w.lam, a, b)
        if reason:
            raise MoveNotApplicable(reason)
        mid = DilogFactor(_add(a.alpha, b.alpha), a.k, 1)
        return w.with_factors(f[:p] + (b, mid, a) + f[p + 2:])
    if m.kind is MoveKind.CONTRACT:
        if not 0 <= p < len(f) - 2:
            raise MoveNotApplicable(f"no factor triple at position {p}")
        b, mid, a = f[p], f[p + 1], f[p + 2]
        reason = _pentagon_ok(w.lam, a, b)
        if reason:
            raise MoveNotApplicable(reason)
        if mid != DilogFactor(_add(a.alpha, b.alpha), a.k, 1):
            raise MoveNotApplicable(
                f"middle factor {format_factor(mid)} is not the sum of its neighbours"
            )
        return w.with_factors(f[:p] + (a, b) + f[p + 3:])
    raise MoveNotApplicable(f"unknown move {m.kind}")


@dataclass
class RewriteTrace:
    words: list[DilogWord]
    moves: list[RewriteMove] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.moves)

    @property
    def start(self) -> DilogWord:
        return self.words[0]

    @property
    def end(self) -> DilogWord:
        return self.words[-1]

    def pentagon_count(self) -> int:
        return sum(m.kind is not MoveKind.COMMUTE for m in self.moves)


@dataclass(frozen=True)
class TraceCheck:
    ok: bool
    step: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_trace(tr: RewriteTrace) -> TraceCheck:
    if not tr.words:
        return TraceCheck(False, 0, "empty trace")
    if len(tr.words) != len(tr.moves) + 1:
        return TraceCheck(False, None, f"{len(tr.words)} words but {len(tr.moves)} moves")
    lam = tr.words[0].lam
    for t, m in enumerate(tr.moves):
        w, nxt = tr.words[t], tr.words[t + 1]
        if nxt.lam != lam:
            return TraceCheck(False, t, "pairing changes along the trace")
        try:
            got = apply_move(w, m)
        except MoveNotApplicable as e:
            return TraceCheck(False, t, f"{m.kind.value} at {m.position}: {e}")
        if got != nxt:
            return TraceCheck(False, t, f"{m.kind.value} at {m.position} does not produce the next word")
    return TraceCheck(True)


# -- trace files -------------------------------------------------------------


def _factor_to_json(f: DilogFactor, n: int):
    if f.k == 1 and f.sign == 1 and n <= 9 and all(v >= 0 for v in f.alpha):
        return shorthand(f.alpha)
    return {"alpha": list(f.alpha), "k": f.k, "sign": f.sign}


def dump_trace(tr: RewriteTrace, fp: IO[str]) -> None:
    """JSON lines: a header with the pairing, then one word per line.

    Each word line carries the move that produced it from the previous line
    (``null`` on the first word line).
    """
    lam = tr.words[0].lam
    n = len(lam)
    fp.write(json.dumps({"n": n, "Lambda": [list(r) for r in lam]}) + "\n")
    for t, w in enumerate(tr.words):
        move = tr.moves[t - 1].to_json() if t else None
        fp.write(json.dumps({"word": [_factor_to_json(f, n) for f in w.factors], "move": move}) + "\n")


def load_trace(fp: IO[str] | Iterable[str]) -> RewriteTrace:
    lines = [json.loads(line) for line in fp if line.strip()]
    header, rows = lines[0], lines[1:]
    lam = tuple(tuple(r) for r in header["Lambda"])
    n = len(lam)
    words, moves = [], []
    for t, row in enumerate(rows):
        words.append(DilogWord(lam, tuple(factor_from_json(x, n) for x in row["word"])))
        if t:
            if row.get("move") is None:
                raise ValueError(f"word line {t} has no move")
            moves.append(RewriteMove.from_json(row["move"]))
    return RewriteTrace(words, moves)


# -- search ------------------------------------------------------------------
#
# The search runs on commutation classes: words are identified when they differ
# by commute swaps, and each state is stored as its lexicographically smallest
# representative.  An edge is one pentagon move applied to any representative.


def _key(f: DilogFactor):
    return (f.alpha, f.k, f.sign)


def _depends(lam: Pairing, a: DilogFactor, b: DilogFactor) -> bool:
    return pair(lam, a.alpha, b.alpha) != 0


def canonical_form(lam: Pairing, factors: Sequence[DilogFactor]) -> tuple[DilogFactor, ...]:
    """Lexicographically smallest word reachable by commute swaps."""
    n = len(factors)
    preds = [0] * n
    for j in range(n):
        for i in range(j):
            if _depends(lam, factors[i], factors[j]):
                preds[j] |= 1 << i
    done = 0
    out = []
    remaining = list(range(n))
    while remaining:
        best = None
        for idx in remaining:
            if preds[idx] & ~done == 0 and (best is None or _key(factors[idx]) < _key(factors[best])):
                best = idx
        out.append(factors[best])
        done |= 1 << best
        remaining.remove(best)
    return tuple(out)


def _reach(lam: Pairing, factors: Sequence[DilogFactor]) -> list[int]:
    """reach[i]: bitmask of later positions that must stay after position i."""
    n = len(factors)
    reach = [0] * n
    for i in range(n - 1, -1, -1):
        r = 0
        for j in range(i + 1, n):
            if _depends(lam, factors[i], factors[j]):
                r |= (1 << j) | reach[j]
        reach[i] = r
    return reach


def _consecutive_order(reach: list[int], block: Sequence[int], n: int) -> list[int] | None:
    """A commutation-equivalent ordering of range(n) with ``block`` contiguous.

    ``block`` is increasing.  Returns None if some position outside the block
    is forced between two block members.
    """
    bset = 0
    for b in block:
        bset |= 1 << b
    lo, hi = block[0], block[-1]
    for m in range(lo + 1, hi):
        if bset >> m & 1:
            continue
        if any(reach[b] >> m & 1 for b in block if b < m) and any(reach[m] >> b & 1 for b in block if b > m):
            return None
    # everything that must precede some block member goes first
    before = [m for m in range(hi) if not bset >> m & 1 and (m < lo or any(reach[m] >> b & 1 for b in block))]
    bef = set(before)
    rest = [m for m in range(n) if not bset >> m & 1 and m not in bef]
    return before + list(block) + rest


def _macros(lam: Pairing, factors: Sequence[DilogFactor]):
    """Yield (order, start, kind) for every pentagon move available up to commutation.

    ``order`` is the reordering that makes the affected factors contiguous,
    starting at index ``start`` of the reordered word.
    """
    n = len(factors)
    reach = _reach(lam, factors)
    for i in range(n):
        for j in range(i + 1, n):
            if _pentagon_ok(lam, factors[i], factors[j]) is None:
                order = _consecutive_order(reach, (i, j), n)
                if order is not None:
                    yield order, order.index(i), MoveKind.EXPAND
    for i in range(n):
        for l in range(i + 2, n):
            b, a = factors[i], factors[l]
            if _pentagon_ok(lam, a, b) is not None:
                continue
            target = DilogFactor(_add(a.alpha, b.alpha), a.k, 1)
            for j in range(i + 1, l):
                if factors[j] == target:
                    order = _consecutive_order(reach, (i, j, l), n)
                    if order is not None:
                        yield order, order.index(i), MoveKind.CONTRACT


def _apply_macro(lam, factors, order, start, kind) -> tuple[DilogFactor, ...]:
    w = DilogWord(lam, tuple(factors[i] for i in order))
    return apply_move(w, RewriteMove(kind, start)).factors


def _swaps_to(lam: Pairing, current: list[DilogFactor], target_order: Sequence[int]):
    """Adjacent swaps turning ``current`` into ``[current[i] for i in target_order]``.

    Yields (position, word_after_swap).
    """
    pos = list(range(len(current)))  # pos[slot] = original index occupying slot
    cur = list(current)
    for t, orig in enumerate(target_order):
        p = pos.index(orig)
        while p > t:
            cur[p - 1], cur[p] = cur[p], cur[p - 1]
            pos[p - 1], pos[p] = pos[p], pos[p - 1]
            p -= 1
            yield p, tuple(cur)


class SearchLimit(RuntimeError):
    pass


def search_rewrite(lhs: DilogWord, rhs: DilogWord, max_steps: int = 60,
                   max_frontier: int = 200_000) -> RewriteTrace | None:
    """Bidirectional BFS for a pentagon/commutation derivation of lhs -> rhs.

    Returns a trace of single moves (commute swaps included) or None when the
    bounds are exhausted.  None is not a proof that no derivation exists.
    """
    if lhs.lam != rhs.lam:
        raise ValueError("both sides must share one pairing")
    lam = lhs.lam
    start = canonical_form(lam, lhs.factors)
    goal = canonical_form(lam, rhs.factors)
    parents = [{start: None}, {goal: None}]
    frontiers = [[start], [goal]]
    meet = start if start == goal else None
    depth = 0
    while meet is None and depth < max_steps and frontiers[0] and frontiers[1]:
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        nxt = []
        seen, other = parents[side], parents[1 - side]
        for state in sorted(frontiers[side], key=lambda s: [_key(f) for f in s]):
            for order, st, kind in _macros(lam, state):
                new = canonical_form(lam, _apply_macro(lam, state, order, st, kind))
                if new in seen:
                    continue
                seen[new] = state
                if new in other:
                    meet = new
                    break
                nxt.append(new)
                if len(seen) > max_frontier:
                    raise SearchLimit(f"more than {max_frontier} states visited")
            if meet is not None:
                break
        frontiers[side] = nxt
        depth += 1
    if meet is None:
        return None
    path = []
    s = meet
    while s is not None:
        path.append(s)
        s = parents[0][s]
    path.reverse()
    s = parents[1][meet]
    while s is not None:
        path.append(s)
        s = parents[1][s]
    trace = _realize(lam, lhs, rhs, path)
    if len(trace) > max_steps:
        return None
    return trace


def _realize(lam: Pairing, lhs: DilogWord, rhs: DilogWord, path) -> RewriteTrace:
    """Turn a path of commutation classes into explicit single moves."""
    words = [lhs]
    moves: list[RewriteMove] = []
    cur = list(lhs.factors)

    def emit_reorder(order):
        nonlocal cur
        for p, w in _swaps_to(lam, cur, order):
            moves.append(RewriteMove(MoveKind.COMMUTE, p))
            words.append(DilogWord(lam, w))
        cur = [cur[i] for i in order]

    for target in path[1:]:
        for order, st, kind in _macros(lam, cur):
            new = _apply_macro(lam, cur, order, st, kind)
            if canonical_form(lam, new) == target:
                break
        else:  # pragma: no cover - path states come from the same macro set
            raise RuntimeError("could not realize search path")
        emit_reorder(order)
        m = RewriteMove(kind, st)
        w = apply_move(DilogWord(lam, tuple(cur)), m)
        moves.append(m)
        words.append(w)
        cur = list(w.factors)
    # final alignment with rhs, matching equal factors in order
    used: dict[DilogFactor, list[int]] = {}
    for i, f in enumerate(cur):
        used.setdefault(f, []).append(i)
    order = [used[f].pop(0) for f in rhs.factors]
    emit_reorder(order)
    return RewriteTrace(words, moves)
