"""Acceptance run: one PASS/FAIL line per criterion, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import time

import numpy as np
import sympy

from acceptance_log import record
from clusterdilog.fixtures import REGISTRY, akan, akan_sequence
from clusterdilog.graph import Closure, rank2_loops, verify_loop
from clusterdilog.mutation import Rank2Type, apply_sequence, random_sample_point
from clusterdilog.qtorus import DilogFactor, DilogWord, folding_check, verify_identity
from clusterdilog.rewrite import check_trace, search_rewrite
from clusterdilog.rogers import PI2_6, five_term_check, li2, loop_sum_check, rogers_L

import props
from test_graph import _symbolic_y_system
from test_mutation import D4_REFERENCE_STEPS


def _check(number: int, title: str, ok: bool, detail: str = "") -> None:
    record(number, title, ok, detail)
    assert ok, detail


def test_criterion_01_d4_reference_trace():
    fx = REGISTRY["d4"]
    t0 = time.perf_counter()
    s0 = fx.seed(0)
    final, steps = apply_sequence(s0, fx.sequence)
    dt = time.perf_counter() - t0
    pairs = [(tuple(st.eps * v for v in st.c), st.eps) for st in steps]
    ok = pairs == D4_REFERENCE_STEPS and final == s0 and dt < 1.0
    _check(1, "D4 (c_t, eps_t) pairs and Y(16) = Y(0)", ok, f"{len(pairs)} pairs, {dt:.3f}s")


def test_criterion_02_genus1_loop():
    fx = REGISTRY["genus1"]
    t0 = time.perf_counter()
    reps = [verify_loop(fx.B, random_sample_point(fx.n, seed), fx.sequence, recheck_seed=None)
            for seed in (101, 202)]
    dt = time.perf_counter() - t0
    ok = all(r.closed is Closure.STRICT and r.length == 32 for r in reps) and dt < 1.0
    _check(2, "genus-1 32-step loop strict at two sample points", ok, f"{dt:.3f}s")


def test_criterion_03_akan_loops():
    fx = REGISTRY["a3a3"]
    t0 = time.perf_counter()
    rep = verify_loop(fx.B, None, fx.sequence)
    dt = time.perf_counter() - t0
    a3a3_ok = rep.closed is Closure.STRICT and rep.length == 36 and dt < 1.0

    # (A2,A2): the engine's strict period must agree with a symbolic y-system run
    a2a2 = akan(2, 2)
    engine_len = next(t for t in range(1, 60)
                      if verify_loop(a2a2.B, None, akan_sequence(2, 2, 2 * 60)[:t], recheck_seed=None).closed
                      is Closure.STRICT)
    ys, history, b = _symbolic_y_system(a2a2.B.tolist(), akan_sequence(2, 2, 2 * 60)[:engine_len])
    a2a2_ok = b == a2a2.B.tolist() and all(sympy.simplify(u - v) == 0 for u, v in zip(history[-1], ys))

    detail = (f"(A3,A3) 36 steps: {rep.closed.value}"
              + (f" with permutation {list(rep.permutation)}" if rep.permutation else "")
              + f", {dt:.3f}s; (A2,A2) strict period {engine_len}, symbolic oracle "
              + ("agrees" if a2a2_ok else "disagrees"))
    _check(3, "(A3,A3) 36-step sequence strict; (A2,A2) engine-determined period", a3a3_ok and a2a2_ok, detail)


def test_criterion_04_rank2_lengths():
    got = {}
    for name, kind in [("a1a1", Rank2Type.A1xA1), ("a2", Rank2Type.A2), ("b2", Rank2Type.B2), ("g2", Rank2Type.G2)]:
        [(_, _, rep)] = rank2_loops(REGISTRY[name].seed())
        got[kind.value] = rep.length
    ok = got == {"A1xA1": 4, "A2": 5, "B2": 6, "G2": 8}
    _check(4, "rank-2 loop lengths 4/5/6/8", ok, str(got))


def _mutants(lhs: DilogWord, rhs: DilogWord, window: int):
    """Single-factor mutations that change the identity below degree ``window + 1``.

    Each mutant drops one factor, inverts it, raises its base, or moves its
    exponent by one unit vector.  A change that only touches factors of total
    degree above ``window`` is invisible to a degree-``window`` truncation, so
    such mutants are not generated.
    """
    n = lhs.n
    for side, word in (("lhs", lhs), ("rhs", rhs)):
        for i, f in enumerate(word.factors):
            size = sum(f.alpha)
            options = []
            if size <= window:
                options += [None, DilogFactor(f.alpha, f.k, -f.sign), DilogFactor(f.alpha, f.k + 1, f.sign)]
            for j in range(n):
                for step in (1, -1):
                    alpha = list(f.alpha)
                    alpha[j] += step
                    if min(alpha) < 0 or not any(alpha) or min(size, sum(alpha)) > window:
                        continue
                    options.append(DilogFactor(tuple(alpha), f.k, f.sign))
            for new in options:
                fs = list(word.factors)
                if new is None:
                    del fs[i]
                else:
                    fs[i] = new
                mutated = word.with_factors(fs)
                yield (mutated, rhs) if side == "lhs" else (lhs, mutated)


def test_criterion_05_quantum_identity_suite():
    t0 = time.perf_counter()
    identities = {name: REGISTRY[name].identity() for name in ("pentagon", "b2", "g2", "d4")}
    verified = {name: verify_identity(l, r, 8).verified for name, (l, r) in identities.items()}
    for k in (2, 3):
        verified[f"fold{k}"] = folding_check(k, 8).verified
    dt = time.perf_counter() - t0

    unrefuted, total = [], 0
    for name, (l, r) in identities.items():
        for ml, mr in _mutants(l, r, 4):
            total += 1
            if verify_identity(ml, mr, 4).verified:
                unrefuted.append(name)
    ok = all(verified.values()) and dt < 30 and not unrefuted
    detail = f"{verified}, {dt:.1f}s; {total - len(unrefuted)}/{total} mutants refuted at degree 4"
    _check(5, "quantum identity suite at D=8 and mutant refutation", ok, detail)


def test_criterion_06_a3a3_identity():
    lhs, rhs = REGISTRY["a3a3"].identity()
    t0 = time.perf_counter()
    v = verify_identity(lhs, rhs, 4)
    dt = time.perf_counter() - t0
    _check(6, "(A3,A3) 36-factor identity at D=4", v.verified and dt < 600, f"{dt:.2f}s")


def test_criterion_07_a3a3_trace():
    fx = REGISTRY["a3a3"]
    tr = fx.trace()
    lhs, rhs = fx.identity()
    res = check_trace(tr)
    ok = res.ok and tr.start == lhs and tr.end == rhs
    _check(7, "(A3,A3) rewrite trace checks, endpoints are the two sides", ok,
           f"{len(tr)} moves, {tr.pentagon_count()} pentagon moves")


def test_criterion_08_d4_search():
    lhs, rhs = REGISTRY["d4"].identity()
    t0 = time.perf_counter()
    tr = search_rewrite(lhs, rhs, max_steps=60)
    dt = time.perf_counter() - t0
    ok = tr is not None and check_trace(tr).ok and tr.start == lhs and tr.end == rhs
    detail = f"{len(tr)} moves, {tr.pentagon_count()} pentagon moves, {dt:.2f}s" if tr else "not found"
    _check(8, "D4 identity derived from pentagon and commutation moves", ok, detail)


def test_criterion_09_classical_identities():
    worst_loop = 0.0
    for name in ("d4", "a2", "genus1"):
        fx = REGISTRY[name]
        for seed in range(20):
            worst_loop = max(worst_loop, abs(loop_sum_check(fx.B, random_sample_point(fx.n, seed), fx.sequence)))
    rng = random.Random(9)
    worst_five = max(abs(five_term_check(rng.uniform(1e-9, 1 - 1e-9), rng.uniform(1e-9, 1 - 1e-9)))
                     for _ in range(100))
    grid = np.linspace(0.0, 1.0, 1000)
    worst_refl = max(abs(rogers_L(float(x)) + rogers_L(1 - float(x)) - PI2_6) for x in grid)
    inv_grid = np.geomspace(1e-3, 1e3, 1000)
    worst_inv = max(abs(li2(-x) + li2(-1 / x) + PI2_6 + 0.5 * np.log(x) ** 2) / (1 + np.log(x) ** 2)
                    for x in map(float, inv_grid))
    ok = worst_loop <= 1e-9 and worst_five <= 1e-10 and max(worst_refl, worst_inv) <= 1e-11
    detail = (f"loop {worst_loop:.1e}, five-term {worst_five:.1e}, "
              f"L(x)+L(1-x) {worst_refl:.1e}, Li2 inversion {worst_inv:.1e}")
    _check(9, "classical loop sums, five-term and inversion relations", ok, detail)


def test_criterion_10_property_suite():
    failures = []
    for name, check in props.PROPERTIES.items():
        rng = random.Random(20240601)
        for i in range(100):
            try:
                check(rng)
            except AssertionError as e:
                failures.append(f"{name}#{i}: {e}")
                break
    _check(10, "randomized property suite (5 properties x 100 cases)", not failures,
           "; ".join(failures) or "all passed")


if __name__ == "__main__":
    import sys

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
