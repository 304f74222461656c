import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterdilog.fixtures import D4_MATRIX, D4_SWAPPED_SEQUENCE, D4_SEQUENCE, REGISTRY
from clusterdilog.mutation import (
    NotSkewSymmetrizable,
    Rank2Type,
    apply_sequence,
    c_vector_trace,
    initial_seed,
    mutate_matrix,
    mutate_seed,
    random_sample_point,
    rank2_class,
    seed_from_json,
    seed_to_json,
    skew_symmetrizer,
    tropical_sign,
    validate_matrix,
)

import props

# reference (c_t, eps_t) for the D4 loop, with c given as the non-negative eps*c
D4_REFERENCE_STEPS = [
    ((1, 0, 0, 0), 1), ((0, 1, 0, 0), 1), ((0, 0, 1, 0), 1), ((0, 0, 0, 1), 1),
    ((1, 0, 0, 0), -1), ((0, 1, 0, 0), -1), ((0, 0, 1, 0), -1), ((1, 1, 1, 1), -1),
    ((0, 1, 1, 1), -1), ((1, 0, 1, 1), -1), ((1, 1, 0, 1), -1), ((1, 1, 1, 2), -1),
    ((1, 0, 0, 1), -1), ((0, 1, 0, 1), -1), ((0, 0, 1, 1), -1), ((0, 0, 0, 1), -1),
]


def test_symmetrizer_minimal():
    assert skew_symmetrizer([[0, -2], [1, 0]]) == (1, 2)
    assert skew_symmetrizer([[0, -1], [3, 0]]) == (3, 1)
    assert skew_symmetrizer([[0, 1], [-1, 0]]) == (1, 1)
    # two components are normalized separately
    assert skew_symmetrizer([[0, 0], [0, 0]]) == (1, 1)


@pytest.mark.parametrize("bad", [
    [[0, 1], [1, 0]],
    [[1, 0], [0, 0]],
    [[0, 1], [0, 0]],
])
def test_rejects_non_symmetrizable(bad):
    with pytest.raises(NotSkewSymmetrizable):
        validate_matrix(bad)


def test_symmetrizer_on_a_chain():
    assert validate_matrix([[0, 1, 0], [-1, 0, 2], [0, -1, 0]]).d == (1, 1, 2)


def test_inconsistent_cycle_rejected():
    with pytest.raises(NotSkewSymmetrizable):
        validate_matrix([[0, 1, -1], [-2, 0, 1], [1, -1, 0]])


def test_given_d_checked():
    with pytest.raises(NotSkewSymmetrizable):
        validate_matrix([[0, -2], [1, 0]], d=(2, 1))
    assert validate_matrix([[0, -2], [1, 0]], d=(2, 4)).d == (2, 4)


def test_mutate_matrix_known():
    B = validate_matrix([[0, 1, 0], [-1, 0, 1], [0, -1, 0]])
    assert mutate_matrix(B, 2).entries == ((0, -1, 1), (1, 0, -1), (-1, 1, 0))


def test_index_errors():
    s = initial_seed(validate_matrix([[0, 1], [-1, 0]]), (1, 1))
    with pytest.raises(IndexError):
        mutate_seed(s, 3)
    with pytest.raises(IndexError):
        mutate_seed(s, 0)


def test_sample_point_must_be_positive():
    B = validate_matrix([[0, 1], [-1, 0]])
    with pytest.raises(ValueError):
        initial_seed(B, (1, 0))
    with pytest.raises(ValueError):
        initial_seed(B, (1,))


def test_tropical_sign_rejects_mixed():
    assert tropical_sign((0, 2, 1)) == 1
    assert tropical_sign((-1, 0)) == -1
    with pytest.raises(Exception):
        tropical_sign((1, -1))


def test_d4_reference_c_vectors_and_signs():
    fx = REGISTRY["d4"]
    final, steps = apply_sequence(fx.seed(7), D4_SEQUENCE)
    got = [(tuple(st.eps * v for v in st.c), st.eps) for st in steps]
    assert got == D4_REFERENCE_STEPS
    assert final == fx.seed(7)


def test_d4_variant_with_steps_six_and_seven_swapped():
    # also a loop, but the c-vectors at steps 6 and 7 trade places
    s = REGISTRY["d4"].seed(3)
    final, steps = apply_sequence(s, D4_SWAPPED_SEQUENCE)
    assert final == s
    got = [(tuple(st.eps * v for v in st.c), st.eps) for st in steps]
    assert got[5] == D4_REFERENCE_STEPS[6] and got[6] == D4_REFERENCE_STEPS[5]
    assert got[:5] == D4_REFERENCE_STEPS[:5] and got[7:] == D4_REFERENCE_STEPS[7:]


def _d4_rows(y1, y2, y3, y4):
    """Reference y-tuples Y(t) for a few t, as rational functions of the initial values."""
    P = (y1 + 1) * (y2 + 1) * (y3 + 1) * y4 + 1
    Q = (y1 + 1) * (y2 + 1) * (y3 + 1) * y4 ** 2 + (y1 + y2 + y3 + 2) * y4 + 1
    return {
        1: (1 / y1, y2, y3, (y1 + 1) * y4),
        4: (P / y1, P / y2, P / y3, 1 / ((y1 + 1) * (y2 + 1) * (y3 + 1) * y4)),
        8: (Q / (y2 * y3 * y4), Q / (y1 * y3 * y4), Q / (y1 * y2 * y4),
            y1 * y2 * y3 * y4 / (((y1 + 1) * (y2 + 1) * y4 + 1) * ((y1 + 1) * (y3 + 1) * y4 + 1)
                                 * ((y2 + 1) * (y3 + 1) * y4 + 1))),
        12: ((y4 + 1) / (y1 * y4), (y4 + 1) / (y2 * y4), (y4 + 1) / (y3 * y4),
             y1 * y2 * y3 * y4 ** 2 / (((y1 + 1) * y4 + 1) * ((y2 + 1) * y4 + 1) * ((y3 + 1) * y4 + 1))),
        15: (y1 * y4 / (y4 + 1), y2 * y4 / (y4 + 1), y3 * y4 / (y4 + 1), 1 / y4),
    }


@pytest.mark.parametrize("point", [(2, 3, 5, 7), (Fraction(1, 3), Fraction(7, 2), 11, Fraction(5, 13))])
def test_d4_y_rows(point):
    y = tuple(Fraction(v) for v in point)
    B = validate_matrix(D4_MATRIX)
    s = initial_seed(B, y)
    rows = _d4_rows(*y)
    for t in range(1, 17):
        s = mutate_seed(s, D4_SEQUENCE[t - 1])
        if t in rows:
            assert s.y == rows[t], t


def test_seed_json_round_trip():
    s = REGISTRY["b2"].seed(11)
    data = seed_to_json(s)
    assert all(isinstance(v, str) for v in data["y_num"] + data["y_den"])
    assert seed_from_json(data) == s


def test_rank2_class():
    assert rank2_class(validate_matrix([[0, 0], [0, 0]]), 1, 2) is Rank2Type.A1xA1
    assert rank2_class(validate_matrix([[0, 1], [-1, 0]]), 1, 2) is Rank2Type.A2
    assert rank2_class(validate_matrix([[0, 1], [-2, 0]]), 1, 2) is Rank2Type.B2
    assert rank2_class(validate_matrix([[0, 3], [-1, 0]]), 2, 1) is Rank2Type.G2
    assert rank2_class(validate_matrix([[0, 2], [-2, 0]]), 1, 2) is Rank2Type.INFINITE
    assert [t.loop_length for t in Rank2Type] == [4, 5, 6, 8, None]


def test_c_vector_trace_agrees_with_full_mutation():
    fx = REGISTRY["genus1"]
    c, steps = c_vector_trace(fx.B, fx.sequence)
    final, full = apply_sequence(fx.seed(), fx.sequence)
    assert c == final.c
    assert [(k, cv, e) for k, cv, e in steps] == [(st.k, st.c, st.eps) for st in full]


seeds = st.integers(min_value=0, max_value=2**32)


@given(seeds)
@settings(max_examples=100)
def test_mutation_is_involutive(seed):
    props.check_involution(random.Random(seed))


@given(seeds)
@settings(max_examples=100)
def test_sign_coherence_on_fixtures(seed):
    props.check_sign_coherence(random.Random(seed))


@given(seeds)
@settings(max_examples=200)
def test_tropical_min_plus_oracle(seed):
    props.check_tropical_oracle(random.Random(seed))


@given(st.integers(1, 4), seeds)
def test_mutation_is_equivariant_under_relabelling(n, seed):
    rng = random.Random(seed)
    B = props.random_matrix(rng, n)
    s = initial_seed(B, props.random_point(rng, n))
    perm = list(range(n))
    rng.shuffle(perm)
    k = rng.randint(1, n)
    lhs = mutate_seed(s, k).permuted(perm)
    rhs = mutate_seed(s.permuted(perm), perm.index(k - 1) + 1)
    assert lhs == rhs


def test_random_sample_point_is_deterministic():
    assert random_sample_point(3, 5) == random_sample_point(3, 5)
    assert random_sample_point(3, 5) != random_sample_point(3, 6)
    assert all(v > 0 for v in random_sample_point(5, 1))
