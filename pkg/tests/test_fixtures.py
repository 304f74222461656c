import pytest

from clusterdilog.fixtures import REGISTRY, akan
from clusterdilog.graph import Closure, verify_loop
from clusterdilog.rewrite import check_trace


@pytest.mark.parametrize("fx", list(REGISTRY), ids=lambda f: f.name)
def test_stored_sequences_close_as_recorded(fx):
    rep = verify_loop(fx.B, None, fx.sequence)
    assert rep.closed is fx.closure


def test_strict_fixtures():
    strict = {fx.name for fx in REGISTRY if fx.closure is Closure.STRICT}
    assert strict == {"d4", "genus1", "a1a1", "a2", "b2", "g2"}


def test_a3a3_closes_up_to_the_flip():
    fx = REGISTRY["a3a3"]
    rep = verify_loop(fx.B, None, fx.sequence)
    assert rep.permutation == tuple(range(9, 0, -1))
    # the flip i -> 10 - i is a symmetry of the quiver
    assert fx.B.permuted(list(range(8, -1, -1))) == fx.B
    assert verify_loop(fx.B, None, fx.sequence * 2).closed is Closure.STRICT


def test_aliases_and_generated_names():
    assert REGISTRY["pentagon"] is REGISTRY["a2"]
    assert REGISTRY["a1a1-loop"] is REGISTRY["a1a1"]
    assert REGISTRY["akan(2,3)"].B == akan(2, 3).B
    assert REGISTRY["akan-2-3"].B == akan(2, 3).B
    assert "akan(3,3)" in REGISTRY and "nope" not in REGISTRY
    with pytest.raises(KeyError):
        REGISTRY["nope"]


def test_stored_files_load():
    for fx in REGISTRY:
        if fx.identity_file:
            lhs, rhs = fx.identity()
            assert lhs.lam == rhs.lam and lhs.n == fx.n
    assert check_trace(REGISTRY["a3a3"].trace()).ok
    with pytest.raises(ValueError):
        REGISTRY["d4"].trace()


def test_rank2_identity_pairings_come_from_the_matrices():
    for name in ("a1a1", "a2", "b2", "g2"):
        fx = REGISTRY[name]
        assert fx.identity()[0].lam == fx.B.pairing()
