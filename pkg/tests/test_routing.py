import pytest
from hypothesis import given, strategies as st

from qdesk.optimize import swap_network_linear
from qdesk.optimize.routing import all_pairs, pairs_met


@given(st.integers(2, 40))
def test_every_pair_meets(n):
    net = swap_network_linear(n)
    assert pairs_met(net, n) == all_pairs(n)


@given(st.integers(2, 40))
def test_depth_and_reversal(n):
    net = swap_network_linear(n)
    assert net.depth <= n
    assert net.final_permutation == tuple(reversed(range(n)))


@given(st.integers(2, 30))
def test_layers_are_disjoint_adjacent_swaps(n):
    for layer in swap_network_linear(n).layers:
        sites = [q for pair in layer for q in pair]
        assert len(sites) == len(set(sites))
        assert all(b == a + 1 for a, b in layer)


def test_too_small():
    with pytest.raises(ValueError):
        swap_network_linear(1)
