import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rllsim.degree import (
    DegreeDistribution,
    InfeasibleDistributionError,
    InvalidDistributionError,
    average_node_degrees,
    design_rate,
    edge_to_node,
    node_counts,
    node_to_edge,
)


def node_dist(vnd, delta, cnd, gamma):
    return DegreeDistribution(
        var_degrees=list(zip(vnd, delta)),
        chk_degrees=list(zip(cnd, gamma)),
        perspective="node",
    )


CODE2 = node_dist([2, 5], [0.5, 0.5], [10, 11], [0.9707, 0.0293])


def test_node_to_edge_hand_inverted():
    # delta = [0.5, 0.5] on degrees [2, 5]  ->  lambda = [2/7, 5/7]
    d = node_to_edge(CODE2)
    lam = dict(d.var_degrees)
    assert lam[2] == pytest.approx(2 / 7, abs=1e-12)
    assert lam[5] == pytest.approx(5 / 7, abs=1e-12)


def test_single_degree_identity():
    d = node_dist([3], [1.0], [6], [1.0])
    e = node_to_edge(d)
    assert e.var_degrees == [(3, 1.0)]
    assert e.chk_degrees == [(6, 1.0)]


def test_degree2_count_high_rate_profile():
    # lambda terms (degree, weight): X->2, X^2->3, X^6->7, X^7->8
    lam = DegreeDistribution(
        var_degrees=[(2, 0.2343), (3, 0.3406), (7, 0.2967), (8, 0.1284)],
        chk_degrees=[(19, 0.3), (20, 0.7)],
        perspective="edge",
    )
    nd = edge_to_node(lam)
    delta2 = dict(nd.var_degrees)[2]
    assert abs(round(4161 * delta2) - 1685) <= 2


def test_roundtrip_identity_code2():
    back = edge_to_node(node_to_edge(CODE2))
    for (k1, w1), (k2, w2) in zip(back.var_degrees, CODE2.var_degrees):
        assert k1 == k2 and abs(w1 - w2) < 1e-12
    for (k1, w1), (k2, w2) in zip(back.chk_degrees, CODE2.chk_degrees):
        assert k1 == k2 and abs(w1 - w2) < 1e-12


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.tuples(st.integers(1, 30), st.floats(0.01, 1.0)), min_size=1, max_size=5),
    st.lists(st.tuples(st.integers(1, 30), st.floats(0.01, 1.0)), min_size=1, max_size=5),
)
def test_roundtrip_property(var_raw, chk_raw):
    def normalize(raw):
        seen = {}
        for d, w in raw:
            seen[d] = seen.get(d, 0.0) + w
        degs = sorted(seen)
        tot = sum(seen.values())
        return [(d, seen[d] / tot) for d in degs]

    d = DegreeDistribution(normalize(var_raw), normalize(chk_raw), "edge")
    back = node_to_edge(edge_to_node(d))
    for (k1, w1), (k2, w2) in zip(back.var_degrees, d.var_degrees):
        assert k1 == k2 and abs(w1 - w2) < 1e-12
    for (k1, w1), (k2, w2) in zip(back.chk_degrees, d.chk_degrees):
        assert k1 == k2 and abs(w1 - w2) < 1e-12


def test_design_rate_code2():
    avg_v, avg_c = average_node_degrees(CODE2)
    assert avg_v == pytest.approx(3.5)
    assert avg_c == pytest.approx(10.0293)
    assert design_rate(CODE2) == pytest.approx(1 - 3.5 / 10.0293, abs=1e-12)
    assert design_rate(CODE2) == pytest.approx(0.651, abs=1e-3)


def test_design_rate_regular_36():
    d = node_dist([3], [1.0], [6], [1.0])
    assert design_rate(d) == pytest.approx(0.5)
    # same value from the edge perspective
    assert design_rate(node_to_edge(d)) == pytest.approx(0.5)


def test_design_rate_code10():
    d = node_dist([2, 5], [0.5, 0.5], [9, 10], [0.00074, 0.99926])
    assert design_rate(d) == pytest.approx(0.65, abs=1e-3)


def test_infeasible_rate_rejected():
    d = node_dist([8], [1.0], [4], [1.0])
    with pytest.raises(InfeasibleDistributionError):
        design_rate(d)


def test_invalid_distributions_rejected():
    with pytest.raises(InvalidDistributionError):
        DegreeDistribution([(0, 1.0)], [(6, 1.0)], "node")
    with pytest.raises(InvalidDistributionError):
        DegreeDistribution([(2, 0.5), (2, 0.5)], [(6, 1.0)], "node")
    with pytest.raises(InvalidDistributionError):
        DegreeDistribution([(2, 0.7), (5, 0.7)], [(6, 1.0)], "node")
    with pytest.raises(InvalidDistributionError):
        DegreeDistribution([(2, 1.0)], [(6, 1.0)], "sideways")
    with pytest.raises(InvalidDistributionError):
        edge_to_node(CODE2)  # already node perspective


def test_json_roundtrip():
    obj = CODE2.to_json_dict()
    assert obj["perspective"] == "node"
    back = DegreeDistribution.from_json_dict(obj)
    assert back == CODE2


def test_node_counts_repair():
    counts = node_counts([0.5, 0.5], 4608)
    assert counts.tolist() == [2304, 2304]
    counts = node_counts([0.442, 0.0874, 0.4706], 4608)
    assert counts.sum() == 4608
    # repair lands on the largest-weight class
    assert counts[2] in (int(round(0.4706 * 4608)) + d for d in (-2, -1, 0, 1, 2))
