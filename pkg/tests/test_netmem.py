"""Network state: nodes, links, pair lifecycle, classical transcript."""
from __future__ import annotations

import numpy as np
import pytest

from conftest import two_node_net
from entverify import (
    BellVariant,
    ClassicalMessage,
    LifecycleError,
    bell_state,
    build_network,
    consume_pair,
    distribute_pair,
    parse_topology,
    register_pair,
    send_classical,
)
from entverify.netmem import CONSUMED, UNCHECKED, pair_id_bits

# ---------------------------------------------------------------- construction


def test_build_network_basics():
    net = build_network(("a", "b", "c"), (("a", "b"), ("b", "c")))
    assert net.nodes == ("a", "b", "c")
    assert frozenset(("a", "b")) in net.links
    assert net.id_bits == 16
    assert net.bits_sent == {"a": 0, "b": 0, "c": 0}
    assert len(net.transcript) == 0


def test_build_network_rejects_bad_input():
    with pytest.raises(ValueError):
        build_network(("a", "a"), ())
    with pytest.raises(ValueError):
        build_network(("a", "b"), (("a", "z"),))
    with pytest.raises(ValueError):
        build_network(("a", "b"), (("a", "a"),))
    with pytest.raises(ValueError):
        build_network(("a", "b"), (("a", "b"),), id_bits=0)


def test_parse_topology_orders_and_filters():
    text = "# chain\nalpha beta\n\nbeta gamma\n  # tail comment line\ngamma delta\n"
    nodes, links = parse_topology(text)
    assert nodes == ["alpha", "beta", "gamma", "delta"]
    assert links == [("alpha", "beta"), ("beta", "gamma"), ("gamma", "delta")]


def test_parse_topology_rejects_malformed_lines():
    with pytest.raises(ValueError, match="line 2"):
        parse_topology("a b\na b c\n")


# ---------------------------------------------------------------- pairs


def test_distribute_pair_assigns_sequential_ids_and_bell_state():
    net, ids = two_node_net(((0, 0), (1, 1)))
    assert ids == [0, 1]
    rec = net.pairs[1]
    assert rec.assumed == BellVariant(1, 1)
    assert rec.status == UNCHECKED
    np.testing.assert_allclose(rec.joint, bell_state((1, 1)))
    assert rec.owners() == frozenset(("verifier", "other"))
    assert rec.half_of("verifier") == 0 and rec.half_of("other") == 1


def test_distribute_pair_validates_endpoints():
    net, _ = two_node_net()
    with pytest.raises(ValueError):
        distribute_pair(net, "verifier", "verifier", BellVariant(0, 0))
    with pytest.raises(ValueError):
        distribute_pair(net, "verifier", "nobody", BellVariant(0, 0))


def test_pair_id_space_exhaustion():
    net = build_network(("a", "b"), (("a", "b"),), id_bits=2)
    for _ in range(4):
        distribute_pair(net, "a", "b", BellVariant(0, 0))
    with pytest.raises(LifecycleError):
        distribute_pair(net, "a", "b", BellVariant(0, 0))


def test_pair_id_bits_is_big_endian_fixed_width():
    net, _ = two_node_net((), id_bits=4)
    for _ in range(6):
        distribute_pair(net, "verifier", "other", BellVariant(0, 0))
    assert pair_id_bits(net, 5) == (0, 1, 0, 1)
    assert pair_id_bits(net, 0) == (0, 0, 0, 0)


def test_register_pair_accepts_arbitrary_joint_state():
    net, _ = two_node_net()
    pid = register_pair(net, "verifier", "other", BellVariant(0, 1), bell_state((0, 1)))
    assert net.pairs[pid].assumed == BellVariant(0, 1)


def test_half_of_rejects_non_owner():
    net, ids = two_node_net(((0, 0),))
    with pytest.raises(ValueError):
        net.pairs[ids[0]].half_of("stranger")


# ---------------------------------------------------------------- lifecycle


def test_consume_pair_moves_to_consumed_once():
    net, ids = two_node_net(((0, 0),))
    rec = consume_pair(net, ids[0])
    assert rec.status == CONSUMED
    assert net.unchecked_ids() == []
    with pytest.raises(LifecycleError):
        consume_pair(net, ids[0])
    with pytest.raises(LifecycleError):
        consume_pair(net, 123)


def test_unchecked_ids_filters_by_owner_set():
    net = build_network(("a", "b", "c"), (("a", "b"), ("b", "c")))
    p_ab = distribute_pair(net, "a", "b", BellVariant(0, 0))
    p_bc = distribute_pair(net, "b", "c", BellVariant(0, 0))
    assert sorted(net.unchecked_ids()) == [p_ab, p_bc]
    assert net.unchecked_ids({"a", "b"}) == [p_ab]
    consume_pair(net, p_ab)
    assert net.unchecked_ids({"a", "b"}) == []


# ---------------------------------------------------------------- classical channel


def test_send_classical_appends_and_counts():
    net, _ = two_node_net()
    msg = ClassicalMessage("verifier", "other", (1, 0, 1), 3)
    send_classical(net, msg)
    assert net.transcript.messages == (msg,)
    assert net.transcript.total_bits() == 3
    assert net.bits_sent == {"verifier": 3, "other": 0}
    assert list(net.transcript) == [msg]


def test_send_classical_validates_endpoints():
    net, _ = two_node_net()
    with pytest.raises(ValueError):
        send_classical(net, ClassicalMessage("verifier", "nobody", (1,), 1))


def test_classical_message_validation():
    with pytest.raises(ValueError):
        ClassicalMessage("a", "b", (1, 0), 3)  # count mismatch
    with pytest.raises(ValueError):
        ClassicalMessage("a", "b", (2,), 1)  # not a bit
