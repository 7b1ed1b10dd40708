"""Compromised-node attacker: memory collapse and classical lying."""
from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ScriptedSource, VARIANTS, two_node_net, unit_bases
from entverify import (
    AttackerPolicy,
    BASIS_COMPUTATIONAL,
    BASIS_DIAGONAL,
    BASIS_HAAR_PER_PAIR,
    BellVariant,
    HONEST_PROTOCOL,
    RANDOM_BITS,
    RandomSource,
    SingleQubitBasis,
    attacker_classical_reply,
    compromise_node,
    consume_pair,
    distribute_pair,
    haar_basis,
    sift_raw_key,
)
from entverify.adversary import (
    ancilla_entanglement_policy,
    channel_interception_policy,
)

_SQ2 = 1.0 / np.sqrt(2.0)


def _schmidt_coefficients(joint: np.ndarray) -> np.ndarray:
    return np.linalg.svd(joint.reshape(2, 2), compute_uv=False)


# ---------------------------------------------------------------- policy


def test_policy_validation():
    AttackerPolicy(basis=BASIS_COMPUTATIONAL)
    AttackerPolicy(basis=SingleQubitBasis(0.6, 0.8))
    with pytest.raises(ValueError):
        AttackerPolicy(basis="sideways")
    with pytest.raises(ValueError):
        AttackerPolicy(basis=SingleQubitBasis(1.0, 1.0))
    with pytest.raises(ValueError):
        AttackerPolicy(classical_behavior="evasive")


def test_policy_lies_flag():
    assert AttackerPolicy(classical_behavior=RANDOM_BITS).lies()
    assert not AttackerPolicy(classical_behavior=HONEST_PROTOCOL).lies()


def test_out_of_scope_attack_scenarios_raise():
    with pytest.raises(NotImplementedError, match="channel interception"):
        channel_interception_policy()
    with pytest.raises(NotImplementedError, match="ancilla"):
        ancilla_entanglement_policy()


def test_haar_basis_is_normalized_and_reproducible():
    b1 = haar_basis(RandomSource(3).substream(0))
    b2 = haar_basis(RandomSource(3).substream(0))
    assert b1 == b2
    assert b1.is_normalized()
    assert haar_basis(RandomSource(3).substream(1)) != b1


# ---------------------------------------------------------------- compromise


def test_computational_compromise_collapses_to_00_or_11():
    for u, expect_bit, expect_joint in ((0.3, 0, [1, 0, 0, 0]), (0.7, 1, [0, 0, 0, 1])):
        net, ids = two_node_net(((0, 0),))
        event = compromise_node(
            net, "other", AttackerPolicy(basis=BASIS_COMPUTATIONAL), ScriptedSource([u])
        )
        assert event.collapsed == [(ids[0], expect_bit)]
        np.testing.assert_allclose(net.pairs[ids[0]].joint, expect_joint, atol=1e-12)


def test_diagonal_compromise_collapses_to_hadamard_products():
    h0 = np.array([_SQ2, _SQ2], dtype=np.complex128)
    h1 = np.array([_SQ2, -_SQ2], dtype=np.complex128)
    for u, expect_half in ((0.3, h0), (0.7, h1)):
        net, ids = two_node_net(((0, 0),))
        compromise_node(
            net, "other", AttackerPolicy(basis=BASIS_DIAGONAL), ScriptedSource([u])
        )
        joint = net.pairs[ids[0]].joint
        np.testing.assert_allclose(
            joint, np.kron(expect_half, expect_half), atol=1e-12
        )


@given(unit_bases(), st.sampled_from(VARIANTS), st.integers(0, 10**6))
def test_any_basis_compromise_leaves_product_state(basis, variant, seed):
    net, ids = two_node_net((variant,))
    compromise_node(net, "other", AttackerPolicy(basis=basis), RandomSource(seed))
    coeffs = _schmidt_coefficients(net.pairs[ids[0]].joint)
    assert coeffs[1] < 1e-9  # single nonzero Schmidt coefficient
    assert abs(coeffs[0] - 1.0) < 1e-9


def test_haar_compromise_local_state_matches_recorded_basis():
    net, ids = two_node_net(((0, 0), (0, 0)))
    event = compromise_node(
        net, "other", AttackerPolicy(basis=BASIS_HAAR_PER_PAIR), RandomSource(5)
    )
    assert sorted(event.bases) == ids
    assert event.bases[ids[0]] != event.bases[ids[1]]  # fresh draw per pair
    for pid, bit in event.collapsed:
        vec = event.bases[pid].matrix()[:, bit]
        # joint = (verifier half) (x) (other half); the attacker-side factor
        # must equal the measured basis vector up to phase
        _, _, vh = np.linalg.svd(net.pairs[pid].joint.reshape(2, 2))
        other_half = vh[0]  # for M = a b^T, svd gives vh[0] = b up to phase
        assert abs(np.vdot(vec, other_half)) > 1.0 - 1e-9


def test_compromise_is_idempotent_for_fixed_bases():
    for basis in (BASIS_COMPUTATIONAL, BASIS_DIAGONAL):
        net, ids = two_node_net(((0, 1),))
        policy = AttackerPolicy(basis=basis)
        first = compromise_node(net, "other", policy, RandomSource(8))
        state_after = net.pairs[ids[0]].joint.copy()
        again = compromise_node(net, "other", policy, ScriptedSource([]))
        assert again.collapsed == first.collapsed
        np.testing.assert_allclose(net.pairs[ids[0]].joint, state_after, atol=1e-12)


def test_compromise_respects_target_pairs_and_lifecycle():
    net, ids = two_node_net(((0, 0), (0, 0), (0, 0)))
    consume_pair(net, ids[1])
    policy = AttackerPolicy(target_pairs=frozenset({ids[0], ids[1]}))
    event = compromise_node(net, "other", policy, RandomSource(0))
    assert [pid for pid, _ in event.collapsed] == [ids[0]]  # consumed + untargeted skipped
    np.testing.assert_allclose(
        net.pairs[ids[2]].joint, net.pairs[ids[2]].joint
    )


def test_compromise_only_touches_pairs_owned_by_node():
    from entverify import build_network

    net = build_network(("a", "b", "c"), (("a", "b"), ("b", "c")))
    p_ab = distribute_pair(net, "a", "b", BellVariant(0, 0))
    p_bc = distribute_pair(net, "b", "c", BellVariant(0, 0))
    event = compromise_node(net, "c", AttackerPolicy(), RandomSource(0))
    assert [pid for pid, _ in event.collapsed] == [p_bc]
    np.testing.assert_allclose(net.pairs[p_ab].joint[0], _SQ2)


def test_compromise_unknown_node_raises():
    net, _ = two_node_net()
    with pytest.raises(ValueError):
        compromise_node(net, "mallory", AttackerPolicy(), RandomSource(0))


def test_computational_compromise_preserves_sifted_key_agreement():
    variants = [(0, 0), (0, 1), (1, 0), (1, 1)] * 4
    net, ids = two_node_net(variants)
    compromise_node(net, "other", AttackerPolicy(basis=BASIS_COMPUTATIONAL), RandomSource(2))
    key_a, key_b = sift_raw_key(net, "verifier", "other", ids, RandomSource(3))
    assert key_a.bits == key_b.bits


def test_diagonal_compromise_randomizes_sifted_bits():
    trials = 2000
    mismatches = 0
    root = RandomSource(9)
    for t in range(trials // 100):
        net, ids = two_node_net([(0, 0)] * 100)
        r = root.substream(t)
        compromise_node(net, "other", AttackerPolicy(basis=BASIS_DIAGONAL), r)
        key_a, key_b = sift_raw_key(net, "verifier", "other", ids, r)
        mismatches += sum(x != y for x, y in zip(key_a.bits, key_b.bits))
    rate = mismatches / trials
    assert abs(rate - 0.5) < 4 * 0.5 / np.sqrt(trials)


# ---------------------------------------------------------------- classical replies


def test_honest_reply_is_passthrough():
    assert attacker_classical_reply(
        AttackerPolicy(classical_behavior=HONEST_PROTOCOL), (1, 0), ScriptedSource([])
    ) == (1, 0)


def test_random_reply_draws_fresh_bits():
    policy = AttackerPolicy(classical_behavior=RANDOM_BITS)
    out = attacker_classical_reply(policy, (1, 0, 1), ScriptedSource([0.7, 0.2, 0.9]))
    assert out == (0, 1, 0)


def test_random_reply_bits_are_balanced():
    policy = AttackerPolicy(classical_behavior=RANDOM_BITS)
    r = RandomSource(13)
    n = 20_000
    out = attacker_classical_reply(policy, (0,) * n, r)
    mean = sum(out) / n
    assert abs(mean - 0.5) < 3 * 0.5 / np.sqrt(n)
