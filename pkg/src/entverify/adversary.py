"""
Compromised-node attacker: full control of one node, of its quantum memory
and of its classical traffic.

The attacker destroys entanglement by measuring its own halves of shared
pairs in a chosen single-qubit basis; the remote halves collapse through
the joint state, leaving each targeted pair in a product state. On the
classical channel the attacker either runs the protocol honestly over its
broken memory (`honest_protocol`) or substitutes uniform random bits for
its replies (`random_bits`).

Policy basis choices: computational, diagonal, a fixed arbitrary basis
(a|0>+b|1> and its orthogonal complement), or a fresh Haar-uniform basis
per pair. Haar draws use a = cos(theta/2), b = e^{i phi} sin(theta/2) with
cos(theta) uniform on [-1, 1] and phi uniform on [0, 2 pi).

Attackers that intercept the pair-distribution channel or entangle
ancillas with it are out of scope; their policy constructors raise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import pi, sqrt
from typing import Sequence

import numpy as np

from .netmem import Network, NodeId, PairId, UNCHECKED
from .qsim import (
    COMPUTATIONAL,
    DIAGONAL,
    RandomSource,
    SingleQubitBasis,
    measure_in_basis,
)

__all__ = [
    "BASIS_COMPUTATIONAL",
    "BASIS_DIAGONAL",
    "BASIS_HAAR_PER_PAIR",
    "HONEST_PROTOCOL",
    "RANDOM_BITS",
    "AttackerPolicy",
    "CompromiseEvent",
    "haar_basis",
    "compromise_node",
    "attacker_classical_reply",
    "channel_interception_policy",
    "ancilla_entanglement_policy",
]

BASIS_COMPUTATIONAL = "computational"
BASIS_DIAGONAL = "diagonal"
BASIS_HAAR_PER_PAIR = "haar_random_per_pair"

HONEST_PROTOCOL = "honest_protocol"
RANDOM_BITS = "random_bits"

_NAMED_BASES = {
    BASIS_COMPUTATIONAL: COMPUTATIONAL,
    BASIS_DIAGONAL: DIAGONAL,
}


@dataclass(frozen=True)
class AttackerPolicy:
    """What a compromised node does.

    `basis` governs the memory attack (see `compromise_node`): a named
    basis, a fixed SingleQubitBasis, or a fresh Haar draw per pair.
    `classical_behavior` governs the node's protocol replies (used by the
    verification rounds): honest bits from the real circuit, or uniform
    random substitutes. `target_pairs` restricts the attack to a subset of
    pair ids; None means every pair the node holds a half of.
    """

    basis: str | SingleQubitBasis = BASIS_COMPUTATIONAL
    classical_behavior: str = HONEST_PROTOCOL
    target_pairs: frozenset[PairId] | None = None

    def __post_init__(self) -> None:
        if isinstance(self.basis, SingleQubitBasis):
            if not self.basis.is_normalized():
                raise ValueError("fixed basis is not normalized")
        elif self.basis not in (
            BASIS_COMPUTATIONAL,
            BASIS_DIAGONAL,
            BASIS_HAAR_PER_PAIR,
        ):
            raise ValueError(f"unknown basis spec {self.basis!r}")
        if self.classical_behavior not in (HONEST_PROTOCOL, RANDOM_BITS):
            raise ValueError(
                f"unknown classical behavior {self.classical_behavior!r}"
            )
        if self.target_pairs is not None:
            object.__setattr__(self, "target_pairs", frozenset(self.target_pairs))

    def lies(self) -> bool:
        return self.classical_behavior == RANDOM_BITS


@dataclass
class CompromiseEvent:
    """Record of one memory attack: outcomes and the basis used per pair."""

    node: NodeId
    policy: AttackerPolicy
    collapsed: list[tuple[PairId, int]] = field(default_factory=list)
    bases: dict[PairId, SingleQubitBasis] = field(default_factory=dict)


def haar_basis(r: RandomSource) -> SingleQubitBasis:
    """A Haar-uniform single-qubit basis (uniform over the Bloch sphere)."""
    u = 2.0 * r.uniform() - 1.0
    phi = 2.0 * pi * r.uniform()
    a = sqrt((1.0 + u) / 2.0)
    b = np.exp(1j * phi) * sqrt((1.0 - u) / 2.0)
    return SingleQubitBasis(complex(a), complex(b))


def _resolve_basis(policy: AttackerPolicy, r: RandomSource) -> SingleQubitBasis:
    if isinstance(policy.basis, SingleQubitBasis):
        return policy.basis
    if policy.basis == BASIS_HAAR_PER_PAIR:
        return haar_basis(r)
    return _NAMED_BASES[policy.basis]


def compromise_node(
    net: Network, node: NodeId, policy: AttackerPolicy, r: RandomSource
) -> CompromiseEvent:
    """Measure the node's half of every targeted unchecked pair.

    Each targeted pair's joint state becomes a product state; outcomes and
    the basis used are recorded. Pairs are processed in id order so the
    event is deterministic for a fixed RandomSource.
    """
    if node not in net.nodes:
        raise ValueError(f"unknown node {node!r}")
    event = CompromiseEvent(node=node, policy=policy)
    for pid in sorted(net.pairs):
        rec = net.pairs[pid]
        if rec.status != UNCHECKED or node not in rec.owners():
            continue
        if policy.target_pairs is not None and pid not in policy.target_pairs:
            continue
        basis = _resolve_basis(policy, r)
        bit, rec.joint = measure_in_basis(rec.joint, rec.half_of(node), basis, r)
        event.collapsed.append((pid, bit))
        event.bases[pid] = basis
    return event


def attacker_classical_reply(
    policy: AttackerPolicy, honest_bits: Sequence[int], r: RandomSource
) -> tuple[int, ...]:
    """Bits the node actually sends given the honest protocol bits."""
    if policy.lies():
        return tuple(r.bit() for _ in honest_bits)
    return tuple(honest_bits)


def channel_interception_policy() -> AttackerPolicy:
    """Attacker on the pair-distribution channel: out of scope."""
    raise NotImplementedError("unsupported attack scenario: channel interception")


def ancilla_entanglement_policy() -> AttackerPolicy:
    """Attacker entangling ancillas with distributed pairs: out of scope."""
    raise NotImplementedError("unsupported attack scenario: ancilla entanglement")
