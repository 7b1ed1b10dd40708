"""
Nodes, quantum memories holding identified entangled pairs, a trusted pair
source, and a public authenticated classical channel.

The joint state of a pair is stored network-side as one 2-qubit state even
though its halves belong to different nodes (exact simulation needs the
global state); qubit 0 of the joint is owner_a's half, qubit 1 owner_b's.
Node-locality is enforced by the operation layer: protocol code may only
gate/measure the half owned by the acting node.

The classical channel is ideal: in-order, lossless, authenticated. Every
message is appended to an append-only transcript visible to the adversary,
and per-node sent-bit counters are maintained for ledger cross-checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .qsim import BellVariant, PureState, bell_state

__all__ = [
    "NodeId",
    "PairId",
    "UNCHECKED",
    "CONSUMED",
    "LifecycleError",
    "EntangledPairRecord",
    "ClassicalMessage",
    "Transcript",
    "Network",
    "build_network",
    "parse_topology",
    "register_pair",
    "distribute_pair",
    "send_classical",
    "consume_pair",
    "pair_id_bits",
]

NodeId = str
PairId = int

UNCHECKED = "unchecked"
CONSUMED = "consumed"


class LifecycleError(RuntimeError):
    """A pair was used outside its unchecked -> consumed lifecycle."""


@dataclass
class EntangledPairRecord:
    """An identified shared pair: assumed variant, actual joint state, status."""

    id: PairId
    owner_a: NodeId
    owner_b: NodeId
    assumed: BellVariant
    joint: PureState
    status: str = UNCHECKED

    def owners(self) -> frozenset[NodeId]:
        return frozenset((self.owner_a, self.owner_b))

    def half_of(self, node: NodeId) -> int:
        """Qubit index (0 or 1) of `node`'s half within the joint state."""
        if node == self.owner_a:
            return 0
        if node == self.owner_b:
            return 1
        raise ValueError(f"node {node!r} owns no half of pair {self.id}")


@dataclass(frozen=True)
class ClassicalMessage:
    """One authenticated classical message; sender identity is unforgeable."""

    sender: NodeId
    recipient: NodeId
    payload: tuple[int, ...]
    bit_count: int

    def __post_init__(self) -> None:
        if self.bit_count != len(self.payload):
            raise ValueError("bit_count must equal payload length")
        if any(b not in (0, 1) for b in self.payload):
            raise ValueError("payload must be bits")


class Transcript:
    """Append-only ordered record of every classical message."""

    def __init__(self) -> None:
        self._messages: list[ClassicalMessage] = []

    def append(self, msg: ClassicalMessage) -> None:
        self._messages.append(msg)

    @property
    def messages(self) -> tuple[ClassicalMessage, ...]:
        return tuple(self._messages)

    def total_bits(self) -> int:
        return sum(m.bit_count for m in self._messages)

    def __len__(self) -> int:
        return len(self._messages)

    def __iter__(self) -> Iterator[ClassicalMessage]:
        return iter(self._messages)


@dataclass
class Network:
    """One network instance: nodes, links, pair memory, classical transcript."""

    nodes: tuple[NodeId, ...]
    links: frozenset[frozenset[NodeId]]
    id_bits: int = 16
    pairs: dict[PairId, EntangledPairRecord] = field(default_factory=dict)
    transcript: Transcript = field(default_factory=Transcript)
    bits_sent: dict[NodeId, int] = field(default_factory=dict)
    _next_pair_id: int = 0

    def unchecked_ids(self, owners: Iterable[NodeId] | None = None) -> list[PairId]:
        """Ids of unchecked pairs, optionally restricted to a 2-node owner set."""
        want = frozenset(owners) if owners is not None else None
        return [
            rec.id
            for rec in self.pairs.values()
            if rec.status == UNCHECKED and (want is None or rec.owners() == want)
        ]


def build_network(
    nodes: Iterable[NodeId],
    links: Iterable[tuple[NodeId, NodeId]],
    id_bits: int = 16,
) -> Network:
    """Create a network with empty memories and an empty transcript."""
    node_list = tuple(nodes)
    if len(set(node_list)) != len(node_list):
        raise ValueError("duplicate node name")
    if id_bits < 1:
        raise ValueError("id_bits must be positive")
    known = set(node_list)
    link_set: set[frozenset[NodeId]] = set()
    for a, b in links:
        if a not in known or b not in known:
            raise ValueError(f"link ({a!r}, {b!r}) references unknown node")
        if a == b:
            raise ValueError("link endpoints must differ")
        link_set.add(frozenset((a, b)))
    net = Network(nodes=node_list, links=frozenset(link_set), id_bits=id_bits)
    net.bits_sent = {n: 0 for n in node_list}
    return net


def parse_topology(text: str) -> tuple[list[NodeId], list[tuple[NodeId, NodeId]]]:
    """Parse a plain-text topology: one `nodeA nodeB` link per line.

    Blank lines and lines starting with `#` are ignored. Node order follows
    first appearance.
    """
    nodes: list[NodeId] = []
    links: list[tuple[NodeId, NodeId]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected `nodeA nodeB`, got {raw!r}")
        a, b = parts
        for n in (a, b):
            if n not in nodes:
                nodes.append(n)
        links.append((a, b))
    return nodes, links


def register_pair(
    net: Network,
    a: NodeId,
    b: NodeId,
    v: BellVariant,
    joint: PureState,
) -> PairId:
    """Allocate the next id and store a pair record with the given joint state.

    Used by the trusted source (`distribute_pair`) and by entanglement
    swapping, which stores the derived end-to-end pair it creates.
    """
    if net._next_pair_id >= (1 << net.id_bits):
        raise LifecycleError(f"pair id space exhausted ({net.id_bits} id bits)")
    pid = net._next_pair_id
    net._next_pair_id += 1
    net.pairs[pid] = EntangledPairRecord(
        id=pid, owner_a=a, owner_b=b, assumed=BellVariant(*v), joint=joint
    )
    return pid


def distribute_pair(net: Network, a: NodeId, b: NodeId, v: BellVariant) -> PairId:
    """Trusted source hands a fresh Bell pair of variant v to nodes a and b."""
    if a == b:
        raise ValueError("pair endpoints must differ")
    for n in (a, b):
        if n not in net.nodes:
            raise ValueError(f"unknown node {n!r}")
    return register_pair(net, a, b, BellVariant(*v), bell_state(v))


def send_classical(net: Network, msg: ClassicalMessage) -> None:
    """Deliver a message: append to the transcript, count the sender's bits."""
    if msg.sender not in net.nodes:
        raise ValueError(f"unknown sender {msg.sender!r}")
    if msg.recipient not in net.nodes:
        raise ValueError(f"unknown recipient {msg.recipient!r}")
    net.transcript.append(msg)
    net.bits_sent[msg.sender] = net.bits_sent.get(msg.sender, 0) + msg.bit_count


def consume_pair(net: Network, pid: PairId) -> EntangledPairRecord:
    """Mark a pair consumed (sacrificed) and return its record."""
    try:
        rec = net.pairs[pid]
    except KeyError:
        raise LifecycleError(f"no pair with id {pid}") from None
    if rec.status != UNCHECKED:
        raise LifecycleError(f"pair {pid} already {rec.status}")
    rec.status = CONSUMED
    return rec


def pair_id_bits(net: Network, pid: PairId) -> tuple[int, ...]:
    """Big-endian id_bits-wide bit tuple encoding a pair id for messages."""
    k = net.id_bits
    return tuple((pid >> (k - 1 - i)) & 1 for i in range(k))
