"""
Raw-key sifting from surviving entangled pairs and bit-error-rate
estimation.

Both sides measure their halves in the rectilinear basis; node_a (the
designated complementing side) flips its bit whenever the pair's assumed
variant has i != j, so honest pairs of any variant yield identical keys.
Error estimation publicly discloses a random sample of positions and
strips them from both keys; everything past that point (information
reconciliation, privacy amplification) is out of scope and the API stops
at the QberEstimate hand-off.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import ceil
from typing import Sequence

from .netmem import Network, NodeId, PairId, consume_pair
from .qsim import RandomSource, measure_computational

__all__ = [
    "RawKey",
    "QberEstimate",
    "sift_raw_key",
    "estimate_qber",
    "bits_to_hex",
]


@dataclass(frozen=True)
class RawKey:
    """One party's sifted raw key: one bit per consumed pair."""

    bits: tuple[int, ...]
    pair_ids: tuple[PairId, ...]

    def __post_init__(self) -> None:
        if len(self.bits) != len(self.pair_ids):
            raise ValueError("one bit per source pair required")

    def __len__(self) -> int:
        return len(self.bits)


@dataclass(frozen=True)
class QberEstimate:
    """Publicly estimated bit error rate and the surviving key material."""

    epsilon: float
    disclosed_positions: tuple[int, ...]
    remaining_key_a: tuple[int, ...]
    remaining_key_b: tuple[int, ...]


def sift_raw_key(
    net: Network,
    node_a: NodeId,
    node_b: NodeId,
    pair_ids: Sequence[PairId],
    r: RandomSource,
) -> tuple[RawKey, RawKey]:
    """Measure each listed pair rectilinearly on both sides and sift.

    node_a complements its bit for pairs whose assumed variant has i != j.
    All listed pairs are consumed.
    """
    bits_a: list[int] = []
    bits_b: list[int] = []
    for pid in pair_ids:
        rec = consume_pair(net, pid)
        if rec.owners() != frozenset((node_a, node_b)):
            raise ValueError(f"pair {pid} is not shared by {node_a!r} and {node_b!r}")
        qa, qb = rec.half_of(node_a), rec.half_of(node_b)
        bit_a, state = measure_computational(rec.joint, qa, r)
        bit_b, state = measure_computational(state, qb, r)
        rec.joint = state
        if rec.assumed.i != rec.assumed.j:
            bit_a = 1 - bit_a
        bits_a.append(bit_a)
        bits_b.append(bit_b)
    ids = tuple(pair_ids)
    return RawKey(tuple(bits_a), ids), RawKey(tuple(bits_b), ids)


def estimate_qber(
    a: RawKey, b: RawKey, sample_fraction: float, r: RandomSource
) -> QberEstimate:
    """Disclose a random sample of positions, estimate the error rate there,
    and strip the disclosed positions from both keys."""
    if len(a) != len(b):
        raise ValueError("keys have different lengths")
    if len(a) == 0:
        raise ValueError("keys are empty")
    if not 0.0 < sample_fraction < 1.0:
        raise ValueError("sample_fraction must be in (0, 1)")
    count = ceil(sample_fraction * len(a))
    if count >= len(a):
        raise ValueError("sample would disclose the entire key")
    positions = sorted(
        int(p) for p in r.generator.choice(len(a), size=count, replace=False)
    )
    mismatches = sum(1 for p in positions if a.bits[p] != b.bits[p])
    disclosed = set(positions)
    return QberEstimate(
        epsilon=mismatches / count,
        disclosed_positions=tuple(positions),
        remaining_key_a=tuple(
            bit for i, bit in enumerate(a.bits) if i not in disclosed
        ),
        remaining_key_b=tuple(
            bit for i, bit in enumerate(b.bits) if i not in disclosed
        ),
    )


def bits_to_hex(bits: Sequence[int]) -> str:
    """Pack bits (big-endian, zero-padded on the right to a nibble) as hex."""
    if not bits:
        return ""
    padded = list(bits) + [0] * (-len(bits) % 4)
    digits = []
    for i in range(0, len(padded), 4):
        nibble = padded[i] << 3 | padded[i + 1] << 2 | padded[i + 2] << 1 | padded[i + 3]
        digits.append(f"{nibble:x}")
    return "".join(digits)
