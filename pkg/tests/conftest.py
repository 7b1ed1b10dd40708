"""Shared test helpers: scripted randomness and hypothesis strategies."""
from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from entverify import BellVariant, SingleQubitBasis, build_network, distribute_pair

settings.register_profile(
    "suite", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("suite")

VARIANTS = (
    BellVariant(0, 0),
    BellVariant(0, 1),
    BellVariant(1, 0),
    BellVariant(1, 1),
)


class ScriptedSource:
    """RandomSource stand-in that replays a fixed uniform-draw script.

    Raises IndexError if the code under test draws more than scripted,
    which makes unexpected consumption a loud failure. Unconsumed values
    are allowed (forced measurement branches draw nothing).
    """

    def __init__(self, values) -> None:
        self.values = list(values)
        self.consumed = 0

    def uniform(self) -> float:
        if not self.values:
            raise IndexError("scripted draws exhausted")
        self.consumed += 1
        return self.values.pop(0)

    def bit(self) -> int:
        return 1 if self.uniform() < 0.5 else 0

    def bits(self, n: int):
        return tuple(self.bit() for _ in range(n))

    def substream(self, stream_id: int) -> "ScriptedSource":
        return self


def two_node_net(pairs=(), id_bits: int = 16):
    """Fresh verifier/other network with the given pair variants distributed."""
    net = build_network(("verifier", "other"), (("verifier", "other"),), id_bits)
    ids = [distribute_pair(net, "verifier", "other", BellVariant(*v)) for v in pairs]
    return net, ids


def amplitude_pairs():
    """Strategy: normalized (alpha, beta) complex amplitude pairs."""

    def build(parts):
        re0, im0, re1, im1 = parts
        v = np.array([re0 + 1j * im0, re1 + 1j * im1], dtype=np.complex128)
        norm = np.linalg.norm(v)
        if norm < 1e-3:
            v = np.array([1.0, 0.0], dtype=np.complex128)
            norm = 1.0
        return v / norm

    comp = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)
    return st.tuples(comp, comp, comp, comp).map(build)


def unit_bases():
    """Strategy: normalized SingleQubitBasis instances."""
    return amplitude_pairs().map(lambda v: SingleQubitBasis(complex(v[0]), complex(v[1])))


def unit_states(n: int):
    """Strategy: normalized n-qubit state vectors."""

    def build(parts):
        dim = 1 << n
        v = np.array(
            [parts[2 * k] + 1j * parts[2 * k + 1] for k in range(dim)],
            dtype=np.complex128,
        )
        norm = np.linalg.norm(v)
        if norm < 1e-3:
            v = np.zeros(dim, dtype=np.complex128)
            v[0] = 1.0
            norm = 1.0
        return v / norm

    comp = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)
    return st.tuples(*([comp] * (2 << n))).map(build)


@pytest.fixture
def scripted():
    return ScriptedSource
