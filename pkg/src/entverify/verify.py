"""
The three entanglement-verification protocols, their verdict predicates,
closed-form detection formulas, and per-round resource ledgers.

Protocols (Verifier vs Other Party, one shared network):

- NA2010: both sides measure their halves of one pair, each after an
  optional Hadamard chosen by a private coin (x for the Verifier, y for
  the Other Party). The Other Party replies with (b, y); the Verifier's
  verdict compares outcomes only when the coins matched.
- AC1: the Verifier draws a selector s; the Other Party prepares |0> (s=0)
  or |+> (s=1) and teleports it back over the pair under test. The
  Verifier applies the teleportation correction, then H^s, then measures;
  any 1 outcome flags the pair.
- AC2: the Other Party teleports its half of the checked pair over a
  second (channel) pair. The Verifier then holds both halves of the
  checked pair and runs CNOT, H, CNOT (first qubit as control), measuring
  (v1, v2); any outcome other than the checked pair's assumed variant
  flags it.

Rounds always execute the full protocol circuitry on the pairs' actual
joint states (which a prior `compromise_node` may have collapsed). The
attacker policy passed to a round governs only the Other Party's classical
replies; `random_bits` substitutes uniform bits for them.

The closed-form per-session detection probabilities 1-(7/8)^m, 1-(3/4)^m,
1-(1/4)^m apply to a computational- or diagonal-basis memory attacker,
under honest replies for NA2010/AC1 and under uncorrelated (random-bit)
replies for AC2; see README for the model behind each formula.

`ac1_detection_prob` and `ac2_detection_prob` are verdict-stage formulas:
they give the detection probability of the final decision circuit applied
to given collapsed states (AC1: the Verifier-side qubit alpha|0>+beta|1>;
AC2: the product of the two collapsed qubits entering the verification
circuit). The matching `*_decision_round` helpers simulate exactly that
stage so formula and circuit can be compared directly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from .adversary import AttackerPolicy, attacker_classical_reply
from .netmem import (
    ClassicalMessage,
    EntangledPairRecord,
    Network,
    NodeId,
    PairId,
    consume_pair,
    pair_id_bits,
    send_classical,
)
from .qsim import (
    BellVariant,
    NORM_TOL,
    PureState,
    RandomSource,
    apply_cnot,
    apply_gate,
    measure_computational,
    num_qubits,
    product,
)
from .teleport import correction_operator

__all__ = [
    "NA2010",
    "AC1",
    "AC2",
    "PROTOCOLS",
    "ProtocolKind",
    "RoundTranscript",
    "RoundResult",
    "ResourceLedger",
    "SessionResult",
    "decide_na2010",
    "na2010_round",
    "ac1_round",
    "decide_ac2",
    "ac2_round",
    "run_verification",
    "closed_form_pm",
    "ac1_detection_prob",
    "ac2_joint_state",
    "ac2_detection_prob",
    "ac1_decision_round",
    "ac2_decision_round",
    "ac2_decision_probs",
]

ProtocolKind = str
NA2010: ProtocolKind = "na2010"
AC1: ProtocolKind = "ac1"
AC2: ProtocolKind = "ac2"
PROTOCOLS: tuple[ProtocolKind, ...] = (NA2010, AC1, AC2)

_SQRT2_INV = 1.0 / sqrt(2.0)
_KET0 = np.array([1.0, 0.0], dtype=np.complex128)
_KET_PLUS = np.array([_SQRT2_INV, _SQRT2_INV], dtype=np.complex128)


@dataclass
class ResourceLedger:
    """Per-round resource counts.

    `rng_draws` counts protocol-level coin flips (x, y, s), not the
    simulator's internal measurement sampling and not attacker-side draws.
    Gate and measurement counts cover only the two parties' protocol steps.
    """

    classical_bits_verifier: int = 0
    classical_bits_other: int = 0
    gates: dict[str, int] = field(
        default_factory=lambda: {"H": 0, "X": 0, "Z": 0, "CNOT": 0}
    )
    measurements: int = 0
    rng_draws: int = 0
    pairs_consumed: int = 0

    def total_classical_bits(self) -> int:
        return self.classical_bits_verifier + self.classical_bits_other

    def merge(self, other: "ResourceLedger") -> None:
        self.classical_bits_verifier += other.classical_bits_verifier
        self.classical_bits_other += other.classical_bits_other
        for kind, count in other.gates.items():
            self.gates[kind] = self.gates.get(kind, 0) + count
        self.measurements += other.measurements
        self.rng_draws += other.rng_draws
        self.pairs_consumed += other.pairs_consumed


@dataclass
class RoundTranscript:
    """Protocol-visible values of one round.

    Only the active protocol's fields are populated. Bits that travel over
    the classical channel (b, y, b1, b2) are recorded as the Verifier
    received them, i.e. after any attacker substitution.
    """

    protocol: ProtocolKind
    pair_ids: tuple[PairId, ...]
    x: int | None = None
    y: int | None = None
    a: int | None = None
    b: int | None = None
    s: int | None = None
    b1: int | None = None
    b2: int | None = None
    v: int | None = None
    v1: int | None = None
    v2: int | None = None
    messages: tuple[ClassicalMessage, ...] = ()


@dataclass
class RoundResult:
    detected: bool
    transcript: RoundTranscript
    ledger: ResourceLedger


@dataclass
class SessionResult:
    rounds: list[RoundResult]
    m: int
    detected_any: bool
    pairs_sacrificed: int


def _checked_record(
    net: Network, pid: PairId, verifier: NodeId, other: NodeId
) -> EntangledPairRecord:
    rec = consume_pair(net, pid)
    if rec.owners() != frozenset((verifier, other)):
        raise ValueError(f"pair {pid} is not shared by {verifier!r} and {other!r}")
    return rec


def _reply(
    policy: AttackerPolicy | None,
    honest_bits: tuple[int, ...],
    r: RandomSource,
) -> tuple[int, ...]:
    if policy is None:
        return honest_bits
    return attacker_classical_reply(policy, honest_bits, r)


def decide_na2010(x: int, y: int, assumed: BellVariant, a: int, b: int) -> int:
    """NA2010 verdict bit.

    v = 1 iff (x=y=0, i=j, a!=b) or (x=y=0, i!=j, a=b) or
    (x=y=1, i=0, a!=b) or (x=y=1, i=1, a=b); in any other case the
    Verifier cannot decide and v = 0.
    """
    i, j = assumed
    if x == 0 and y == 0:
        return int(a != b) if i == j else int(a == b)
    if x == 1 and y == 1:
        return int(a != b) if i == 0 else int(a == b)
    return 0


def na2010_round(
    net: Network,
    verifier: NodeId,
    other: NodeId,
    pair: PairId,
    r: RandomSource,
    policy: AttackerPolicy | None = None,
) -> RoundResult:
    """One NA2010 round over one shared pair."""
    led = ResourceLedger()
    rec = _checked_record(net, pair, verifier, other)
    led.pairs_consumed = 1
    vq, oq = rec.half_of(verifier), rec.half_of(other)
    state = rec.joint

    x = r.bit()
    led.rng_draws += 1
    if x:
        state = apply_gate(state, "H", vq)
        led.gates["H"] += 1
    a_bit, state = measure_computational(state, vq, r)
    led.measurements += 1

    msg_id = ClassicalMessage(verifier, other, pair_id_bits(net, pair), net.id_bits)
    send_classical(net, msg_id)
    led.classical_bits_verifier += net.id_bits

    y = r.bit()
    led.rng_draws += 1
    if y:
        state = apply_gate(state, "H", oq)
        led.gates["H"] += 1
    b_bit, state = measure_computational(state, oq, r)
    led.measurements += 1

    rb, ry = _reply(policy, (b_bit, y), r)
    msg_reply = ClassicalMessage(other, verifier, (rb, ry), 2)
    send_classical(net, msg_reply)
    led.classical_bits_other += 2

    v = decide_na2010(x, ry, rec.assumed, a_bit, rb)
    transcript = RoundTranscript(
        protocol=NA2010,
        pair_ids=(pair,),
        x=x,
        y=ry,
        a=a_bit,
        b=rb,
        v=v,
        messages=(msg_id, msg_reply),
    )
    return RoundResult(detected=bool(v), transcript=transcript, ledger=led)


def ac1_round(
    net: Network,
    verifier: NodeId,
    other: NodeId,
    pair: PairId,
    r: RandomSource,
    policy: AttackerPolicy | None = None,
) -> RoundResult:
    """One AC1 round: teleport |0> or |+> back over the pair under test."""
    led = ResourceLedger()
    rec = _checked_record(net, pair, verifier, other)
    led.pairs_consumed = 1
    vq, oq = rec.half_of(verifier), rec.half_of(other)

    s = r.bit()
    led.rng_draws += 1
    msg_id = ClassicalMessage(
        verifier, other, pair_id_bits(net, pair) + (s,), net.id_bits + 1
    )
    send_classical(net, msg_id)
    led.classical_bits_verifier += net.id_bits + 1

    # The Other Party prepares the payload directly (preparation is its own
    # cost item, not an H gate application) and teleports it.
    payload = _KET_PLUS if s else _KET0
    reg = product(rec.joint, payload)  # qubits: 0,1 pair halves; 2 payload
    reg = apply_cnot(reg, 2, oq)
    led.gates["CNOT"] += 1
    reg = apply_gate(reg, "H", 2)
    led.gates["H"] += 1
    b1, reg = measure_computational(reg, 2, r)
    led.measurements += 1
    b2, reg = measure_computational(reg, oq, r)
    led.measurements += 1

    rb1, rb2 = _reply(policy, (b1, b2), r)
    msg_reply = ClassicalMessage(other, verifier, (rb1, rb2), 2)
    send_classical(net, msg_reply)
    led.classical_bits_other += 2

    op = correction_operator(rec.assumed, rb1, rb2)
    if op.z_exp:
        reg = apply_gate(reg, "Z", vq)
        led.gates["Z"] += 1
    if op.x_exp:
        reg = apply_gate(reg, "X", vq)
        led.gates["X"] += 1
    if s:
        reg = apply_gate(reg, "H", vq)
        led.gates["H"] += 1
    v, reg = measure_computational(reg, vq, r)
    led.measurements += 1

    transcript = RoundTranscript(
        protocol=AC1,
        pair_ids=(pair,),
        s=s,
        b1=rb1,
        b2=rb2,
        v=v,
        messages=(msg_id, msg_reply),
    )
    return RoundResult(detected=v == 1, transcript=transcript, ledger=led)


def decide_ac2(assumed: BellVariant, v1: int, v2: int) -> bool:
    """AC2 verdict: detected unless (v1, v2) equals the assumed variant.

    Each verdict-table row is a disjunction over the three non-matching
    outcomes, which reduces to exactly this comparison.
    """
    return (v1, v2) != (assumed.i, assumed.j)


def ac2_round(
    net: Network,
    verifier: NodeId,
    other: NodeId,
    pair_checked: PairId,
    pair_channel: PairId,
    r: RandomSource,
    policy: AttackerPolicy | None = None,
) -> RoundResult:
    """One AC2 round: teleport the checked pair's remote half, then verify."""
    led = ResourceLedger()
    rec_c = _checked_record(net, pair_checked, verifier, other)
    rec_ch = _checked_record(net, pair_channel, verifier, other)
    led.pairs_consumed = 2

    # Ids of the teleportation (channel) pair first, then the checked pair.
    msg_id = ClassicalMessage(
        verifier,
        other,
        pair_id_bits(net, pair_channel) + pair_id_bits(net, pair_checked),
        2 * net.id_bits,
    )
    send_classical(net, msg_id)
    led.classical_bits_verifier += 2 * net.id_bits

    # Register layout: qubits 0,1 = checked pair halves; 2,3 = channel halves.
    q1 = rec_c.half_of(verifier)
    q2 = rec_c.half_of(other)
    sq = 2 + rec_ch.half_of(other)
    rq = 2 + rec_ch.half_of(verifier)
    reg = product(rec_c.joint, rec_ch.joint)

    reg = apply_cnot(reg, q2, sq)
    led.gates["CNOT"] += 1
    reg = apply_gate(reg, "H", q2)
    led.gates["H"] += 1
    b1, reg = measure_computational(reg, q2, r)
    led.measurements += 1
    b2, reg = measure_computational(reg, sq, r)
    led.measurements += 1

    rb1, rb2 = _reply(policy, (b1, b2), r)
    msg_reply = ClassicalMessage(other, verifier, (rb1, rb2), 2)
    send_classical(net, msg_reply)
    led.classical_bits_other += 2

    op = correction_operator(rec_ch.assumed, rb1, rb2)
    if op.z_exp:
        reg = apply_gate(reg, "Z", rq)
        led.gates["Z"] += 1
    if op.x_exp:
        reg = apply_gate(reg, "X", rq)
        led.gates["X"] += 1

    # Verification circuit on (q1, received qubit), q1 as control.
    reg = apply_cnot(reg, q1, rq)
    led.gates["CNOT"] += 1
    reg = apply_gate(reg, "H", q1)
    led.gates["H"] += 1
    reg = apply_cnot(reg, q1, rq)
    led.gates["CNOT"] += 1
    v1, reg = measure_computational(reg, q1, r)
    led.measurements += 1
    v2, reg = measure_computational(reg, rq, r)
    led.measurements += 1

    detected = decide_ac2(rec_c.assumed, v1, v2)
    transcript = RoundTranscript(
        protocol=AC2,
        pair_ids=(pair_checked, pair_channel),
        b1=rb1,
        b2=rb2,
        v1=v1,
        v2=v2,
        messages=(msg_id, msg_reply),
    )
    return RoundResult(detected=detected, transcript=transcript, ledger=led)


def run_verification(
    net: Network,
    kind: ProtocolKind,
    verifier: NodeId,
    other: NodeId,
    m: int,
    r: RandomSource,
    policy: AttackerPolicy | None = None,
) -> SessionResult:
    """Run m independent rounds of one protocol; fail fast if pairs are short.

    Pairs are taken in id order. AC2 consumes two per round: the first of
    each id pair is checked, the second serves as teleportation channel.
    """
    if kind not in PROTOCOLS:
        raise ValueError(f"unknown protocol {kind!r}")
    if m < 1:
        raise ValueError("m must be at least 1")
    need = 2 * m if kind == AC2 else m
    available = sorted(net.unchecked_ids({verifier, other}))
    if len(available) < need:
        raise ValueError(
            f"insufficient pairs: {kind} with m={m} needs {need}, "
            f"have {len(available)}"
        )
    rounds: list[RoundResult] = []
    for k in range(m):
        if kind == NA2010:
            res = na2010_round(net, verifier, other, available[k], r, policy)
        elif kind == AC1:
            res = ac1_round(net, verifier, other, available[k], r, policy)
        else:
            res = ac2_round(
                net, verifier, other, available[2 * k], available[2 * k + 1], r, policy
            )
        rounds.append(res)
    return SessionResult(
        rounds=rounds,
        m=m,
        detected_any=any(res.detected for res in rounds),
        pairs_sacrificed=sum(res.ledger.pairs_consumed for res in rounds),
    )


def closed_form_pm(kind: ProtocolKind, m: int) -> float:
    """Closed-form session detection probability after m rounds."""
    if m < 1:
        raise ValueError("m must be at least 1")
    base = {NA2010: 7.0 / 8.0, AC1: 3.0 / 4.0, AC2: 1.0 / 4.0}[kind]
    return 1.0 - base**m


def _check_unit(*amp_pairs: tuple[complex, complex]) -> None:
    for a, b in amp_pairs:
        if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > NORM_TOL:
            raise ValueError("amplitudes are not normalized")


def ac1_detection_prob(alpha: complex, beta: complex) -> float:
    """AC1 verdict-stage detection probability for a collapsed Verifier-side
    qubit alpha|0> + beta|1>: p = (|beta|^2 + |alpha-beta|^2 / 2) / 2."""
    _check_unit((alpha, beta))
    return (abs(beta) ** 2 + abs(alpha - beta) ** 2 / 2.0) / 2.0


def ac2_joint_state(
    alpha: complex, beta: complex, gamma: complex, delta: complex
) -> PureState:
    """Output of the AC2 verification circuit on the collapsed product input
    (alpha|0>+beta|1>) (x) (gamma|0>+delta|1>)."""
    _check_unit((alpha, beta), (gamma, delta))
    return np.array(
        [
            alpha * gamma + beta * delta,
            alpha * delta + beta * gamma,
            alpha * delta - beta * gamma,
            alpha * gamma - beta * delta,
        ],
        dtype=np.complex128,
    ) * _SQRT2_INV


def ac2_detection_prob(
    alpha: complex, beta: complex, gamma: complex, delta: complex
) -> float:
    """AC2 verdict-stage detection probability for collapsed inputs (assumed
    beta_00): p = 1 - |alpha gamma + beta delta|^2 / 2."""
    _check_unit((alpha, beta), (gamma, delta))
    return 1.0 - abs(alpha * gamma + beta * delta) ** 2 / 2.0


def ac1_decision_round(chi: PureState, r: RandomSource) -> int:
    """Simulate the AC1 verdict stage on a given Verifier-side qubit state:
    draw s, apply H^s, measure. Returns the verdict bit v."""
    if num_qubits(chi) != 1:
        raise ValueError("decision stage takes a single-qubit state")
    s = r.bit()
    state = apply_gate(chi, "H", 0) if s else chi
    v, _ = measure_computational(state, 0, r)
    return v


def _ac2_verification_circuit(first: PureState, second: PureState) -> PureState:
    if num_qubits(first) != 1 or num_qubits(second) != 1:
        raise ValueError("decision stage takes two single-qubit states")
    reg = product(first, second)
    reg = apply_cnot(reg, 0, 1)
    reg = apply_gate(reg, "H", 0)
    reg = apply_cnot(reg, 0, 1)
    return reg


def ac2_decision_round(
    first: PureState, second: PureState, r: RandomSource
) -> tuple[int, int]:
    """Simulate the AC2 verification circuit on two collapsed qubits and
    measure both. Returns (v1, v2)."""
    reg = _ac2_verification_circuit(first, second)
    v1, reg = measure_computational(reg, 0, r)
    v2, _ = measure_computational(reg, 1, r)
    return v1, v2


def ac2_decision_probs(first: PureState, second: PureState) -> np.ndarray:
    """Exact outcome distribution over (v1, v2) = (00, 01, 10, 11) of the
    AC2 verification circuit on two collapsed qubits."""
    reg = _ac2_verification_circuit(first, second)
    return np.abs(reg) ** 2
