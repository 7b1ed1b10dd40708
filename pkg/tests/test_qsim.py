"""State-vector simulator: gates, measurement, Bell machinery, randomness."""
from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ScriptedSource, VARIANTS, unit_bases, unit_states
from entverify import (
    COMPUTATIONAL,
    DIAGONAL,
    MAX_QUBITS,
    BellVariant,
    RandomSource,
    SingleQubitBasis,
    apply_cnot,
    apply_gate,
    bell_measure,
    bell_state,
    branch_probabilities,
    fidelity,
    measure_computational,
    measure_in_basis,
    product,
    zero_state,
)
from entverify.qsim import dump_state, num_qubits

_SQ2 = 1.0 / np.sqrt(2.0)

# ---------------------------------------------------------------- states


def test_zero_state_is_all_zeros_ket():
    s = zero_state(3)
    assert s.shape == (8,)
    assert s[0] == 1.0 and not s[1:].any()


def test_zero_state_rejects_out_of_range_counts():
    for n in (0, MAX_QUBITS + 1):
        with pytest.raises(ValueError):
            zero_state(n)


def test_bell_state_table_is_frozen():
    expected = {
        (0, 0): [_SQ2, 0, 0, _SQ2],
        (0, 1): [0, _SQ2, _SQ2, 0],
        (1, 0): [0, -_SQ2, _SQ2, 0],
        (1, 1): [_SQ2, 0, 0, -_SQ2],
    }
    for v, amps in expected.items():
        np.testing.assert_allclose(bell_state(v), amps, atol=1e-15)


def test_bell_states_are_orthonormal():
    for u in VARIANTS:
        for w in VARIANTS:
            ip = np.vdot(bell_state(u), bell_state(w))
            assert abs(ip - (1.0 if u == w else 0.0)) < 1e-12


def test_product_is_big_endian():
    # |0> (x) |1> = |01> -> index 1
    one = np.array([0, 1], dtype=np.complex128)
    zero = np.array([1, 0], dtype=np.complex128)
    np.testing.assert_allclose(product(zero, one), [0, 1, 0, 0])
    np.testing.assert_allclose(product(one, zero), [0, 0, 1, 0])


def test_product_respects_qubit_cap():
    with pytest.raises(ValueError):
        product(zero_state(5), zero_state(4))


def test_num_qubits_rejects_non_power_of_two():
    with pytest.raises(ValueError):
        num_qubits(np.ones(3, dtype=np.complex128))


# ---------------------------------------------------------------- gates


def test_hadamard_on_each_basis_state():
    h0 = apply_gate(np.array([1, 0], dtype=np.complex128), "H", 0)
    h1 = apply_gate(np.array([0, 1], dtype=np.complex128), "H", 0)
    np.testing.assert_allclose(h0, [_SQ2, _SQ2])
    np.testing.assert_allclose(h1, [_SQ2, -_SQ2])


def test_x_and_z_on_target_qubit_only():
    s = product(np.array([1, 0], dtype=np.complex128), np.array([0, 1], dtype=np.complex128))
    np.testing.assert_allclose(apply_gate(s, "X", 0), [0, 0, 0, 1])  # |01> -> |11>
    np.testing.assert_allclose(apply_gate(s, "Z", 1), [0, -1, 0, 0])  # phase on |.1>


def test_unknown_gate_and_bad_target_raise():
    s = zero_state(2)
    with pytest.raises(ValueError):
        apply_gate(s, "T", 0)
    with pytest.raises(IndexError):
        apply_gate(s, "H", 2)


def test_cnot_truth_table():
    for c_in, t_in, t_out in ((0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)):
        s = zero_state(2)
        idx_in = (c_in << 1) | t_in
        s = np.zeros(4, dtype=np.complex128)
        s[idx_in] = 1.0
        out = apply_cnot(s, 0, 1)
        assert out[(c_in << 1) | t_out] == 1.0


def test_cnot_reversed_roles_and_validation():
    s = np.zeros(4, dtype=np.complex128)
    s[1] = 1.0  # |01>: qubit 1 set
    out = apply_cnot(s, 1, 0)
    assert out[3] == 1.0  # control is qubit 1
    with pytest.raises(ValueError):
        apply_cnot(s, 0, 0)
    with pytest.raises(IndexError):
        apply_cnot(s, 0, 5)


@given(unit_states(3), st.sampled_from(["H", "X", "Z"]), st.integers(0, 2))
def test_gates_preserve_norm_and_are_involutions(s, g, target):
    out = apply_gate(s, g, target)
    assert abs(np.linalg.norm(out) - 1.0) < 1e-9
    back = apply_gate(out, g, target)
    np.testing.assert_allclose(back, s, atol=1e-12)


@given(unit_states(3), st.integers(0, 2), st.integers(0, 2))
def test_cnot_is_self_inverse(s, control, target):
    if control == target:
        return
    out = apply_cnot(apply_cnot(s, control, target), control, target)
    np.testing.assert_allclose(out, s, atol=1e-12)


def test_gates_do_not_mutate_input():
    s = bell_state((0, 0))
    before = s.copy()
    apply_gate(s, "H", 0)
    apply_cnot(s, 0, 1)
    np.testing.assert_array_equal(s, before)


# ---------------------------------------------------------------- measurement


def test_branch_probabilities_on_bell_halves():
    p0, p1 = branch_probabilities(bell_state((0, 0)), 0)
    assert abs(p0 - 0.5) < 1e-12 and abs(p1 - 0.5) < 1e-12


@given(unit_states(3), st.integers(0, 2))
def test_branch_probabilities_sum_to_one(s, target):
    p0, p1 = branch_probabilities(s, target)
    assert abs(p0 + p1 - 1.0) < 1e-9


def test_forced_branch_consumes_no_draw():
    one = np.array([0, 1], dtype=np.complex128)
    r = ScriptedSource([])  # any draw would raise IndexError
    bit, post = measure_computational(one, 0, r)
    assert bit == 1 and r.consumed == 0
    np.testing.assert_allclose(post, one)


def test_measurement_draw_selects_branch_by_threshold():
    plus = apply_gate(np.array([1, 0], dtype=np.complex128), "H", 0)
    bit0, post0 = measure_computational(plus, 0, ScriptedSource([0.3]))
    bit1, post1 = measure_computational(plus, 0, ScriptedSource([0.7]))
    assert (bit0, bit1) == (0, 1)
    np.testing.assert_allclose(post0, [1, 0], atol=1e-12)
    np.testing.assert_allclose(post1, [0, 1], atol=1e-12)


@given(unit_states(3), st.integers(0, 2), st.floats(0.001, 0.999))
def test_collapsed_state_is_normalized_and_consistent(s, target, u):
    bit, post = measure_computational(s, target, ScriptedSource([u]))
    assert abs(np.linalg.norm(post) - 1.0) < 1e-9
    p0, p1 = branch_probabilities(post, target)
    assert (p1 if bit == 1 else p0) > 1.0 - 1e-9


def test_measure_in_basis_diagonal_is_deterministic_on_plus():
    plus = apply_gate(np.array([1, 0], dtype=np.complex128), "H", 0)
    r = ScriptedSource([])
    bit, post = measure_in_basis(plus, 0, DIAGONAL, r)
    assert bit == 0 and r.consumed == 0
    np.testing.assert_allclose(post, plus, atol=1e-12)


def test_measure_in_basis_computational_matches_plain_measurement():
    s = bell_state((0, 1))
    b1, p1 = measure_in_basis(s, 0, COMPUTATIONAL, ScriptedSource([0.3]))
    b2, p2 = measure_computational(s, 0, ScriptedSource([0.3]))
    assert b1 == b2
    np.testing.assert_allclose(p1, p2, atol=1e-12)


def test_measure_in_basis_rejects_unnormalized_basis():
    with pytest.raises(ValueError):
        measure_in_basis(zero_state(1), 0, SingleQubitBasis(1.0, 1.0), ScriptedSource([0.3]))


@given(unit_states(2), unit_bases(), st.floats(0.001, 0.999))
def test_measure_in_basis_outcome_probability_is_overlap(s, basis, u):
    # qubit 0 of a 2-qubit state; P(outcome 0) = sum over the other qubit
    # of |<u0 x e_k | s>|^2
    m = basis.matrix()
    u0 = m[:, 0]
    proj = np.einsum("i,ij->j", u0.conj(), s.reshape(2, 2))
    p0 = float(np.sum(np.abs(proj) ** 2))
    bit, _ = measure_in_basis(s, 0, basis, ScriptedSource([u]))
    if p0 < 1e-12:
        assert bit == 1
    elif p0 > 1.0 - 1e-12:
        assert bit == 0
    else:
        assert bit == (0 if u < p0 else 1)


def test_bell_measure_identifies_each_bell_state_without_draws():
    for v in VARIANTS:
        r = ScriptedSource([])
        measured, _ = bell_measure(bell_state(v), 0, 1, r)
        assert measured == v
        assert r.consumed == 0


def test_bell_measure_on_product_state_splits_evenly():
    # |00> = (beta_00 + beta_11)/sqrt2: outcomes (0,0) and (1,1) only
    s = zero_state(2)
    seen = set()
    for u in (0.2, 0.8):
        measured, post = bell_measure(s, 0, 1, ScriptedSource([u, 0.5]))
        seen.add(tuple(measured))
        assert abs(np.linalg.norm(post) - 1.0) < 1e-12
    assert seen == {(0, 0), (1, 1)}


def test_bell_measure_validates_distinct_qubits():
    with pytest.raises(ValueError):
        bell_measure(bell_state((0, 0)), 1, 1, ScriptedSource([0.5]))


# ---------------------------------------------------------------- misc


def test_fidelity_bounds_and_phase_invariance():
    s = bell_state((0, 0))
    assert abs(fidelity(s, s) - 1.0) < 1e-12
    assert abs(fidelity(s, -s) - 1.0) < 1e-12
    assert fidelity(bell_state((0, 0)), bell_state((1, 1))) < 1e-12


def test_dump_state_lists_index_and_components():
    text = dump_state(np.array([_SQ2, 1j * _SQ2], dtype=np.complex128))
    lines = [ln.split(",") for ln in text.splitlines()]
    assert len(lines) == 2
    assert lines[0][0] == "0"
    assert float(lines[1][2]) == pytest.approx(_SQ2)


def test_single_qubit_basis_matrix_is_unitary():
    b = SingleQubitBasis(0.6, 0.8j)
    m = b.matrix()
    np.testing.assert_allclose(m @ m.conj().T, np.eye(2), atol=1e-12)
    assert b.is_normalized()
    assert not SingleQubitBasis(1.0, 1.0).is_normalized()


# ---------------------------------------------------------------- randomness


def test_random_source_streams_are_reproducible():
    a = RandomSource(42).substream(7)
    b = RandomSource(42).substream(7)
    assert [a.uniform() for _ in range(5)] == [b.uniform() for _ in range(5)]


def test_random_source_substreams_differ():
    root = RandomSource(42)
    xs = [root.substream(0).uniform() for _ in range(1)]
    ys = [root.substream(1).uniform() for _ in range(1)]
    assert xs != ys


def test_random_source_path_identifies_stream():
    nested = RandomSource(9).substream(1).substream(2)
    assert nested.path == (1, 2)
    direct = RandomSource(9, (1, 2))
    assert nested.uniform() == direct.uniform()


def test_random_source_bits_are_bits():
    bits = RandomSource(1).bits(64)
    assert len(bits) == 64
    assert set(bits) <= {0, 1}


def test_random_source_bit_balance():
    r = RandomSource(11)
    mean = sum(r.bit() for _ in range(4000)) / 4000
    assert abs(mean - 0.5) < 4 * 0.5 / np.sqrt(4000)
