"""Projective settings, Bell-like bases, setting transforms, JSON round trips."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steerlab import (
    BellLikeBasis,
    DimensionError,
    MeasurementSetting,
    ParseError,
    SteeringProtocol,
    UnsupportedSettingError,
    ValidationError,
    bell_like_setting,
    completeness_check,
    computational_family,
    load_measurement,
    load_protocol,
    pauli_axis_basis,
    random_rank1_setting,
    save_measurement,
    save_protocol,
    settings_equal,
    tensor_protocol,
    tensor_setting,
    transformation_matrix,
)
from steerlab.linalg import outer, phase_equal


class TestPauliAndTensor:
    def test_pauli_bases_frozen(self):
        zp, zm = pauli_axis_basis("z")
        np.testing.assert_allclose(zp, [1, 0], atol=1e-15)
        np.testing.assert_allclose(zm, [0, 1], atol=1e-15)
        xp, xm = pauli_axis_basis("x")
        np.testing.assert_allclose(xp, np.array([1, 1]) / np.sqrt(2), atol=1e-15)
        np.testing.assert_allclose(xm, np.array([1, -1]) / np.sqrt(2), atol=1e-15)
        yp, ym = pauli_axis_basis("y")
        np.testing.assert_allclose(yp, np.array([1, 1j]) / np.sqrt(2), atol=1e-15)
        np.testing.assert_allclose(ym, np.array([1, -1j]) / np.sqrt(2), atol=1e-15)

    def test_pauli_rejects_unknown_axis(self):
        with pytest.raises(UnsupportedSettingError):
            pauli_axis_basis("w")

    def test_tensor_setting_z(self):
        s = tensor_setting("z")
        assert s.outcomes == ("0", "1")
        np.testing.assert_allclose(s.projectors[0], np.diag([1.0, 0.0]), atol=1e-15)
        np.testing.assert_allclose(s.projectors[1], np.diag([0.0, 1.0]), atol=1e-15)

    def test_tensor_setting_yx_outcome_map(self):
        s = tensor_setting("yx")
        assert s.outcomes == ("00", "01", "10", "11")
        yp, ym = pauli_axis_basis("y")
        xp, xm = pauli_axis_basis("x")
        # bit 0 picks qubit 0's eigenvector, bit 1 qubit 1's
        np.testing.assert_allclose(s.projectors[0b10], outer(np.kron(ym, xp)), atol=1e-12)

    def test_completeness(self):
        for axes in ("z", "x", "y", "zz", "yx", "xyz"):
            assert completeness_check(tensor_setting(axes)) < 1e-12

    def test_rank2_projectors_allowed_but_not_rank1(self):
        p = np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex)
        s = MeasurementSetting(
            label="coarse", m_qubits=2, outcomes=("a", "b"),
            projectors=(p, np.eye(4) - p),
        )
        with pytest.raises(UnsupportedSettingError):
            s.rank1_vectors()

    def test_rejects_non_idempotent(self):
        m = np.diag([0.5, 0.5]).astype(complex)
        with pytest.raises(ValidationError):
            MeasurementSetting(label="bad", m_qubits=1, outcomes=("a", "b"),
                               projectors=(m, np.eye(2) - m))

    def test_rejects_incomplete(self):
        p = np.diag([1.0, 0.0]).astype(complex)
        with pytest.raises(ValidationError):
            MeasurementSetting(label="bad", m_qubits=1, outcomes=("a",), projectors=(p,))

    def test_rejects_duplicate_outcome_labels(self):
        s = tensor_setting("z")
        with pytest.raises(ValidationError):
            MeasurementSetting(label="bad", m_qubits=1, outcomes=("0", "0"),
                               projectors=s.projectors)


class TestBellLike:
    def test_basis_validation(self):
        fam = ((np.array([1.0, 0.0]), np.array([1.0, 0.0])),)
        with pytest.raises(ValidationError):
            BellLikeBasis(0.3, fam)

    def test_quarter_turn_single_qubit(self):
        s = bell_like_setting(BellLikeBasis(np.pi / 4, computational_family(1)))
        xp, xm = pauli_axis_basis("x")
        np.testing.assert_allclose(s.projectors[0], outer(xp), atol=1e-12)
        np.testing.assert_allclose(s.projectors[1], outer(xm), atol=1e-12)

    def test_rotation_vectors_frozen(self):
        beta = 0.3
        s = bell_like_setting(BellLikeBasis(beta, computational_family(1)))
        v = s.rank1_vectors()
        np.testing.assert_allclose(v[0], [np.cos(beta), np.sin(beta)], atol=1e-12)
        # minus vector sin b |0> - cos b |1>, up to canonical phase
        got = v[1] if v[1][0].real > 0 else -v[1]
        np.testing.assert_allclose(got, [np.sin(beta), -np.cos(beta)], atol=1e-12)

    def test_outcome_order_plus_block_then_minus_block(self):
        fam = computational_family(2)
        s = bell_like_setting(BellLikeBasis(0.0, fam))
        v = s.rank1_vectors()
        # beta=0 reproduces the family itself: plus vectors first in slot
        # order, then the minus vectors in the same slot order
        for i, (plus, minus) in enumerate(fam):
            assert phase_equal(v[i], plus, 1e-12)
            assert phase_equal(v[i + len(fam)], minus, 1e-12)

    @settings(max_examples=30)
    @given(st.floats(0.0, np.pi), st.integers(1, 3))
    def test_completeness_property(self, beta, m):
        s = bell_like_setting(BellLikeBasis(beta, computational_family(m)))
        assert completeness_check(s) < 1e-12

    def test_with_beta(self):
        b = BellLikeBasis(0.2, computational_family(1), family_label="computational")
        b2 = b.with_beta(1.0)
        assert b2.beta == 1.0
        assert b2.family_label == "computational"


class TestTransformation:
    def test_identity_on_same_setting(self):
        s = tensor_setting("z")
        np.testing.assert_allclose(transformation_matrix(s, s), np.eye(2), atol=1e-12)

    def test_z_to_x_magnitudes(self):
        v = transformation_matrix(tensor_setting("z"), tensor_setting("x"))
        np.testing.assert_allclose(np.abs(v), np.full((2, 2), 1 / np.sqrt(2)), atol=1e-12)

    def test_block_pattern_shared_family(self):
        fam = computational_family(2)
        b1, b2 = 0.7, 0.2
        s1 = bell_like_setting(BellLikeBasis(b1, fam))
        s2 = bell_like_setting(BellLikeBasis(b2, fam))
        v = transformation_matrix(s1, s2)
        eye = np.eye(2)
        d = b1 - b2
        want = np.block([[np.cos(d) * eye, np.sin(d) * eye],
                         [-np.sin(d) * eye, np.cos(d) * eye]])
        np.testing.assert_allclose(v, want, atol=1e-12)
        np.testing.assert_allclose(v @ v.conj().T, np.eye(4), atol=1e-12)

    def test_requires_rank1(self):
        p = np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex)
        coarse = MeasurementSetting(label="c", m_qubits=2, outcomes=("a", "b"),
                                    projectors=(p, np.eye(4) - p))
        with pytest.raises(UnsupportedSettingError):
            transformation_matrix(coarse, tensor_setting("zz"))


class TestEqualityAndProtocols:
    def test_settings_equal_ignores_outcome_order(self):
        s = tensor_setting("z")
        flipped = MeasurementSetting(
            label="z-flip", m_qubits=1, outcomes=("1", "0"),
            projectors=(s.projectors[1], s.projectors[0]),
        )
        assert settings_equal(s, flipped)

    def test_settings_not_equal(self):
        assert not settings_equal(tensor_setting("z"), tensor_setting("x"))

    def test_protocol_rejects_identical_settings(self):
        with pytest.raises(ValidationError):
            SteeringProtocol(alice_qubits=1, setting_1=tensor_setting("z"),
                             setting_2=tensor_setting("z"))

    def test_protocol_rejects_alice_taking_everything(self):
        with pytest.raises(DimensionError):
            tensor_protocol("z", "x", n_qubits=1)

    def test_random_setting_valid_and_deterministic(self):
        a = random_rank1_setting(2, np.random.default_rng(42))
        b = random_rank1_setting(2, np.random.default_rng(42))
        assert completeness_check(a) < 1e-10
        for pa, pb in zip(a.projectors, b.projectors):
            np.testing.assert_array_equal(pa, pb)


class TestJsonRoundTrip:
    def test_tensor_pauli_round_trip(self):
        s = tensor_setting("yx")
        back = load_measurement(json.dumps(save_measurement(s)))
        assert settings_equal(s, back)

    def test_projectors_round_trip(self):
        s = random_rank1_setting(1, np.random.default_rng(7))
        back = load_measurement(save_measurement(s))
        assert settings_equal(s, back)

    def test_bell_like_computational_round_trip(self):
        s = bell_like_setting(
            BellLikeBasis(0.37, computational_family(2), family_label="computational")
        )
        doc = save_measurement(s)
        assert doc["type"] == "bell_like"
        assert doc["phi_family"] == "computational"
        back = load_measurement(doc)
        assert settings_equal(s, back)
        assert back.bell_like is not None
        assert back.bell_like.beta == pytest.approx(0.37)

    def test_bell_like_explicit_family_round_trip(self):
        e = np.eye(4, dtype=complex)
        fam = ((e[0], e[3]), (e[1], e[2]))
        s = bell_like_setting(BellLikeBasis(0.9, fam))
        back = load_measurement(save_measurement(s))
        assert settings_equal(s, back)

    def test_protocol_round_trip(self):
        p = tensor_protocol("zz", "yx", n_qubits=4)
        back = load_protocol(json.dumps(save_protocol(p)))
        assert back.alice_qubits == 2
        assert settings_equal(p.setting_1, back.setting_1)
        assert settings_equal(p.setting_2, back.setting_2)

    @pytest.mark.parametrize(
        "doc,fragment",
        [
            ('{"type": "tensor_pauli"}', "axes"),
            ('{"type": "tensor_pauli", "axes": "q"}', "axes"),
            ('{"type": "bell_like"}', "beta"),
            ('{"type": "unknown"}', "type"),
        ],
    )
    def test_measurement_parse_errors(self, doc, fragment):
        with pytest.raises(ParseError) as err:
            load_measurement(doc)
        assert fragment in str(err.value)

    def test_protocol_parse_error_path(self):
        doc = {"alice_qubits": 1, "setting_1": {"type": "tensor_pauli", "axes": "z"}}
        with pytest.raises(ParseError) as err:
            load_protocol(doc)
        assert "setting_2" in str(err.value)
