"""Projective measurement settings on Alice's qubits, plus protocol containers.

A setting is a complete set of orthogonal projectors on 2**M dimensions with
bitstring outcome labels.  Three constructors cover everything the package
needs: per-qubit Pauli product bases, explicit rank-1 vector lists, and the
one-parameter interpolating family built from a fixed pairing of orthonormal
basis vectors.
"""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import config
from ._schema import (
    complex_entry,
    expect_int,
    expect_list,
    expect_mapping,
    expect_number,
    parse_vector,
)
from .errors import (
    DimensionError,
    ParseError,
    UnsupportedSettingError,
    ValidationError,
)
from .linalg import (
    ComplexArray,
    as_complex,
    canonical_phase,
    hermitian_eig,
    is_hermitian,
    n_qubits_of,
    outer,
    phase_equal,
)

_PAULI_BASES = {
    "z": (np.array([1.0, 0.0], dtype=np.complex128), np.array([0.0, 1.0], dtype=np.complex128)),
    "x": (
        np.array([1.0, 1.0], dtype=np.complex128) / np.sqrt(2.0),
        np.array([1.0, -1.0], dtype=np.complex128) / np.sqrt(2.0),
    ),
    "y": (
        np.array([1.0, 1.0j], dtype=np.complex128) / np.sqrt(2.0),
        np.array([1.0, -1.0j], dtype=np.complex128) / np.sqrt(2.0),
    ),
}


def pauli_axis_basis(axis: str) -> tuple[ComplexArray, ComplexArray]:
    """(+1, -1) eigenvectors of the named Pauli operator, axis in {'x','y','z'}."""
    try:
        plus, minus = _PAULI_BASES[axis]
    except (KeyError, TypeError):
        raise UnsupportedSettingError(
            f"unknown Pauli axis {axis!r}, expected one of 'x', 'y', 'z'"
        ) from None
    return plus.copy(), minus.copy()


def bitstring(index: int, width: int) -> str:
    return format(index, f"0{width}b")


@dataclass(frozen=True)
class BellLikeBasis:
    """Angle-parametrized basis over a fixed pairing of orthonormal vectors.

    ``pairs[i]`` holds the two partner vectors of slot i; the derived setting
    mixes each pair with cos(beta) / sin(beta) weights.  All 2**M base vectors
    must be mutually orthonormal.
    """

    beta: float
    pairs: tuple[tuple[ComplexArray, ComplexArray], ...]
    family_label: str | None = None

    def __post_init__(self) -> None:
        pairs = tuple(
            (as_complex(p).ravel(), as_complex(m).ravel()) for p, m in self.pairs
        )
        if not pairs:
            raise ValidationError("basis needs at least one pair")
        flat = [v for pair in pairs for v in pair]
        dim = flat[0].shape[0]
        if any(v.shape[0] != dim for v in flat):
            raise DimensionError("family vectors have mixed dimensions")
        m = n_qubits_of(dim)
        if len(flat) != dim:
            raise DimensionError(
                f"family has {len(flat)} vectors, expected {dim} for {m} qubits"
            )
        gram = np.array([[np.vdot(a, b) for b in flat] for a in flat])
        if np.max(np.abs(gram - np.eye(dim))) > 1e-10:
            raise ValidationError("family vectors are not orthonormal within 1e-10")
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "pairs", pairs)

    @property
    def m_qubits(self) -> int:
        return n_qubits_of(2 * len(self.pairs))

    @property
    def n_slots(self) -> int:
        return len(self.pairs)

    def with_beta(self, beta: float) -> BellLikeBasis:
        """Same family at a different angle."""
        return BellLikeBasis(beta, self.pairs, self.family_label)


def computational_family(m_qubits: int) -> tuple[tuple[ComplexArray, ComplexArray], ...]:
    """Computational basis paired consecutively: (|0..0>,|0..1>), (|0..10>,|0..11>), ..."""
    if m_qubits < 1:
        raise DimensionError(f"m_qubits must be positive, got {m_qubits}")
    dim = 2**m_qubits
    eye = np.eye(dim, dtype=np.complex128)
    return tuple((eye[:, 2 * i].copy(), eye[:, 2 * i + 1].copy()) for i in range(dim // 2))


def same_family(a: BellLikeBasis, b: BellLikeBasis, tol: float = config.PHASE_TOL) -> bool:
    """Whether two bases are built over the same pairing (up to per-vector phases)."""
    if a.n_slots != b.n_slots:
        return False
    return all(
        phase_equal(pa[0], pb[0], tol) and phase_equal(pa[1], pb[1], tol)
        for pa, pb in zip(a.pairs, b.pairs)
    )


@dataclass(frozen=True)
class MeasurementSetting:
    """Complete projective measurement on Alice's M qubits.

    Invariants, checked on construction: projectors are Hermitian and
    idempotent within 1e-10, pairwise orthogonal, sum to the identity within
    1e-10, and outcome labels are unique M-bit strings.  ``vectors`` is kept
    for rank-1 settings (all constructors in this module produce those) and
    preserves the constructor's sign conventions.
    """

    label: str
    m_qubits: int
    outcomes: tuple[str, ...]
    projectors: tuple[ComplexArray, ...] = field(repr=False)
    vectors: tuple[ComplexArray, ...] | None = field(default=None, repr=False)
    bell_like: BellLikeBasis | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        dim = 2**self.m_qubits
        projectors = tuple(as_complex(p) for p in self.projectors)
        if not projectors:
            raise ValidationError("setting needs at least one projector")
        total = np.zeros((dim, dim), dtype=np.complex128)
        for i, p in enumerate(projectors):
            if p.shape != (dim, dim):
                raise DimensionError(
                    f"projector {i} has shape {p.shape}, expected {(dim, dim)}"
                )
            if not is_hermitian(p, 1e-10):
                raise ValidationError(f"projector {i} is not Hermitian within 1e-10")
            if np.max(np.abs(p @ p - p)) > 1e-10:
                raise ValidationError(f"projector {i} is not idempotent within 1e-10")
            total += p
        for i in range(len(projectors)):
            for j in range(i + 1, len(projectors)):
                if np.max(np.abs(projectors[i] @ projectors[j])) > 1e-10:
                    raise ValidationError(f"projectors {i} and {j} are not orthogonal")
        if np.max(np.abs(total - np.eye(dim))) > 1e-10:
            raise ValidationError("projectors do not sum to the identity within 1e-10")
        outcomes = tuple(str(o) for o in self.outcomes)
        if len(outcomes) != len(projectors):
            raise ValidationError("outcome labels and projectors differ in count")
        if len(set(outcomes)) != len(outcomes):
            raise ValidationError("outcome labels are not unique")
        vectors = self.vectors
        if vectors is None:
            extracted = []
            for p in projectors:
                w, v = hermitian_eig(p)
                if abs(np.trace(p).real - 1.0) > 1e-10:
                    extracted = None
                    break
                extracted.append(canonical_phase(v[:, -1]))
            vectors = tuple(extracted) if extracted is not None else None
        else:
            vectors = tuple(as_complex(v).ravel() for v in vectors)
            if len(vectors) != len(projectors):
                raise ValidationError("vectors and projectors differ in count")
            for i, (v, p) in enumerate(zip(vectors, projectors)):
                if v.shape != (dim,):
                    raise DimensionError(f"vector {i} has shape {v.shape}, expected {(dim,)}")
                if np.max(np.abs(outer(v) - p)) > 1e-9:
                    raise ValidationError(f"vector {i} does not generate projector {i}")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "projectors", projectors)
        object.__setattr__(self, "vectors", vectors)

    @property
    def n_outcomes(self) -> int:
        return len(self.outcomes)

    @property
    def dim(self) -> int:
        return 2**self.m_qubits

    def rank1_vectors(self) -> tuple[ComplexArray, ...]:
        if self.vectors is None:
            raise UnsupportedSettingError(
                f"setting {self.label!r} has projectors of rank > 1; no basis vectors exist"
            )
        return self.vectors


def tensor_setting(axes: str | Sequence[str]) -> MeasurementSetting:
    """Product of single-qubit Pauli measurements, one axis character per qubit.

    Outcome label bit q picks the (+/-) eigenvector of qubit q's axis, so for
    ``axes='yx'`` the outcome ``'01'`` projects onto (y+) tensor (x-).
    """
    axes = "".join(axes)
    if not axes:
        raise DimensionError("axes must name at least one qubit")
    bases = [pauli_axis_basis(c) for c in axes]
    m = len(axes)
    vectors = []
    for idx in range(2**m):
        bits = bitstring(idx, m)
        v = np.array([1.0], dtype=np.complex128)
        for q, bit in enumerate(bits):
            v = np.kron(v, bases[q][int(bit)])
        vectors.append(v)
    return MeasurementSetting(
        label=axes,
        m_qubits=m,
        outcomes=tuple(bitstring(i, m) for i in range(2**m)),
        projectors=tuple(outer(v) for v in vectors),
        vectors=tuple(vectors),
    )


def bell_like_setting(basis: BellLikeBasis) -> MeasurementSetting:
    """Rank-1 setting generated by a pairing at angle beta.

    Slot i contributes the two vectors

        cos(beta) |pair_i plus> + sin(beta) |pair_i minus>
        sin(beta) |pair_i plus> - cos(beta) |pair_i minus>

    ordered plus-block first (slots ascending) then minus-block (slots
    ascending), so the overlap matrix between two angles over one family is
    made of cos/sin multiples of the identity, block by block.
    """
    c, s = np.cos(basis.beta), np.sin(basis.beta)
    plus_vectors = [c * p + s * m for p, m in basis.pairs]
    minus_vectors = [s * p - c * m for p, m in basis.pairs]
    vectors = plus_vectors + minus_vectors
    m_qubits = basis.m_qubits
    return MeasurementSetting(
        label=f"bell_like(beta={basis.beta:.6g})",
        m_qubits=m_qubits,
        outcomes=tuple(bitstring(i, m_qubits) for i in range(2**m_qubits)),
        projectors=tuple(outer(v) for v in vectors),
        vectors=tuple(vectors),
        bell_like=basis,
    )


def completeness_check(setting: MeasurementSetting) -> float:
    """Frobenius distance of sum of projectors from the identity."""
    dim = setting.dim
    total = np.zeros((dim, dim), dtype=np.complex128)
    for p in setting.projectors:
        total += p
    return float(np.linalg.norm(total - np.eye(dim)))


def transformation_matrix(
    setting_1: MeasurementSetting, setting_2: MeasurementSetting
) -> ComplexArray:
    """Overlap matrix V[j, i] = <setting_2 vector j | setting_1 vector i>.

    Both settings must be rank-1 with stored basis vectors; identical settings
    give the identity.
    """
    if setting_1.m_qubits != setting_2.m_qubits:
        raise DimensionError("settings act on different qubit counts")
    v1 = setting_1.rank1_vectors()
    v2 = setting_2.rank1_vectors()
    return np.array([[np.vdot(b, a) for a in v1] for b in v2], dtype=np.complex128)


def settings_equal(
    a: MeasurementSetting, b: MeasurementSetting, tol: float = 1e-10
) -> bool:
    """Whether two settings have the same projector set (labels ignored)."""
    if a.m_qubits != b.m_qubits or a.n_outcomes != b.n_outcomes:
        return False
    unmatched = list(b.projectors)
    for p in a.projectors:
        for i, q in enumerate(unmatched):
            if np.max(np.abs(p - q)) <= tol:
                del unmatched[i]
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class SteeringProtocol:
    """Two distinct complete settings on Alice's first M qubits.

    ``n_qubits`` may be left None for protocols meant to pair with any state;
    the certifier checks M < n at call time either way.
    """

    alice_qubits: int
    setting_1: MeasurementSetting
    setting_2: MeasurementSetting
    n_qubits: int | None = None

    def __post_init__(self) -> None:
        m = self.alice_qubits
        if m < 1:
            raise DimensionError(f"alice_qubits must be positive, got {m}")
        for k, s in ((1, self.setting_1), (2, self.setting_2)):
            if s.m_qubits != m:
                raise DimensionError(
                    f"setting {k} acts on {s.m_qubits} qubits, protocol says {m}"
                )
        if self.n_qubits is not None and self.n_qubits <= m:
            raise DimensionError(
                f"alice_qubits={m} must be smaller than n_qubits={self.n_qubits}"
            )
        if settings_equal(self.setting_1, self.setting_2):
            raise ValidationError("the two settings are identical as projector sets")

    @property
    def settings(self) -> tuple[MeasurementSetting, MeasurementSetting]:
        return (self.setting_1, self.setting_2)


def tensor_protocol(
    axes_1: str, axes_2: str, n_qubits: int | None = None
) -> SteeringProtocol:
    """Protocol from two Pauli product settings, e.g. ('zz', 'yx')."""
    if len(axes_1) != len(axes_2):
        raise DimensionError("both settings must cover the same qubits")
    return SteeringProtocol(
        alice_qubits=len(axes_1),
        setting_1=tensor_setting(axes_1),
        setting_2=tensor_setting(axes_2),
        n_qubits=n_qubits,
    )


def random_rank1_setting(
    m_qubits: int, rng: np.random.Generator, label: str = "random"
) -> MeasurementSetting:
    """Haar-random orthonormal rank-1 setting on M qubits."""
    if m_qubits < 1:
        raise DimensionError(f"m_qubits must be positive, got {m_qubits}")
    dim = 2**m_qubits
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    vectors = tuple(q[:, i].copy() for i in range(dim))
    return MeasurementSetting(
        label=label,
        m_qubits=m_qubits,
        outcomes=tuple(bitstring(i, m_qubits) for i in range(dim)),
        projectors=tuple(outer(v) for v in vectors),
        vectors=vectors,
    )


# ---------------------------------------------------------------------------
# JSON document handling
# ---------------------------------------------------------------------------


def load_measurement(doc: str | Mapping, path: str = "") -> MeasurementSetting:
    """Parse a measurement document.

    Schemas::

        {"type": "tensor_pauli", "axes": "yx"}
        {"type": "projectors", "vectors": [[[re, im], ...], ...]}
        {"type": "bell_like", "beta": 0.5,
         "phi_family": "computational" | [[[re, im], ...], ...]}
    """
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}", path) from None
    root = expect_mapping(doc, path or "measurement")
    kind = root.get("type")
    prefix = f"{path}." if path else ""
    if kind == "tensor_pauli":
        axes = root.get("axes")
        if not isinstance(axes, str) or not axes:
            raise ParseError("expected a non-empty axis string", f"{prefix}axes")
        if any(c not in _PAULI_BASES for c in axes):
            raise ParseError(f"axes {axes!r} contain a non-Pauli character", f"{prefix}axes")
        return tensor_setting(axes)
    if kind == "projectors":
        vecs = expect_list(root.get("vectors"), f"{prefix}vectors")
        parsed = [parse_vector(v, f"{prefix}vectors[{i}]") for i, v in enumerate(vecs)]
        count = len(parsed)
        if count < 2 or count & (count - 1):
            raise ParseError(f"{count} vectors cannot form a complete qubit setting", f"{prefix}vectors")
        m = n_qubits_of(count)
        if any(v.shape[0] != count for v in parsed):
            raise ParseError(f"vectors must each have {count} amplitudes", f"{prefix}vectors")
        norms = [np.linalg.norm(v) for v in parsed]
        if any(abs(n - 1.0) > 1e-8 for n in norms):
            raise ParseError("vectors must be unit norm", f"{prefix}vectors")
        return MeasurementSetting(
            label="projectors",
            m_qubits=m,
            outcomes=tuple(bitstring(i, m) for i in range(count)),
            projectors=tuple(outer(v) for v in parsed),
            vectors=tuple(parsed),
        )
    if kind == "bell_like":
        if "beta" not in root:
            raise ParseError("missing required key", f"{prefix}beta")
        beta = expect_number(root["beta"], f"{prefix}beta")
        family = root.get("phi_family", "computational")
        if family == "computational":
            m = root.get("m_qubits", 1)
            m = expect_int(m, f"{prefix}m_qubits")
            if m < 1:
                raise ParseError(f"m_qubits must be positive, got {m}", f"{prefix}m_qubits")
            basis = BellLikeBasis(beta, computational_family(m), "computational")
        else:
            vecs = expect_list(family, f"{prefix}phi_family")
            parsed = [
                parse_vector(v, f"{prefix}phi_family[{i}]") for i, v in enumerate(vecs)
            ]
            if len(parsed) < 2 or len(parsed) % 2:
                raise ParseError(
                    f"family must pair an even number of vectors, got {len(parsed)}",
                    f"{prefix}phi_family",
                )
            pairs = tuple(
                (parsed[2 * i], parsed[2 * i + 1]) for i in range(len(parsed) // 2)
            )
            basis = BellLikeBasis(beta, pairs)
        return bell_like_setting(basis)
    raise ParseError(f"unknown measurement type {kind!r}", f"{prefix}type")


def save_measurement(setting: MeasurementSetting) -> dict:
    """Inverse of load_measurement where a faithful schema exists."""
    basis = setting.bell_like
    if basis is not None:
        doc: dict = {"type": "bell_like", "beta": basis.beta}
        if basis.family_label == "computational":
            doc["phi_family"] = "computational"
            doc["m_qubits"] = basis.m_qubits
        else:
            flat = [v for pair in basis.pairs for v in pair]
            doc["phi_family"] = [[complex_entry(z) for z in v] for v in flat]
        return doc
    vectors = setting.rank1_vectors()
    return {
        "type": "projectors",
        "vectors": [[complex_entry(z) for z in v] for v in vectors],
    }


def load_protocol(doc: str | Mapping) -> SteeringProtocol:
    """Parse a protocol document.

    Schema::

        {"alice_qubits": M, "setting_1": <measurement>, "setting_2": <measurement>}
    """
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    root = expect_mapping(doc, "")
    if "alice_qubits" not in root:
        raise ParseError("missing required key", "alice_qubits")
    m = expect_int(root["alice_qubits"], "alice_qubits")
    settings = []
    for key in ("setting_1", "setting_2"):
        if key not in root:
            raise ParseError("missing required key", key)
        settings.append(load_measurement(root[key], key))
    for key, s in zip(("setting_1", "setting_2"), settings):
        if s.m_qubits != m:
            raise ParseError(
                f"setting acts on {s.m_qubits} qubits but alice_qubits is {m}", key
            )
    return SteeringProtocol(alice_qubits=m, setting_1=settings[0], setting_2=settings[1])


def save_protocol(protocol: SteeringProtocol) -> dict:
    return {
        "alice_qubits": protocol.alice_qubits,
        "setting_1": save_measurement(protocol.setting_1),
        "setting_2": save_measurement(protocol.setting_2),
    }


__all__ = [
    "BellLikeBasis",
    "MeasurementSetting",
    "SteeringProtocol",
    "bell_like_setting",
    "bitstring",
    "completeness_check",
    "computational_family",
    "load_measurement",
    "load_protocol",
    "pauli_axis_basis",
    "random_rank1_setting",
    "same_family",
    "save_measurement",
    "save_protocol",
    "settings_equal",
    "tensor_protocol",
    "tensor_setting",
    "transformation_matrix",
]
