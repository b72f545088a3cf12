"""Shared fixtures and independent brute-force oracles.

The helpers here recompute quantities along deliberately different code
paths than the library (explicit Kronecker products and block traces instead
of einsum contractions) so the tests cross-check real math, not the
implementation against itself.
"""

import numpy as np
import pytest

from steerlab import (
    SteeringProtocol,
    random_rank1_setting,
    settings_equal,
    tensor_protocol,
)


def brute_conditional(rho, projector, n_qubits, alice_qubits):
    """Bob's unnormalized conditional state via full-matrix products.

    Applies (P ⊗ 1) to rho explicitly and traces Alice out by summing the
    d_B x d_B diagonal blocks.
    """
    d_a = 2**alice_qubits
    d_b = 2 ** (n_qubits - alice_qubits)
    big = np.kron(projector, np.eye(d_b)) @ rho
    out = np.zeros((d_b, d_b), dtype=complex)
    for t in range(d_a):
        out += big[t * d_b : (t + 1) * d_b, t * d_b : (t + 1) * d_b]
    return out


def random_protocol(m_qubits, seed):
    rng = np.random.default_rng([seed, 17])
    s1 = random_rank1_setting(m_qubits, rng, label="s1")
    s2 = random_rank1_setting(m_qubits, rng, label="s2")
    while settings_equal(s1, s2):
        s2 = random_rank1_setting(m_qubits, rng, label="s2")
    return SteeringProtocol(alice_qubits=m_qubits, setting_1=s1, setting_2=s2)


@pytest.fixture
def zx_protocol():
    return tensor_protocol("z", "x", n_qubits=2)


@pytest.fixture
def zzyx_protocol():
    return tensor_protocol("zz", "yx", n_qubits=4)
