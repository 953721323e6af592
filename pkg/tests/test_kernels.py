"""The numba and numpy kernel paths must produce identical amplitudes."""

import numpy as np
import pytest

from conftest import make_layout, random_compatible_gate, random_state
from lqc import _kernels
from lqc.gates import GateKind, apply
from lqc.oracles import less_than_predicate, oracle_gate


@pytest.fixture
def restore_backend():
    before = _kernels.backend()
    yield
    _kernels.set_backend(before)


def test_backend_roundtrip(restore_backend):
    _kernels.set_backend("numpy")
    assert _kernels.backend() == "numpy"
    _kernels.set_backend("numba")
    assert _kernels.backend() == "numba"
    with pytest.raises(ValueError):
        _kernels.set_backend("fortran")


def test_backends_bit_identical(restore_backend, rng):
    layout = make_layout("qqhqh")
    kinds = [k for k in GateKind if k is not GateKind.ORACLE_FLIP]
    for trial in range(60):
        kind = kinds[trial % len(kinds)]
        gate = random_compatible_gate(layout, kind, rng)
        if gate is None:
            continue
        state = random_state(layout, rng)
        twin = state.copy()
        _kernels.set_backend("numba")
        apply(state, gate)
        _kernels.set_backend("numpy")
        apply(twin, gate)
        assert np.array_equal(state.amps, twin.amps), (kind, gate.wires)


def test_oracle_flip_backend_independent(restore_backend, rng):
    layout = make_layout("qqq")
    gate = oracle_gate(less_than_predicate(3, 2), (0, 1), 2)
    state = random_state(layout, rng)
    twin = state.copy()
    _kernels.set_backend("numba")
    apply(state, gate)
    _kernels.set_backend("numpy")
    apply(twin, gate)
    assert np.array_equal(state.amps, twin.amps)
