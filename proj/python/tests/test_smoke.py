import math

import numpy as np
import pytest

import uscav


def params(**kw):
    p = uscav.SystemParams()
    for k, v in kw.items():
        setattr(p, k, v)
    return p


def test_loss_rate_constant():
    k1 = uscav.cavity_loss_rates(params(n_modes=3))[0]
    assert k1 == pytest.approx(2 / (math.pi * 1e6), rel=1e-12)


def test_polariton_frequencies():
    lo, up = uscav.polariton_frequencies(params(coupling_g=1.0), 1.0)
    assert lo == pytest.approx(math.sqrt(2) - 1, abs=1e-12)
    assert up == pytest.approx(math.sqrt(2) + 1, abs=1e-12)
    lower, upper = uscav.diagonalize(params(coupling_g=1.0), 1.0)
    assert lower["omega"] == pytest.approx(lo, abs=1e-10)
    assert upper["symplectic_norm"] == pytest.approx(1.0, abs=1e-10)


def test_lossless_spectra_are_unitary():
    p = params(gamma=0.0, n_modes=20)
    grid = list(np.linspace(0.1, 2.4, 50))
    for s in (uscav.mbc_spectrum(p, grid),
              uscav.langevin_spectrum(p, grid, uscav.Treatment.Lindblad)):
        assert np.max(np.abs(np.abs(s["r"]) - 1)) < 1e-8
        assert set(s["flag"]) == {"ok"}


def test_difference_anchor():
    v = uscav.normalized_difference(params(n_modes=1), [1.0])
    assert v[0] == pytest.approx(0.1464, abs=5e-4)


def test_protocol_small_cutoff():
    run = uscav.run_protocol(params(coupling_g=0.5), cutoff=4, t_end=1.0)
    assert np.max(np.abs(run["trace_err"])) < 1e-10
    assert run["min_eig"].min() < 0
    flat = uscav.run_protocol(params(coupling_g=0.0), cutoff=4, t_end=1.0)
    assert np.max(np.abs(flat["photon_number"])) < 1e-12


def test_steady_state_is_ground_state():
    ss = uscav.steady_state(params(coupling_g=0.5), cutoff=4)
    assert ss["rho"].shape == (25, 25)
    assert ss["ground_fidelity"] > 1 - 1e-10


def test_verify_and_errors():
    rep = uscav.verify(params(n_modes=10))
    assert rep["passed"]
    with pytest.raises(ValueError):
        uscav.run_protocol(params(), variant="nonsense", cutoff=2, t_end=0.5)
