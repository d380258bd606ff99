import numpy as np
import pytest

from uinorm import _backend, _fallback
from uinorm.errors import ConvergenceError, SingularMatrixError

from conftest import haar

BACKENDS = sorted(_backend.available().items())


def test_fallback_always_available():
    assert "python" in _backend.available()
    assert _backend.NAME in _backend.available()


@pytest.mark.parametrize("name,mod", BACKENDS)
@pytest.mark.parametrize("n", [1, 2, 5, 12])
def test_jacobi_matches_lapack(name, mod, n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = g + g.conj().T
    w, v, sweeps = mod.jacobi_eigh(h)
    assert np.allclose(w, np.linalg.eigvalsh(h), atol=1e-12)
    assert np.all(np.diff(w) >= 0)
    assert np.allclose(v.conj().T @ v, np.eye(n), atol=1e-12)
    assert np.allclose((v * w) @ v.conj().T, h, atol=1e-12)
    assert sweeps >= 0


@pytest.mark.parametrize("name,mod", BACKENDS)
def test_jacobi_degenerate_spectrum(name, mod, rng):
    u = haar(rng, 6)
    lam = np.array([1.0, 1.0, 1.0, -2.0, -2.0, 0.5])
    h = (u * lam) @ u.conj().T
    h = 0.5 * (h + h.conj().T)
    w, v, _ = mod.jacobi_eigh(h)
    assert np.allclose(w, np.sort(lam), atol=1e-12)
    assert np.allclose((v * w) @ v.conj().T, h, atol=1e-12)


@pytest.mark.parametrize("name,mod", BACKENDS)
def test_jacobi_sweep_limit(name, mod, rng):
    g = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    with pytest.raises(ConvergenceError) as info:
        mod.jacobi_eigh(g + g.conj().T, max_sweeps=1)
    assert info.value.iterations == 1


@pytest.mark.parametrize("name,mod", BACKENDS)
def test_lu_solve(name, mod, rng):
    a = rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7)) + 5 * np.eye(7)
    b = rng.standard_normal((7, 3)) + 1j * rng.standard_normal((7, 3))
    x = mod.lu_solve(a, b, 1e-14)
    assert np.allclose(x, np.linalg.solve(a, b), atol=1e-12)


@pytest.mark.parametrize("name,mod", BACKENDS)
def test_lu_singular(name, mod):
    a = np.array([[1.0, 2.0], [2.0, 4.0]], dtype=complex)
    with pytest.raises(SingularMatrixError):
        mod.lu_solve(a, np.eye(2, dtype=complex), 1e-14 * 5.0)


def test_backends_agree(rng):
    mods = _backend.available()
    if len(mods) < 2:
        pytest.skip("compiled kernels not built")
    g = rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9))
    h = g + g.conj().T
    w1 = mods["cython"].jacobi_eigh(h)[0]
    w2 = mods["python"].jacobi_eigh(h)[0]
    assert np.allclose(w1, w2, atol=1e-12)


def test_pure_python_switch(monkeypatch):
    import importlib

    monkeypatch.setenv("UINORM_PURE_PYTHON", "1")
    mod = importlib.reload(_backend)
    try:
        assert mod.NAME == _fallback.NAME
    finally:
        monkeypatch.undo()
        importlib.reload(_backend)
