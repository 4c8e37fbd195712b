import importlib

import numpy as np
import pytest

from lifshitz_cp import _kernels_py, kernels
from lifshitz_cp.lifshitz import EvaluationPoint, _response
from lifshitz_cp.materials import FIXTURES, load_wall

try:
    from lifshitz_cp import _kernels
except ImportError:  # pragma: no cover - extension not built
    _kernels = None


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_pure_python_switch(monkeypatch):
    monkeypatch.setenv("LIFSHITZ_CP_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
    finally:
        monkeypatch.delenv("LIFSHITZ_CP_PURE_PYTHON")
        importlib.reload(kernels)


def test_thread_count(monkeypatch):
    monkeypatch.setenv("LIFSHITZ_CP_THREADS", "3")
    assert kernels.thread_count() == 3
    monkeypatch.setenv("LIFSHITZ_CP_THREADS", "x")
    with pytest.raises(ValueError):
        kernels.thread_count()


@pytest.mark.skipif(_kernels is None, reason="compiled kernel not available")
@pytest.mark.parametrize("name", FIXTURES)
def test_backends_agree(name, monkeypatch):
    wall = load_wall(name)
    a, T = 1e-4, 300.0
    tau = EvaluationPoint(a, T).tau
    zeta = tau * np.arange(1, 400)
    resp = _response(wall, zeta, a, T)
    layout = kernels.make_layout(zeta, resp.scale)
    args = (zeta, resp.em1, resp.dterm, layout, 2, resp.mode, resp.kappa2, resp.eps0)
    j_c = kernels.inner_integrals(*args, backend=_kernels)
    j_p = kernels.inner_integrals(*args, backend=_kernels_py)
    np.testing.assert_allclose(j_c, j_p, rtol=1e-13, atol=0)
    monkeypatch.setenv("LIFSHITZ_CP_THREADS", "4")
    np.testing.assert_array_equal(kernels.inner_integrals(*args, backend=_kernels), j_c)


def test_exact_for_ideal_metal():
    # r_TM = -r_TE = 1 gives J = 2 (zeta^2 + 2 zeta + 2)
    zeta = np.array([1e-3, 0.1, 1.0, 10.0, 60.0])
    em1 = np.full(zeta.size, 1e30)
    layout = kernels.make_layout(zeta)
    J = kernels.inner_integrals(zeta, em1, np.zeros_like(zeta), layout, 1)
    np.testing.assert_allclose(J, 2 * (zeta**2 + 2 * zeta + 2), rtol=1e-13)


def test_layout():
    lay = kernels.make_layout(np.array([1e-6, 0.5, 100.0]))
    assert lay.npanel[2] == 0 and lay.npanel[0] > lay.npanel[1] > 0
    ref = lay.refined()
    assert np.all(ref.start[:2] < lay.start[:2])
    assert np.all(ref.npanel <= kernels.MAX_PANELS)
