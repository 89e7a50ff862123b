import numpy as np
import pytest

from lorentz_helix import _backend
from lorentz_helix.synthesis import CurvatureSpec, integrate_frenet, make_b2_slant_spec

try:
    cython_kernels = _backend.load("cython")
except ImportError:  # extension not built
    cython_kernels = None

needs_cython = pytest.mark.skipif(cython_kernels is None, reason="compiled kernels not built")


def test_backend_names():
    assert _backend.load("python").NAME == "python"
    assert _backend.BACKEND in ("python", "cython")


def test_env_forces_python(monkeypatch):
    monkeypatch.setenv("LORENTZ_HELIX_PURE_PYTHON", "1")
    assert _backend.load().NAME == "python"


@needs_cython
@pytest.mark.parametrize(
    "spec",
    [
        CurvatureSpec("1+0.5*sin(s)", "1+0.3*s", "0.5+cos(s)", 0.0, 2.0, 1e-3),
        make_b2_slant_spec(1, 2, "1", "1", (0, 2), 1e-3),
    ],
)
@pytest.mark.parametrize("reorth", [0, 1, 16])
def test_backends_agree(spec, reorth):
    a = integrate_frenet(spec, reorth_every=reorth, backend=_backend.load("python")).frenet
    b = integrate_frenet(spec, reorth_every=reorth, backend=cython_kernels).frenet
    np.testing.assert_allclose(a.frames, b.frames, atol=1e-12, rtol=0)
    np.testing.assert_allclose(a.positions, b.positions, atol=1e-12, rtol=0)


@pytest.mark.parametrize("name", ["python", pytest.param("cython", marks=needs_cython)])
def test_degenerate_reorthonormalization_reports_step(name):
    kernels = _backend.load(name)
    n = 40
    k = np.ones(2 * n + 1)
    x0 = np.zeros((5, 4))
    x0[1:] = np.eye(4)
    x0[4] = x0[3]  # B2 = B1: dependent frame
    from lorentz_helix.errors import DegenerateFrameError

    with pytest.raises(DegenerateFrameError) as info:
        kernels.integrate_frame(k, k, k, 0.01, x0, 4, 1e-10)
    assert info.value.node == 4
