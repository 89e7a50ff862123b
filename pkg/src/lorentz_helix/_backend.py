"""Pick the compiled kernels when available; ``LORENTZ_HELIX_PURE_PYTHON=1`` forces the fallback."""
import importlib
import os

from . import _kernels_py


def load(name=None):
    """Return the kernel module called ``name`` ("cython" or "python")."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        return importlib.import_module("._kernels", __package__)
    if os.environ.get("LORENTZ_HELIX_PURE_PYTHON", "") not in ("", "0"):
        return _kernels_py
    try:
        return importlib.import_module("._kernels", __package__)
    except ImportError:
        return _kernels_py


kernels = load()
BACKEND = kernels.NAME
