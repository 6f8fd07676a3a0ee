"""Float kernels: Schlesinger right-hand side, Sasano vector fields, Dormand–Prince 5(4).

Every kernel is written once (in ``_kernel_src.py``) and built twice: compiled
with numba (``NB``) and as plain Python/numpy (``PY``). ``active()`` returns the
build picked by the environment flag in ``_accel``. Both right-hand sides share
the signature ``rhs(t, y, par, aux) -> dy``; the integrator picks one by an
integer system code rather than taking a function argument, which keeps the
compiled build cacheable.
"""
import os
import sys
from types import ModuleType, SimpleNamespace

from . import _accel

SCHLESINGER = 0
SASANO = 1

S_CHART_CODE = 0
T_CHART_CODE = 1

_SRC_PATH = os.path.join(os.path.dirname(__file__), "_kernel_src.py")
with open(_SRC_PATH, encoding="utf-8") as _fh:
    _CODE = compile(_fh.read(), _SRC_PATH, "exec")


def _make(compiled):
    # a registered module, so numba's cache can resolve the globals on reload
    mod = ModuleType(f"{__name__}_{'nb' if compiled else 'py'}")
    mod.__file__ = _SRC_PATH
    mod.COMPILED = compiled
    mod.jit = _accel.njit if compiled else (lambda f: f)
    sys.modules[mod.__name__] = mod
    exec(_CODE, mod.__dict__)
    ns = mod.__dict__
    return SimpleNamespace(schlesinger_rhs=ns["schlesinger_rhs"], sasano_rhs=ns["sasano_rhs"],
                           rhs=ns["rhs"], dopri5=ns["dopri5"], compiled=compiled)


PY = _make(False)
NB = _make(True) if _accel.NUMBA_AVAILABLE else PY


def active():
    return NB if _accel.NUMBA_ENABLED else PY
