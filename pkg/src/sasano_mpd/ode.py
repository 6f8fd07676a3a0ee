"""Thin driver around the Dormand–Prince kernel: path checks, errors, chart plumbing."""
import numpy as np

from . import _kernels
from .sasano import S_CHART, PhasePoint, kernel_params

RTOL = 1e-10
ATOL = 1e-12
SINGULAR_MARGIN = 0.05
MAX_STEPS = 1_000_000


class IntegrationError(RuntimeError):
    """Integration stopped early; carries the last accepted state."""

    def __init__(self, message, t_last, y_last):
        super().__init__(message)
        self.t_last = t_last
        self.y_last = y_last


def check_path(t0, t1, margin=SINGULAR_MARGIN):
    """The real segment [t0, t1] must stay ``margin`` away from 0 and 1."""
    for v in (t0, t1):
        if isinstance(v, complex) and v.imag != 0:
            raise ValueError("time paths must be real")
    a, b = sorted((float(np.real(t0)), float(np.real(t1))))
    for c in (0.0, 1.0):
        d = 0.0 if a <= c <= b else min(abs(a - c), abs(b - c))
        if d < margin:
            raise ValueError(f"path [{t0}, {t1}] comes within {d:.3g} of the singular point {c}")


def integrate(system, t0, y0, times, par, aux, rtol=RTOL, atol=ATOL, max_steps=MAX_STEPS):
    """Run the active kernel build on ``system`` (a ``_kernels`` code); states at ``times``."""
    times = np.asarray(times, dtype=float)
    if times.size and np.any(np.diff(times) * np.sign(times[-1] - t0 or 1.0) < 0):
        raise ValueError("output times must be monotone in the integration direction")
    for t in times:
        check_path(t0, t)
    ys, status, t_last, y_last, _ = _kernels.active().dopri5(
        int(system), float(t0), np.asarray(y0, dtype=complex), times,
        np.asarray(par, dtype=complex), int(aux), float(rtol), float(atol), int(max_steps))
    if status == 1:
        raise IntegrationError(f"step size underflow near t = {t_last}", t_last, y_last)
    if status == 2:
        raise IntegrationError(f"step budget exhausted at t = {t_last}", t_last, y_last)
    return ys


def sasano_flow(x, params, times, rtol=RTOL, atol=ATOL):
    """Integrate the vector field of x's chart; returns PhasePoints at ``times``."""
    chart_code = _kernels.S_CHART_CODE if x.chart == S_CHART else _kernels.T_CHART_CODE
    ys = integrate(_kernels.SASANO, complex(x.time).real, x.as_array(), times,
                   kernel_params(params, x.chart), chart_code, rtol, atol)
    n = x.n
    return [PhasePoint(x.chart, tuple(y[:n]), tuple(y[n:]), float(t)) for t, y in zip(times, ys)]
