"""
Module for open-loop control fields of the hydrodynamic systems.

A :class:`ControlField` prescribes controls as functions of (t, x) instead of
the state. Pressureless runs use ``f1`` as the momentum control f_H, Euler
runs use ``f1`` and ``f2`` as the independent controls F1 and F2.
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from turnpike.exceptions import InputError


@dataclass(frozen=True)
class ControlField:
    """Prescribed control fields.

    Attributes:
        f1: Callable ``(t, x) -> array`` for the momentum control.
        f2: Callable ``(t, x) -> array`` for the energy control, zero if None.
        rate (float): Bound on the source relaxation rate, used by the
            time-step limiter and as the gain of the step contract.
    """

    f1: Callable
    f2: Optional[Callable] = None
    rate: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.rate) or self.rate < 0:
            raise InputError("control rate bound must be nonnegative", rate=self.rate)

    def _field(self, func, t, grid):
        if func is None:
            return np.zeros(grid.m_cells)
        values = np.broadcast_to(np.asarray(func(t, grid.centers), dtype=np.float64), (grid.m_cells,))
        return np.array(values)

    def momentum_control(self, state, grid):
        return self._field(self.f1, state.t, grid)

    def controls(self, state, grid):
        return self._field(self.f1, state.t, grid), self._field(self.f2, state.t, grid)

    def source_rate(self, state):
        return self.rate

    def gain(self, state):
        return self.rate
