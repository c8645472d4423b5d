"""
Module for empirical mean-field convergence studies.

For an increasing list of ensemble sizes the same initial distribution is
sampled, every ensemble is driven by the feedback gain beta = 1/sqrt(lambda),
and the runs are compared through their velocity moments, costs and
per-coordinate Wasserstein-1 distances to the largest ensemble.

Runs are independent and may be fanned out over worker processes; the
per-size seeds are spawned from the master seed, so the table does not
depend on the number of workers.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List

import numpy as np

from turnpike.diagnostics import CostSeries
from turnpike.exceptions import InputError
from turnpike.kernel import KernelSpec
from turnpike.particles import ControlLaw, sample_initial, simulate
from .empirical import EmpiricalMeasure, marginal_w1, moment2_velocity

logger = logging.getLogger('turnpike.meanfield')


@dataclass
class ConvergenceRow:
    """One ensemble size of a convergence study."""

    n: int
    moment2_t0: float
    moment2_tend: float
    w1_x: float
    w1_v: float
    cost_total: float
    series: CostSeries = field(default=None, repr=False)


@dataclass
class ConvergenceTable:
    """Rows of a convergence study sorted by increasing ensemble size."""

    rows: List[ConvergenceRow]

    def __post_init__(self):
        sizes = [row.n for row in self.rows]
        if sizes != sorted(sizes):
            raise InputError("rows must be sorted by increasing N", sizes=sizes)

    def __iter__(self):
        yield from self.rows

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        """Return one column as a float array."""
        return np.array([getattr(row, name) for row in self.rows], dtype=np.float64)


def spawn_seeds(seed, count):
    """Derive ``count`` independent integer seeds from a master seed."""
    return [int(child.generate_state(1)[0]) for child in np.random.SeedSequence(seed).spawn(count)]


def _run_ensemble(job):
    """Worker: simulate one ensemble and return what the table needs."""
    n, cfg, kernel, seed = job
    init = sample_initial(n, cfg["d"], cfg["mean_x"], cfg["mean_v"], cfg["sigma"], seed)
    law = ControlLaw.feedback(1.0 / math.sqrt(cfg["lam"]), cfg["v_bar"])
    traj = simulate(init, kernel, law, cfg["dt"], cfg["t_end"], cfg["lam"], cfg["v_bar"], keep_states=False)
    return init, traj


def convergence_study(n_list, base_config, seed, kernel=None, workers=1):
    """Run the feedback-controlled system for every size in ``n_list``.

    Args:
        n_list: Strictly increasing ensemble sizes, each dividing the largest.
        base_config: Mean-field settings with attributes ``d``, ``dt``,
            ``t_end``, ``lam``, ``v_bar``, ``sigma``, ``mean_x``, ``mean_v``
            and optionally ``w1_time`` (``"end"`` or ``"start"``).
        seed (int): Master seed.
        kernel (Kernel): Interaction kernel, the prototype kernel by default.
        workers (int): Number of worker processes.

    Returns:
        ConvergenceTable: One row per ensemble size.
    """
    n_list = [int(n) for n in n_list]
    if len(n_list) < 2 or any(b <= a for a, b in zip(n_list, n_list[1:])) or n_list[0] < 1:
        raise InputError("n_list must be strictly increasing with at least two entries", n_list=n_list)
    if any(n_list[-1] % n for n in n_list):
        raise InputError("every N must divide the largest N", n_list=n_list)
    kernel = KernelSpec() if kernel is None else kernel
    cfg = {name: getattr(base_config, name)
           for name in ("d", "dt", "t_end", "lam", "v_bar", "sigma", "mean_x", "mean_v")}
    w1_time = getattr(base_config, "w1_time", "end")
    jobs = [(n, cfg, kernel, s) for n, s in zip(n_list, spawn_seeds(seed, len(n_list)))]

    logger.info("Convergence study over N=%s with %d worker(s)", n_list, workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_run_ensemble, jobs))
    else:
        results = [_run_ensemble(job) for job in jobs]

    def compared(init, traj):
        return init if w1_time == "start" else traj.final

    reference = compared(*results[-1])
    rows = []
    for n, (init, traj) in zip(n_list, results):
        state = compared(init, traj)
        w1_x = max(marginal_w1(state.x[:, c], reference.x[:, c]) for c in range(state.d))
        w1_v = max(marginal_w1(state.v[:, c], reference.v[:, c]) for c in range(state.d))
        rows.append(ConvergenceRow(
            n=n,
            moment2_t0=moment2_velocity(EmpiricalMeasure.from_state(init), cfg["v_bar"]),
            moment2_tend=moment2_velocity(EmpiricalMeasure.from_state(traj.final), cfg["v_bar"]),
            w1_x=w1_x,
            w1_v=w1_v,
            cost_total=traj.total_cost,
            series=traj.state_series()))
        logger.debug("N=%d cost=%.6g w1_x=%.3g w1_v=%.3g", n, traj.total_cost, w1_x, w1_v)
    return ConvergenceTable(rows)
