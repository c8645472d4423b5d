"""
Module for the CSV files emitted by the experiments.

Every file has a header row, ``.`` as decimal separator and ``\\n`` line
endings. Floats are written with 17 significant digits so that a file
reproduces the computed values exactly.
"""
import csv
import logging
import os

import numpy as np

from turnpike.diagnostics import CostSeries
from turnpike.exceptions import InputError
from turnpike.hydro import primitives

logger = logging.getLogger('turnpike.io')


def _cell(value):
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".17g")


def write_rows(path, header, rows):
    """Write ``rows`` under ``header`` to ``path``, creating parent directories."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        count = 0
        for row in rows:
            writer.writerow([_cell(value) for value in row])
            count += 1
    logger.debug("Wrote %d row(s) to %s", count, path)
    return path


def write_particle_costs(path, traj):
    """Columns ``t,state_cost,control_cost,total_integrand``."""
    return write_rows(path, ["t", "state_cost", "control_cost", "total_integrand"],
                      zip(traj.times, traj.state_cost, traj.control_cost, traj.total_integrand))


def write_particle_snapshots(path, traj, every):
    """Columns ``t,i,x_1..x_D,v_1..v_D`` for every ``every``-th step and the last one."""
    d = traj.final.d
    header = ["t", "i"] + ["x_%d" % (c + 1) for c in range(d)] + ["v_%d" % (c + 1) for c in range(d)]
    last = len(traj.times) - 1
    steps = sorted(set(range(0, last + 1, every)) | {last})

    def rows():
        for k in steps:
            for i in range(traj.final.n):
                yield [traj.times[k], i] + list(traj.x[k, i]) + list(traj.v[k, i])

    return write_rows(path, header, rows())


def write_pless_series(path, run):
    """Columns ``t,energy,state_cost,control_cost``."""
    return write_rows(path, ["t", "energy", "state_cost", "control_cost"],
                      zip(run.times, run.energy, run.state_cost, run.control_cost))


def write_pless_snapshots(path, run):
    """Columns ``t,x,rho,u`` for every kept state."""
    x = run.grid.centers

    def rows():
        for state in run.snapshots:
            for xi, rho, u in zip(x, state.rho, state.u):
                yield state.t, xi, rho, u

    return write_rows(path, ["t", "x", "rho", "u"], rows())


def write_euler_series(path, run):
    """Columns ``t,h_functional,state_cost,g_cost``."""
    return write_rows(path, ["t", "h_functional", "state_cost", "g_cost"],
                      zip(run.times, run.h, run.state_cost, run.g_cost))


def write_euler_snapshots(path, run, e_floor):
    """Columns ``t,x,rho,u,e,p`` for every kept state."""
    x = run.grid.centers

    def rows():
        for state in run.snapshots:
            prim = primitives(state, e_floor)
            for values in zip(x, state.rho, prim.u, prim.e, prim.p):
                yield (state.t,) + values

    return write_rows(path, ["t", "x", "rho", "u", "e", "p"], rows())


def write_convergence(path, table):
    """Columns ``N,moment2_t0,moment2_tend,w1_x,w1_v,cost_total``."""
    return write_rows(path, ["N", "moment2_t0", "moment2_tend", "w1_x", "w1_v", "cost_total"],
                      ([row.n, row.moment2_t0, row.moment2_tend, row.w1_x, row.w1_v, row.cost_total]
                       for row in table))


def read_series(path, column=None):
    """Read one column of an emitted CSV as a :class:`CostSeries`.

    Args:
        path (str): CSV file whose first column is the time.
        column (str): Column name, the second column when None.

    Raises:
        InputError: Missing file, unknown column or malformed numbers.
    """
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if not header or len(header) < 2:
                raise InputError("series file needs a header with at least two columns", path=path)
            name = header[1] if column is None else column
            if name not in header:
                raise InputError("unknown column", path=path, column=name, columns=",".join(header))
            index = header.index(name)
            times, values = [], []
            for number, row in enumerate(reader, start=2):
                try:
                    times.append(float(row[0]))
                    values.append(float(row[index]))
                except (ValueError, IndexError) as exc:
                    raise InputError("malformed row", path=path, line=number) from exc
    except OSError as exc:
        raise InputError("cannot read series file", path=path, reason=exc.strerror) from exc
    return CostSeries(np.array(times), np.array(values))
