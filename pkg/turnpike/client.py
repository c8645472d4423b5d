"""Turnpike runs the controlled alignment experiments and certifies their decay bounds."""
import logging
import math
import os
from collections import namedtuple

import numpy as np

from turnpike.diagnostics import certify_turnpike, cheap_control_check, cheap_control_constant, check_bound, \
    fit_exponential, growth_constant, integrate_trapezoid, monotone_bound_check
from turnpike.exceptions import ConfigError, FitError
from turnpike.hydro import simulate_euler, simulate_pless
from turnpike.io import Report, builtin_configs, dump_config, read_series, write_convergence, \
    write_euler_series, write_euler_snapshots, write_particle_costs, write_particle_snapshots, \
    write_pless_series, write_pless_snapshots
from turnpike.kernel import KernelRegistry
from turnpike.meanfield import convergence_study, expected_moment2, moment2_standard_error
from turnpike.particles import ControlLaw, sample_initial, simulate

Outcome = namedtuple("Outcome", ["status", "report", "files"])

# Relative tolerances of the bound checks.
PARTICLE_TOL = 1e-6
HYDRO_TOL = 1e-3
CHEAP_CONTROL_PARTICLE_TOL = 1e-3
CHEAP_CONTROL_HYDRO_TOL = 1e-2
FIT_RATE_TOL = 0.1
MASS_DRIFT_TOL = 1e-12

# Ensemble sizes of the full-scale mean-field study.
REFERENCE_N_LIST = (100, 1000, 10000)


def worker_count(environ=None):
    """Return the worker cap from ``TURNPIKE_THREADS``, 1 when unset."""
    environ = os.environ if environ is None else environ
    value = environ.get("TURNPIKE_THREADS", "").strip()
    if not value:
        return 1
    try:
        workers = int(value)
    except ValueError:
        raise ConfigError("TURNPIKE_THREADS", "must be a positive integer, got %r" % value) from None
    if workers < 1:
        raise ConfigError("TURNPIKE_THREADS", "must be a positive integer, got %r" % value)
    return workers


def cheap_control_horizon(lam, t_end):
    """Horizon of a cheap-control check: at least ten times sqrt(lambda)."""
    return max(t_end, 10.0 * math.sqrt(lam))


def emit_builtin_configs(output_dir):
    """Write the reference experiment configs into ``output_dir``.

    Returns:
        list: Paths of the written files.
    """
    os.makedirs(output_dir, exist_ok=True)
    paths = []
    for name, config in builtin_configs().items():
        path = os.path.join(output_dir, "%s.cfg" % name)
        with open(path, "w", newline="\n", encoding="utf-8") as handle:
            handle.write(dump_config(config))
        paths.append(path)
    logging.getLogger('turnpike.log').info("Wrote %d config file(s) to %s", len(paths), output_dir)
    return paths


class Turnpike:
    """Class for running configured experiments and writing their outputs."""

    def __init__(self, kernels=None, workers=None):
        """Initialize Turnpike class.

        Args:
            kernels: Optional :class:`KernelRegistry`, a fresh one by default.
            workers: Worker processes for the convergence study, from
                ``TURNPIKE_THREADS`` by default.
        """
        self.kernels = kernels or KernelRegistry()  # Named kernels available to configs.
        self.workers = workers if workers is not None else worker_count()  # Cap on worker processes.
        self.logger = logging.getLogger('turnpike.log')  # Logger for orchestration.
        self.experiments = {
            "particle": self._run_particle,
            "pless": self._run_pless,
            "euler": self._run_euler,
            "convergence": self._run_convergence,
            "fit": self._run_fit,
        }

    def kernel_for(self, config):
        """Resolve the kernel named by ``config.kernel``."""
        section = config.kernel
        try:
            return self.kernels.resolve(section.name, section.c_psi, section.gamma)
        except KeyError:
            raise ConfigError("kernel.name", "unknown kernel %r" % section.name) from None

    def run(self, config, output_dir=None):
        """Run the configured experiment.

        Args:
            config (ExperimentConfig): Validated configuration.
            output_dir (str): Overrides ``config.output_dir``.

        Returns:
            Outcome: Exit status (0 when every enabled check passes, 1
            otherwise), the report and the written files.
        """
        out = output_dir or config.output_dir
        os.makedirs(out, exist_ok=True)
        report = Report(config.experiment)
        report.add_parameters("top", {"seed": config.seed, "workers": self.workers})
        self.logger.info("Running %s experiment into %s", config.experiment, out)
        files = self.experiments[config.experiment](config, out, report)
        files += report.write(out)
        status = 0 if report.passed else 1
        if status:
            self.logger.warning("Failed checks: %s", ", ".join(report.failed_checks()))
        return Outcome(status, report, files)

    def _kernel_parameters(self, config, report):
        kernel = self.kernel_for(config)
        report.add_parameters("kernel", config.kernel.model_dump())
        return kernel

    def _certify(self, report, name, series, lam, beta, tol):
        """Run the turnpike certificate with the feedback law's constants."""
        if not beta > 0:
            self.logger.warning("Skipping %s certificate: needs beta > 0", name)
            return
        c0 = cheap_control_constant(lam, beta)
        c1 = growth_constant(lam)
        certificate = certify_turnpike(series, c0, c1, tol)
        report.add_value("%s.c0" % name, c0)
        report.add_value("%s.c1" % name, c1)
        report.add_value("%s.c" % name, certificate.constants.c)
        report.add_value("%s.alpha" % name, certificate.constants.alpha)
        report.add_value("%s.tau" % name, certificate.constants.tau)
        report.add_value("%s.max_violation" % name, certificate.max_violation)
        report.add_check("%s.hypotheses" % name, certificate.hypotheses_hold)
        report.add_check("%s.envelope" % name, certificate.bound_satisfied)

    def _fit_rate(self, report, name, series, window, rate):
        """Fit the decay rate on ``window`` and compare it with ``rate``."""
        try:
            decay = fit_exponential(series, window)
        except FitError as exc:
            report.add_check("%s.fit" % name, False, exc.description)
            return None
        report.add_decay("%s.fit" % name, decay)
        if rate > 0:
            # Alignment only adds dissipation, so the feedback rate is a lower bound.
            report.add_value("%s.fit.relative_deviation" % name, (decay.alpha_hat - rate) / rate)
            report.add_check("%s.fit_rate" % name, decay.alpha_hat >= (1.0 - FIT_RATE_TOL) * rate,
                             "alpha_hat=%.6g feedback_rate=%.6g" % (decay.alpha_hat, rate))
        return decay

    def _run_particle(self, config, out, report):
        p = config.particle
        kernel = self._kernel_parameters(config, report)
        report.add_parameters("particle", p.model_dump(by_alias=True))
        report.add_value("particle.seed_used", config.particle_seed)

        init = sample_initial(p.n, p.d, p.mean_x, p.mean_v, p.sigma, config.particle_seed)
        traj = simulate(init, kernel, ControlLaw.feedback(p.beta, p.v_bar), p.dt, p.t_end, p.lam, p.v_bar)
        files = [write_particle_costs(os.path.join(out, "particle_costs.csv"), traj),
                 write_particle_snapshots(os.path.join(out, "particle_snapshots.csv"), traj, p.snapshot_every)]

        series = traj.state_series()
        report.add_value("state_cost.initial", float(series.values[0]))
        report.add_value("state_cost.final", float(series.values[-1]))
        report.add_value("total_cost", traj.total_cost)
        satisfied, violation = check_bound(series, 1.0, 2.0 * p.beta, PARTICLE_TOL)
        report.add_value("decay.max_violation", violation)
        report.add_check("decay.envelope", satisfied)
        report.add_check("decay.growth_bound", monotone_bound_check(series, growth_constant(p.lam), PARTICLE_TOL))
        self._fit_rate(report, "cost", traj.cost_series(), (p.fit_t_lo, p.fit_t_hi), 2.0 * p.beta)
        self._certify(report, "turnpike", series, p.lam, p.beta, PARTICLE_TOL)

        if p.cheap_control:
            gain = 1.0 / math.sqrt(p.lam)
            horizon = cheap_control_horizon(p.lam, p.t_end)
            if math.isclose(p.beta, gain, rel_tol=1e-12) and horizon == p.t_end:
                cheap = traj
            else:
                horizon = p.dt * math.ceil(round(horizon / p.dt, 6))
                cheap = simulate(init, kernel, ControlLaw.feedback(gain, p.v_bar), p.dt, horizon, p.lam, p.v_bar,
                                 keep_states=False)
            bound = math.sqrt(p.lam) * cheap.state_cost[0]
            report.add_value("cheap_control.horizon", float(cheap.times[-1]))
            report.add_value("cheap_control.total_cost", cheap.total_cost)
            report.add_value("cheap_control.bound", bound)
            report.add_check("cheap_control", cheap_control_check(cheap.total_cost, cheap.state_cost[0], p.lam,
                                                                  CHEAP_CONTROL_PARTICLE_TOL))
        return files

    def _hydro_common(self, report, run, h, energy, rate):
        """Checks shared by the pressureless and the Euler experiments."""
        report.add_value("mass_drift", run.mass_drift)
        report.add_value("floor_events", run.stats.floor_events)
        report.add_value("steps", run.stats.steps)
        report.add_check("mass_conservation", run.mass_drift <= MASS_DRIFT_TOL, "drift=%.3g" % run.mass_drift)
        report.add_check("no_floor_events", run.stats.floor_events == 0)
        report.add_check("q1_null_integral", run.stats.q1_nonzero == 0)
        report.add_check("energy.non_increasing", monotone_bound_check(energy, 1.0, PARTICLE_TOL))
        report.add_check("cost.growth_bound", monotone_bound_check(run.cost_series(), growth_constant(h.lam),
                                                                   PARTICLE_TOL))
        if rate is not None:
            satisfied, violation = check_bound(energy, 1.0, rate, HYDRO_TOL)
            report.add_value("energy.max_violation", violation)
            report.add_check("energy.envelope", satisfied)

    def _cheap_control_run(self, h, simulator, kernel):
        """Run with gain 1/sqrt(lambda) over the cheap-control horizon, or None to reuse the main run."""
        gain = 1.0 / math.sqrt(h.lam)
        horizon = cheap_control_horizon(h.lam, h.t_end)
        if math.isclose(h.beta, gain, rel_tol=1e-12) and horizon == h.t_end:
            return None
        settings = h.model_copy(update={"beta": gain, "t_end": horizon, "snapshot_times": ()})
        return simulator(settings, kernel)

    def _cheap_control(self, report, h, run, simulator, kernel):
        cheap = self._cheap_control_run(h, simulator, kernel) or run
        initial = cheap.state_cost[0]
        report.add_value("cheap_control.horizon", float(cheap.times[-1]))
        report.add_value("cheap_control.floor_events", cheap.stats.floor_events)
        report.add_value("cheap_control.total_cost", cheap.total_cost)
        report.add_value("cheap_control.bound", math.sqrt(h.lam) * initial)
        report.add_check("cheap_control", cheap_control_check(cheap.total_cost, initial, h.lam,
                                                              CHEAP_CONTROL_HYDRO_TOL))

    def _run_pless(self, config, out, report):
        h = config.pless
        kernel = self._kernel_parameters(config, report)
        report.add_parameters("pless", h.model_dump(by_alias=True))

        run = simulate_pless(h, kernel)
        files = [write_pless_series(os.path.join(out, "pless_series.csv"), run),
                 write_pless_snapshots(os.path.join(out, "pless_snapshots.csv"), run)]
        energy = run.energy_series()
        report.add_value("energy.initial", float(energy.values[0]))
        report.add_value("energy.final", float(energy.values[-1]))
        report.add_value("total_cost", run.total_cost)
        # The density-weighted law relaxes at beta rho, not beta.
        rate = None if h.density_weighted else 2.0 * h.beta
        self._hydro_common(report, run, h, energy, rate)
        if rate is not None:
            self._fit_rate(report, "energy", energy, (h.fit_t_lo, h.fit_t_hi), rate)
            self._certify(report, "turnpike", energy, h.lam, h.beta, HYDRO_TOL)

        if h.cheap_control and not h.density_weighted:
            self._cheap_control(report, h, run, simulate_pless, kernel)
        return files

    def _run_euler(self, config, out, report):
        h = config.euler
        kernel = self._kernel_parameters(config, report)
        report.add_parameters("euler", h.model_dump(by_alias=True))

        run = simulate_euler(h, kernel)
        files = [write_euler_series(os.path.join(out, "euler_series.csv"), run),
                 write_euler_snapshots(os.path.join(out, "euler_snapshots.csv"), run, h.e_floor)]
        energy = run.h_series()
        report.add_value("h_functional.initial", float(energy.values[0]))
        report.add_value("h_functional.final", float(energy.values[-1]))
        report.add_value("total_cost", run.total_cost)
        self._hydro_common(report, run, h, energy, 2.0 * h.beta)
        report.add_check("q2_nonpositive_integral", run.stats.q2_positive == 0)
        report.add_check("energy_inequality", energy_inequality_holds(run.times, run.h, run.work, HYDRO_TOL))
        try:
            report.add_decay("h_functional.fit", fit_exponential(energy, (h.fit_t_lo, h.fit_t_hi)))
        except FitError as exc:
            self.logger.warning("No decay fit: %s", exc)
        self._certify(report, "turnpike", energy, h.lam, h.beta, HYDRO_TOL)

        if h.cheap_control:
            self._cheap_control(report, h, run, simulate_euler, kernel)
        return files

    def _run_convergence(self, config, out, report):
        m = config.meanfield
        kernel = self._kernel_parameters(config, report)
        report.add_parameters("meanfield", m.model_dump(by_alias=True))
        reduced = tuple(m.n_list) != REFERENCE_N_LIST
        report.add_value("meanfield.reference_n_list", REFERENCE_N_LIST)
        report.add_value("meanfield.reduced_sizes", reduced)
        if reduced:
            self.logger.info("Convergence study on %s, a reduced stand-in for sizes %s",
                             ",".join(map(str, m.n_list)), ",".join(map(str, REFERENCE_N_LIST)))

        table = convergence_study(m.n_list, m, config.seed, kernel, workers=self.workers)
        files = [write_convergence(os.path.join(out, "convergence.csv"), table)]
        expected = expected_moment2(m.d, m.sigma, m.mean_v, m.v_bar)
        report.add_value("moment2.expected", expected)
        for row in table:
            error = moment2_standard_error(row.n, m.d, m.sigma, m.mean_v, m.v_bar)
            report.add_check("N%d.moment2_t0" % row.n, abs(row.moment2_t0 - expected) <= 3.0 * error,
                             "moment2=%.6g se=%.3g" % (row.moment2_t0, error))
            report.add_check("N%d.cheap_control" % row.n,
                             cheap_control_check(row.cost_total, row.moment2_t0, m.lam, CHEAP_CONTROL_PARTICLE_TOL))
            self._certify(report, "N%d.turnpike" % row.n, row.series, m.lam, 1.0 / math.sqrt(m.lam), PARTICLE_TOL)
        for column in ("w1_x", "w1_v"):
            values = table.column(column)
            report.add_check("%s.non_increasing" % column, bool(np.all(np.diff(values) <= 0)),
                             ",".join("%.3g" % v for v in values))
        return files

    def _run_fit(self, config, out, report):
        f = config.fit
        if f.series is None:
            raise ConfigError("fit.series", "a series file is required")
        report.add_parameters("fit", f.model_dump())
        series = read_series(f.series, f.column)
        report.add_decay("fit", fit_exponential(series, (f.t_lo, f.t_hi), f.floor))
        return []


def energy_inequality_holds(times, h, work, tol):
    """Check H(t) - H(0) <= int_0^t work for every sample, up to ``tol`` times the scale."""
    pieces = 0.5 * (work[1:] + work[:-1]) * np.diff(times)
    supplied = np.concatenate([[0.0], np.cumsum(pieces)])
    scale = max(float(h[0]), integrate_trapezoid(np.abs(work), times))
    return bool(np.all(h - h[0] <= supplied + tol * scale))
