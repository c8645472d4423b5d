"""Module for configuration files, CSV outputs and reports."""
# flake8: noqa
from .config import ExperimentConfig, KernelSection, ParticleSection, MeanFieldSection, HydroSection, \
    PressurelessSection, EulerSection, FitSection, parse_config_text, validate_config, load_config, \
    dump_config, builtin_configs, EXPERIMENT_SECTIONS
from .csv_output import write_rows, write_particle_costs, write_particle_snapshots, write_pless_series, \
    write_pless_snapshots, write_euler_series, write_euler_snapshots, write_convergence, read_series
from .report import Report, Check
