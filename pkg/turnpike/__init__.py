"""Turnpike simulates controlled alignment dynamics from particles to hydrodynamics and certifies their decay."""
# flake8: noqa
from .__version__ import __version__
from .client import Turnpike, Outcome, emit_builtin_configs, worker_count
