"""Module for Turnpike Exception handling."""
from .exception import TurnpikeException, InputError, ConfigError, \
    NumericalBlowup, CFLViolation, DegenerateState, FitError
