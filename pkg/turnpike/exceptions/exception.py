"""Module for Turnpike Exceptions.

This module defines the custom exceptions raised across the simulators and
the diagnostics, such as malformed inputs, invalid configuration keys,
numerical blow-up during integration and violated step-size contracts.
Each exception renders a compact XML-like string with its description and
the parameters that caused it.

Classes:
    - TurnpikeException: The base class for all Turnpike exceptions.
    - InputError: Raised when an operation receives inputs outside its preconditions.
    - ConfigError: Raised when a configuration key is unknown or its value is invalid.
    - NumericalBlowup: Raised when an integration produces non-finite values.
    - CFLViolation: Raised when a hydrodynamic step exceeds the stable time step.
    - DegenerateState: Raised when the internal energy drops below its floor.
    - FitError: Raised when a decay fit has too few usable samples.
"""


class TurnpikeException(Exception):
    """Default Turnpike Exception.

    This is the base class for all exceptions of the package. Instances
    compare equal when their attributes match.
    """

    def __init__(self, message, description="", **kwargs):
        """Initialize with a generic message, a description and context parameters."""
        super(TurnpikeException, self).__init__(message)
        self.description = description
        self.parameter = kwargs

    def __eq__(self, other):
        """Override equality operator to compare based on attributes."""
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __hash__(self):
        """Override hash function to ensure consistent hash value."""
        return 0

    def _format_parameter(self):
        """Format the parameters as a string for easier readability."""
        return " ".join(['%s="%s"' % (key, value) for (key, value) in sorted(self.parameter.items())])

    def __str__(self):
        """Return a string representation of the exception."""
        return '<{0} description="{1}" {2}/>'.format(
            self.__class__.__name__, self.description, self._format_parameter())


class InputError(TurnpikeException):
    """Exception raised when an operation receives invalid inputs.

    Attributes:
        description (str): What was wrong with the input.
        parameter (dict): Offending values.
    """

    def __init__(self, description, **kwargs):
        super(InputError, self).__init__("Invalid input", description, **kwargs)


class ConfigError(TurnpikeException):
    """Exception raised for an invalid configuration.

    Attributes:
        key (str): The dotted configuration key, e.g. ``particle.dt``.
        description (str): Why the key was rejected.
    """

    def __init__(self, key, description):
        super(ConfigError, self).__init__("Invalid configuration", description)
        self.key = key

    def __str__(self):
        return '<ConfigError key="{0}" description="{1}" />'.format(self.key, self.description)


class NumericalBlowup(TurnpikeException):
    """Exception raised when the state stops being finite.

    Attributes:
        time (float): Simulation time at which the failure was detected.
    """

    def __init__(self, time, description="non-finite state", **kwargs):
        super(NumericalBlowup, self).__init__("Numerical blow-up", description, **kwargs)
        self.time = time

    def __str__(self):
        return '<NumericalBlowup time="{0}" description="{1}" {2}/>'.format(
            self.time, self.description, self._format_parameter())


class CFLViolation(TurnpikeException):
    """Exception raised when a time step exceeds the stability limit.

    Attributes:
        dt (float): The requested step.
        dt_max (float): The largest admissible step for the current state.
    """

    def __init__(self, dt, dt_max):
        super(CFLViolation, self).__init__("CFL violation", "time step exceeds the stable limit")
        self.dt = dt
        self.dt_max = dt_max

    def __str__(self):
        return '<CFLViolation dt="{0}" dt_max="{1}" />'.format(self.dt, self.dt_max)


class DegenerateState(TurnpikeException):
    """Exception raised when the internal energy is below its floor."""

    def __init__(self, description, **kwargs):
        super(DegenerateState, self).__init__("Degenerate state", description, **kwargs)


class FitError(TurnpikeException):
    """Exception raised when a log-linear fit cannot be performed."""

    def __init__(self, description, **kwargs):
        super(FitError, self).__init__("Fit error", description, **kwargs)
