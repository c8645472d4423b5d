"""Module for decay fits, bound checks and turnpike certificates."""
# flake8: noqa
from .series import CostSeries, DecayReport, integrate_trapezoid, tail_integrals
from .turnpike import fit_exponential, check_bound, cheap_control_check, cheap_control_constant, \
    abstract_constants, verify_turnpike_hypotheses, growth_constant, monotone_bound_check, \
    certify_turnpike, TurnpikeConstants, TurnpikeCertificate
