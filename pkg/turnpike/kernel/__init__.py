"""Module for the symmetric bounded interaction kernels."""
# flake8: noqa
from .kernel import Kernel, KernelSpec, CustomKernel, psi_eval, validate_kernel, as_points
from .registry import KernelRegistry
