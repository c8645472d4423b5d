"""
Module for handling a set of named interaction kernels.
This class acts as a container for kernels, validating each one on
registration and providing lookup by name.
"""
import logging

from turnpike.exceptions import InputError
from .kernel import Kernel, KernelSpec, validate_kernel


class KernelRegistry:
    """Class for handling a collection of named kernels."""

    def __init__(self):
        """Initialize KernelRegistry class with the prototype kernel."""
        self.__kernels = {}
        self.logger = logging.getLogger('turnpike.kernel')
        self.register("prototype", KernelSpec())

    def __iter__(self):
        """Iterate over the registered names."""
        yield from self.__kernels

    def __getitem__(self, key):
        """Return kernel by name."""
        try:
            return self.__kernels[key]
        except KeyError:
            raise KeyError(f"Kernel not found: {key}") from None

    def __len__(self):
        """Return the number of registered kernels."""
        return len(self.__kernels)

    def __contains__(self, key):
        """Check if a kernel with the specified name exists."""
        return key in self.__kernels

    def register(self, name, kernel, dim=1, samples=256, seed=0):
        """Validate and add a kernel under ``name``.

        Args:
            name (str): Lookup key.
            kernel (Kernel): The kernel to add.
            dim (int): Dimension used for the randomized validation pass.
            samples (int): Number of random pairs in the validation pass.
            seed (int): Seed of the validation pass.
        """
        if not isinstance(kernel, Kernel):
            raise InputError("Only instances of Kernel can be registered.", name=name)
        validate_kernel(kernel, dim=dim, samples=samples, seed=seed)
        self.__kernels[name] = kernel
        self.logger.debug("Registered kernel %s as %s", kernel.name, name)
        return kernel

    def resolve(self, name, c_psi=None, gamma=None):
        """Return the kernel used by a run.

        The prototype entry is rebuilt from ``c_psi`` and ``gamma`` when they
        are given; other names are returned as registered.
        """
        if name == "prototype" and (c_psi is not None or gamma is not None):
            default = KernelSpec()
            return KernelSpec(c_psi=default.c_psi if c_psi is None else c_psi,
                              gamma=default.gamma if gamma is None else gamma)
        return self[name]
