"""
Kernel is the base class for the interaction weights Psi(x, y) shared by the
particle system and the hydrodynamic sources.

All kernels are symmetric and bounded by their amplitude ``c_psi``. Pairwise
matrices are built block by block so that entry (i, j) and entry (j, i) are
bit-identical; the conservation identities downstream rely on it.

Classes:
    - Kernel: Base class with the pairwise-matrix machinery.
    - KernelSpec: The prototype family c_psi / (1 + |x - y|^2)^gamma.
    - CustomKernel: Wraps a user supplied symmetric, bounded function.

Functions:
    - psi_eval: Evaluate a kernel at two points.
    - validate_kernel: Randomized symmetry and bound checks.
"""
from dataclasses import dataclass

import numpy as np

from turnpike.exceptions import InputError

# Upper bound on the number of pairwise entries materialized at once.
BLOCK_ENTRIES = 1 << 22


def as_points(points):
    """Return ``points`` as a float (N, D) array."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise InputError("points must be an (N, D) array", shape=arr.shape)
    return arr


class Kernel:
    """Base class for symmetric bounded interaction kernels.

    Subclasses implement :meth:`pair_values`, which evaluates the kernel on
    index pairs (i, j) with i <= j. The base class mirrors those values so that
    every matrix it hands out is exactly symmetric.

    Attributes:
        c_psi (float): Upper bound of the kernel.
        name (str): Human readable name used in reports.
    """

    c_psi = 1.0
    name = "kernel"

    def pair_values(self, left, right):
        """Evaluate Psi on row-aligned point arrays of shape (..., D)."""
        raise NotImplementedError

    def __call__(self, x, y):
        """Evaluate Psi(x, y) for two single points."""
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        y = np.atleast_1d(np.asarray(y, dtype=np.float64))
        if x.shape != y.shape:
            raise InputError("x and y must have the same dimension", x=x.shape, y=y.shape)
        return float(self.pair_values(x[None, :], y[None, :])[0])

    def block(self, points, start, stop):
        """Return rows ``start:stop`` of the pairwise matrix of ``points``.

        Args:
            points: (N, D) array of positions.
            start (int): First row.
            stop (int): One past the last row.

        Returns:
            numpy.ndarray: (stop - start, N) kernel weights.
        """
        rows = np.arange(start, stop)[:, None]
        cols = np.arange(points.shape[0])[None, :]
        # Always evaluate with the lower index first.
        lo = np.minimum(rows, cols)
        hi = np.maximum(rows, cols)
        return self.pair_values(points[lo], points[hi])

    def row_blocks(self, points):
        """Yield ``(start, stop, block)`` triples covering the pairwise matrix."""
        points = as_points(points)
        n = points.shape[0]
        step = max(1, BLOCK_ENTRIES // max(n, 1))
        for start in range(0, n, step):
            stop = min(n, start + step)
            yield start, stop, self.block(points, start, stop)

    def matrix(self, points):
        """Return the full (N, N) pairwise matrix of ``points``."""
        points = as_points(points)
        return np.vstack([blk for _, _, blk in self.row_blocks(points)])


@dataclass(frozen=True)
class KernelSpec(Kernel):
    """Prototype kernel c_psi / (1 + |x - y|^2)^gamma.

    Evaluation goes through the squared distance only, which makes
    Psi(x, y) == Psi(y, x) hold bit for bit.

    Attributes:
        c_psi (float): Kernel amplitude, strictly positive.
        gamma (float): Decay exponent, nonnegative. ``gamma = 0`` gives the
            constant kernel ``c_psi``.
    """

    c_psi: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.c_psi) or self.c_psi <= 0:
            raise InputError("kernel amplitude must be positive", c_psi=self.c_psi)
        if not np.isfinite(self.gamma) or self.gamma < 0:
            raise InputError("kernel exponent must be nonnegative", gamma=self.gamma)

    @property
    def name(self):
        return "prototype(c_psi=%r, gamma=%r)" % (self.c_psi, self.gamma)

    def from_squared_distance(self, r2):
        """Evaluate the kernel from squared distances."""
        r2 = np.asarray(r2, dtype=np.float64)
        if self.gamma == 0:
            return np.full(r2.shape, self.c_psi)
        if self.gamma == 1:
            return self.c_psi / (1.0 + r2)
        return self.c_psi / np.power(1.0 + r2, self.gamma)

    def pair_values(self, left, right):
        diff = left - right
        return self.from_squared_distance(np.sum(diff * diff, axis=-1))

    def block(self, points, start, stop):
        # (x_i - x_j)^2 == (x_j - x_i)^2 exactly, no mirroring needed.
        diff = points[start:stop, None, :] - points[None, :, :]
        return self.from_squared_distance(np.sum(diff * diff, axis=-1))


class CustomKernel(Kernel):
    """User supplied kernel declared symmetric and bounded.

    Args:
        func: Callable taking two (..., D) arrays and returning the kernel
            values on matching rows.
        c_psi (float): Declared bound.
        name (str): Name used in reports.
    """

    def __init__(self, func, c_psi, name="custom"):
        if not np.isfinite(c_psi) or c_psi <= 0:
            raise InputError("kernel amplitude must be positive", c_psi=c_psi)
        self.func = func
        self.c_psi = float(c_psi)
        self.name = name

    def pair_values(self, left, right):
        return np.asarray(self.func(left, right), dtype=np.float64)

    def __repr__(self):
        return "<CustomKernel name=%s c_psi=%r>" % (self.name, self.c_psi)


def psi_eval(spec, x, y):
    """Evaluate the interaction kernel at two points.

    Args:
        spec (Kernel): The kernel, usually a :class:`KernelSpec`.
        x: Point in R^D.
        y: Point in R^D.

    Returns:
        float: Psi(x, y), in (0, c_psi].
    """
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    if x.ndim != 1 or x.shape != y.shape:
        raise InputError("x and y must be points of the same dimension", x=x.shape, y=y.shape)
    if isinstance(spec, KernelSpec):
        diff = x - y
        return float(spec.from_squared_distance(np.dot(diff, diff)))
    return spec(x, y)


def validate_kernel(kernel, dim=1, samples=256, scale=5.0, seed=0):
    """Run randomized symmetry and bound checks on a kernel.

    Args:
        kernel (Kernel): Kernel to check.
        dim (int): Dimension of the sample points.
        samples (int): Number of random pairs.
        scale (float): Spread of the sample points.
        seed (int): Seed of the sample generator.

    Raises:
        InputError: If a pair is asymmetric or out of (0, c_psi].
    """
    rng = np.random.default_rng(seed)
    left = scale * rng.standard_normal((samples, dim))
    right = scale * rng.standard_normal((samples, dim))
    forward = np.asarray(kernel.pair_values(left, right), dtype=np.float64)
    backward = np.asarray(kernel.pair_values(right, left), dtype=np.float64)
    if forward.shape != (samples,):
        raise InputError("kernel must return one value per pair", name=kernel.name, shape=forward.shape)
    if not np.array_equal(forward, backward):
        raise InputError("kernel is not symmetric", name=kernel.name)
    if not np.all(np.isfinite(forward)) or np.any(forward <= 0) or np.any(forward > kernel.c_psi):
        raise InputError("kernel leaves (0, c_psi]", name=kernel.name, c_psi=kernel.c_psi)
