"""
Module for the nonlocal alignment sources of the hydrodynamic systems.

The sources are midpoint-rule double sums over the cell centers against
rho (x) rho. ``spec=None`` switches the kernel off, and every source vanishes.
"""
import numpy as np

from .grid import exact_row_sums


def _pair_weights(grid, state, spec):
    psi = grid.kernel_matrix(spec)
    if psi is None:
        return None
    # rho_i * rho_j is commutative, so the weights are symmetric bit for bit.
    return psi * np.multiply.outer(state.rho, state.rho)


def q1_source(grid, state, spec):
    """Momentum source Q1(x_i) = sum_j Psi_ij rho_i rho_j (u_j - u_i) dx.

    The pairwise terms are antisymmetric; they are summed with
    :func:`exact_row_sums`, so ``sum(Q1) * dx`` is exactly 0.

    Args:
        grid (Grid1D): The grid.
        state: Any hydro state exposing ``rho`` and ``mom``.
        spec (Kernel): Interaction kernel, or None for no alignment.

    Returns:
        numpy.ndarray: Per-cell source.
    """
    weights = _pair_weights(grid, state, spec)
    if weights is None:
        return np.zeros_like(state.rho)
    u = state.mom / state.rho
    terms = weights * np.subtract.outer(u, u).T * grid.dx
    return exact_row_sums(terms)


def q2_source(grid, state, spec):
    """Energy source Q2(x_i) = sum_j Psi_ij rho_i rho_j (u_i u_j - E_i - E_j) dx.

    Uses the identity u_i u_j - E_i - E_j = -(e_i + e_j + (u_i - u_j)^2 / 2),
    so every pairwise term is nonpositive whenever e >= 0.

    Args:
        grid (Grid1D): The grid.
        state (EulerState): State exposing ``rho``, ``mom`` and ``ener``.
        spec (Kernel): Interaction kernel, or None for no alignment.

    Returns:
        numpy.ndarray: Per-cell source.
    """
    weights = _pair_weights(grid, state, spec)
    if weights is None:
        return np.zeros_like(state.rho)
    u = state.mom / state.rho
    e = state.ener / state.rho - 0.5 * u * u
    du = np.subtract.outer(u, u)
    terms = -weights * (np.add.outer(e, e) + 0.5 * du * du)
    return terms.sum(axis=1) * grid.dx


def q2_moment_source(grid, state, spec, q1=None):
    """Energy source Q2(x_i) = sum_j Psi_ij rho_i rho_j (u_i u_j - 2 E_i) dx.

    The energy moment of the alignment force. Its integral equals that of
    :func:`q2_source`, but the two forms split the energy between cells
    differently: paired with Q1, this one changes rho e at x_i only by
    ``-2 e_i sum_j Psi_ij rho_i rho_j dx``, so it never drives the internal
    energy negative. The symmetric form adds
    ``(u_i^2 - u_j^2) / 2 - e_i - e_j`` per pair, which has no fixed sign.

    Args:
        grid (Grid1D): The grid.
        state (EulerState): State exposing ``rho``, ``mom`` and ``ener``.
        spec (Kernel): Interaction kernel, or None for no alignment.
        q1 (numpy.ndarray): Q1 of the same state, recomputed when None.

    Returns:
        numpy.ndarray: Per-cell source.
    """
    weights = _pair_weights(grid, state, spec)
    if weights is None:
        return np.zeros_like(state.rho)
    if q1 is None:
        q1 = q1_source(grid, state, spec)
    u = state.mom / state.rho
    e = state.ener / state.rho - 0.5 * u * u
    return u * q1 - 2.0 * e * weights.sum(axis=1) * grid.dx


def alignment_rate(grid, state, spec):
    """Bound on the relaxation rate of the alignment source, c_psi times the mass."""
    if spec is None:
        return 0.0
    return spec.c_psi * grid.integrate(state.rho)
