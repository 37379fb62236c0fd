"""Brute-force master-equation integration on the full truncated space.

This module is deliberately ignorant of the block structure that the rest of
the package exploits: states are dense matrices over the product basis
|n, i> -> k = 2 n + (i - 1), the generator is the textbook commutator plus
dephasing dissipator, and time stepping is plain fixed-step RK4.  Agreement
between this integrator and the closed form in ``evolution`` certifies both.

For speed the stepper applies the generator as a sparse matrix acting on the
flattened state; ``lindblad_rhs`` keeps the readable dense form and the two
are tested against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .model import BlockState, ModelParams


def basis_index(n: int, i: int) -> int:
    """Flat index of |n, i> with i = 1 (ground) or 2 (excited)."""
    if i not in (1, 2):
        raise ValueError("atomic level must be 1 or 2")
    if n < 0:
        raise ValueError("photon number must be non-negative")
    return 2 * n + (i - 1)


def space_dim(n_max: int) -> int:
    return 2 * (n_max + 1)


def hamiltonian(params: ModelParams) -> np.ndarray:
    """Resonant coupling in the rotating frame: kbar sqrt(n+1) between the
    paired levels |n, 1> and |n+1, 2>."""
    dim = space_dim(params.n_max)
    ham = np.zeros((dim, dim))
    for n in range(params.n_max):
        g = basis_index(n, 1)
        e = basis_index(n + 1, 2)
        ham[g, e] = ham[e, g] = params.kappa_bar * math.sqrt(n + 1.0)
    return ham


def dephasing_signs(n_max: int) -> np.ndarray:
    """Diagonal of the atomic inversion operator: -1 ground, +1 excited."""
    signs = np.empty(space_dim(n_max))
    signs[0::2] = -1.0
    signs[1::2] = 1.0
    return signs


def lindblad_rhs(rho: np.ndarray, params: ModelParams) -> np.ndarray:
    """d rho / d tau = -i [H, rho] + (gamma_bar / 2) (Z rho Z - rho)."""
    ham = hamiltonian(params)
    signs = dephasing_signs(params.n_max)
    comm = ham @ rho - rho @ ham
    deph = signs[:, None] * rho * signs[None, :] - rho
    return -1j * comm + 0.5 * params.gamma_bar * deph


def liouvillian(params: ModelParams) -> sparse.csr_matrix:
    """Sparse generator acting on the flattened state.

    vec(d rho) = L vec(rho) with L = -i (H x I - I x H^T)
    + (gamma_bar / 2) (Z x Z - I), using row-major flattening.
    """
    dim = space_dim(params.n_max)
    ham = sparse.csr_matrix(hamiltonian(params))
    eye = sparse.identity(dim, format="csr")
    signs = dephasing_signs(params.n_max)
    z_op = sparse.diags(signs, format="csr")
    lop = -1j * (sparse.kron(ham, eye) - sparse.kron(eye, ham.T))
    lop = lop + 0.5 * params.gamma_bar * (
        sparse.kron(z_op, z_op) - sparse.identity(dim * dim, format="csr")
    )
    return lop.tocsr()


def _max_step(params: ModelParams) -> float | None:
    """Stability bound 0.1 / E(n_max), or None when no pair oscillates."""
    radicand = (
        4.0 * params.kappa_bar**2 * params.n_max - (0.5 * params.gamma_bar) ** 2
    )
    if radicand <= 0:
        return None
    return 0.1 / math.sqrt(radicand)


def _check_step(params: ModelParams, dt: float) -> None:
    if dt <= 0:
        raise ValueError("dt must be positive")
    bound = _max_step(params)
    if bound is not None and dt > bound:
        raise ValueError(
            f"dt = {dt:g} exceeds the resolution bound {bound:g} "
            "for the fastest pair"
        )


def _rk4_span(lop: sparse.csr_matrix, vec: np.ndarray, span: float, dt: float):
    """Advance vec by span using fixed RK4 steps of dt plus one short step."""
    steps = int(math.floor(span / dt + 1e-9))
    remainder = span - steps * dt
    if remainder < 1e-9 * dt:
        remainder = 0.0
    for _ in range(steps):
        vec = _rk4_step(lop, vec, dt)
    if remainder > 0.0:
        vec = _rk4_step(lop, vec, remainder)
    return vec


def _rk4_step(lop: sparse.csr_matrix, vec: np.ndarray, h: float) -> np.ndarray:
    k1 = lop @ vec
    k2 = lop @ (vec + 0.5 * h * k1)
    k3 = lop @ (vec + 0.5 * h * k2)
    k4 = lop @ (vec + h * k3)
    return vec + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


def integrate_path(rho0: np.ndarray, params: ModelParams, taus, dt: float):
    """Integrate once, returning the state at every requested time.

    ``taus`` must be non-negative and strictly increasing.  Each returned
    matrix is re-Hermitized; the carried state is not touched, so the path is
    a single continuous integration.
    """
    _check_step(params, dt)
    times = [float(t) for t in taus]
    if not times:
        return []
    if times[0] < 0 or any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
        raise ValueError("taus must be non-negative and strictly increasing")
    dim = space_dim(params.n_max)
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (dim, dim):
        raise ValueError(f"state shape {rho0.shape} != ({dim}, {dim})")

    lop = liouvillian(params)
    vec = rho0.ravel().copy()
    out = []
    prev = 0.0
    for t in times:
        vec = _rk4_span(lop, vec, t - prev, dt)
        prev = t
        mat = vec.reshape(dim, dim)
        out.append(0.5 * (mat + mat.conj().T))
    return out


def integrate(
    rho0: np.ndarray, params: ModelParams, tau_end: float, dt: float
) -> np.ndarray:
    """Integrate to tau_end and return the (re-Hermitized) final state."""
    if tau_end < 0:
        raise ValueError("tau_end must be non-negative")
    if tau_end == 0.0:
        _check_step(params, dt)
        rho0 = np.asarray(rho0, dtype=complex)
        return 0.5 * (rho0 + rho0.conj().T)
    return integrate_path(rho0, params, [tau_end], dt)[0]


def dense_from_block(state: BlockState) -> np.ndarray:
    """Embed a block state into the dense product-basis matrix."""
    dim = space_dim(state.n_max)
    rho = np.zeros((dim, dim), dtype=complex)
    for n in range(state.n_max + 1):
        rho[basis_index(n, 1), basis_index(n, 1)] = state.a[n]
        rho[basis_index(n, 2), basis_index(n, 2)] = state.b[n]
    for n in range(state.n_max):
        g = basis_index(n, 1)
        e = basis_index(n + 1, 2)
        rho[g, e] = state.c[n]
        rho[e, g] = np.conj(state.c[n])
    return rho


@dataclass(frozen=True)
class ComparisonReport:
    """Elementwise disagreement between a dense state and a block state."""

    max_abs: float
    by_class: dict

    def __str__(self) -> str:
        parts = ", ".join(f"{k}={v:.3e}" for k, v in self.by_class.items())
        return f"max |diff| = {self.max_abs:.3e} ({parts})"


def compare_states(dense: np.ndarray, block: BlockState) -> ComparisonReport:
    """Max |difference| overall and split by matrix-element class.

    Classes: 'a' and 'b' are the two diagonals, 'c' the intra-pair
    coherences, 'off_block' everything the block structure says must vanish.
    """
    dim = space_dim(block.n_max)
    dense = np.asarray(dense, dtype=complex)
    if dense.shape != (dim, dim):
        raise ValueError(f"state shape {dense.shape} != ({dim}, {dim})")
    diff = np.abs(dense - dense_from_block(block))

    ground = np.zeros((dim, dim), dtype=bool)
    excited = np.zeros_like(ground)
    coherent = np.zeros_like(ground)
    for n in range(block.n_max + 1):
        ground[basis_index(n, 1), basis_index(n, 1)] = True
        excited[basis_index(n, 2), basis_index(n, 2)] = True
    for n in range(block.n_max):
        g, e = basis_index(n, 1), basis_index(n + 1, 2)
        coherent[g, e] = coherent[e, g] = True
    off = ~(ground | excited | coherent)

    by_class = {
        "a": float(diff[ground].max()),
        "b": float(diff[excited].max()),
        "c": float(diff[coherent].max()),
        "off_block": float(diff[off].max()),
    }
    return ComparisonReport(max_abs=float(diff.max()), by_class=by_class)
