"""Reduced states, entropies, and the atomic inversion.

All entropies are Shannon/von Neumann in nats.  Because the joint state is
block diagonal and both marginals are diagonal in their natural bases, every
entropy reduces to a Shannon sum over known weights; nothing here
diagonalizes more than the 2x2 blocks already handled by
``spectral_decompose``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evolution import SpectralDecomposition, spectral_decompose
from .model import BlockState

# Weights below this are dropped from entropy sums (0 ln 0 := 0, and the
# logarithm would otherwise overflow for denormals).
_ENTROPY_FLOOR = 1e-300


def shannon_entropy(weights) -> float:
    """-sum w ln w over the entries above the underflow floor."""
    w = np.asarray(weights, dtype=float).ravel()
    w = w[w > _ENTROPY_FLOOR]
    if w.size == 0:
        return 0.0
    return float(-np.dot(w, np.log(w)))


def reduced_states(state: BlockState):
    """Marginals of the joint state: (photon distribution, w1, w2).

    The photon marginal is p(n) = a[n] + b[n]; the atomic marginal is
    diagonal with ground weight w1 = sum a and excited weight w2 = sum b.
    """
    photon = state.a + state.b
    return photon, float(np.sum(state.a)), float(np.sum(state.b))


def atomic_inversion(state: BlockState) -> float:
    """Population difference w1 - w2 between atomic ground and excited."""
    return float(np.sum(state.a) - np.sum(state.b))


@dataclass(frozen=True)
class EntropyReport:
    """Entropy functionals of one joint state, all in nats.

    s_atom / s_rad   marginal entropies of atom and field
    s_joint          entropy of the joint state
    s_decohered      entropy of the joint diagonal (coherences dropped)
    deficit          s_decohered - s_joint, the entropy held in coherences
    rel_atom         s_joint - s_atom, conditional entropy of the field
                     given the atom (negative only for nonclassical states)
    rel_rad          s_joint - s_rad, conditional entropy of the atom
                     given the field
    mutual           s_atom + s_rad - s_joint
    inversion        atomic inversion w1 - w2
    """

    s_atom: float
    s_rad: float
    s_joint: float
    s_decohered: float
    deficit: float
    rel_atom: float
    rel_rad: float
    mutual: float
    inversion: float


def entropy_report(
    state: BlockState, decomp: SpectralDecomposition | None = None
) -> EntropyReport:
    """Compute every entropy functional of one state.

    Pass the state's spectral decomposition if it is already available;
    otherwise it is computed here.
    """
    if decomp is None:
        decomp = spectral_decompose(state)
    photon, w1, w2 = reduced_states(state)
    s_atom = shannon_entropy([w1, w2])
    s_rad = shannon_entropy(photon)
    s_joint = shannon_entropy(decomp.eigenvalues())
    s_dec = shannon_entropy(np.concatenate([state.a, state.b]))
    return EntropyReport(
        s_atom=s_atom,
        s_rad=s_rad,
        s_joint=s_joint,
        s_decohered=s_dec,
        deficit=s_dec - s_joint,
        rel_atom=s_joint - s_atom,
        rel_rad=s_joint - s_rad,
        mutual=s_atom + s_rad - s_joint,
        inversion=w1 - w2,
    )
