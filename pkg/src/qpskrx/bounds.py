"""Classical and quantum baselines for QPSK discrimination.

The SQL is the heterodyne receiver's error probability; the Helstrom bound
for the symmetric pure-state alphabet is computed via the square-root
measurement, which is optimal for geometrically uniform states with equal
priors.  The Gram matrix of the four states is circulant, so its eigenvalues
come from a 4-point DFT of the first row.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import erf


def sql_heterodyne(alpha_sq: float) -> float:
    """Heterodyne (SQL) error probability at signal mean photon number ``alpha_sq``."""
    if alpha_sq < 0:
        raise ValueError(f"alpha_sq must be >= 0, got {alpha_sq}")
    return float(1.0 - 0.25 * (1.0 + erf(math.sqrt(alpha_sq / 2.0))) ** 2)


def sql_lossy(alpha_sq: float, eta_total: float) -> float:
    """SQL with the signal attenuated by the total detection efficiency."""
    if not 0.0 <= eta_total <= 1.0:
        raise ValueError(f"eta_total must be in [0, 1], got {eta_total}")
    return sql_heterodyne(eta_total * alpha_sq)


def qpsk_gram(alpha_sq: float) -> np.ndarray:
    """4x4 Gram matrix of the QPSK coherent states, G_mn = <alpha_m|alpha_n>."""
    m = np.arange(4)
    diff = m[None, :] - m[:, None]
    return np.exp(alpha_sq * (1j ** diff - 1.0))


def gram_eigenvalues(alpha_sq: float) -> np.ndarray:
    """Eigenvalues of the circulant Gram matrix via the closed-form DFT."""
    k = np.arange(4)
    c = np.exp(alpha_sq * (1j ** k - 1.0))  # first row of the circulant
    j = np.arange(4)
    lam = (c[None, :] * np.exp(2j * math.pi * j[:, None] * k[None, :] / 4)).sum(axis=1)
    lam = lam.real
    if np.any(lam < -1e-12):
        raise FloatingPointError(f"Gram eigenvalue significantly negative: {lam}")
    return np.clip(lam, 0.0, None)


def helstrom_qpsk(alpha_sq: float) -> float:
    """Minimum average error probability for the QPSK alphabet (equal priors)."""
    if alpha_sq < 0:
        raise ValueError(f"alpha_sq must be >= 0, got {alpha_sq}")
    lam = gram_eigenvalues(alpha_sq)
    return float(1.0 - (np.sqrt(lam).sum()) ** 2 / 16.0)
