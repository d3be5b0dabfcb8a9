"""
Curva de fidelidad frente a N
"""
from typing import Iterable

import numpy as np
import pandas as pd

from qdcluster.analysis.noise.fidelity import fidelity_brute_force, fidelity_transfer_matrix
from qdcluster.analysis.noise.sampling import fidelity_monte_carlo
from qdcluster.analysis.noise.variances import NoiseSpec
from qdcluster.config.constants import LIMITS

CURVE_COLUMNS = ['N', 'sigma_rad', 'F_transfer', 'F_bruteforce', 'F_mc', 'mc_stderr']


def fidelity_curve(n_values: Iterable[int], sigma: float, mc_samples: int = 0,
                   rng_seed: int = 0, workers: int = 1) -> pd.DataFrame:
    """
    Una fila por N sobre la cadena.

    F_bruteforce solo para N ≤ 14; F_mc y mc_stderr solo si mc_samples > 0
    (modelo bond_phase). Los huecos quedan como NaN.
    """
    noise = NoiseSpec(sigma=sigma)
    rows = []
    for n in n_values:
        row = {
            'N': int(n),
            'sigma_rad': float(sigma),
            'F_transfer': fidelity_transfer_matrix(n, sigma).value,
            'F_bruteforce': np.nan,
            'F_mc': np.nan,
            'mc_stderr': np.nan,
        }
        if n <= LIMITS['max_qubits_bruteforce']:
            row['F_bruteforce'] = fidelity_brute_force(n, sigma).value
        if mc_samples > 0:
            result = fidelity_monte_carlo(n, noise, 'bond_phase', 'chain', mc_samples,
                                          rng_seed, workers=workers)
            row['F_mc'] = result.value
            row['mc_stderr'] = result.mc_stderr
        rows.append(row)
    frame = pd.DataFrame(rows, columns=CURVE_COLUMNS)
    return frame.astype({'N': int})
