"""
Fidelidad del estado cluster bajo ruido de fase gaussiano

F = |2^{−N} Σ_z Π_{(i,j)∈E} c_e^{z_i z_j}|², c_e = e^{−σ_e²/2}, z ∈ {0, 1}^N.
Sobre la cadena la suma se evalúa con una matriz de transferencia 2×2.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from qdcluster.analysis.cluster import InteractionGraph, resolve_graph
from qdcluster.config.constants import LIMITS
from qdcluster.core.errors import NoiseModelError
from qdcluster.utils.helpers import bit_table


class FidelityMethod(Enum):
    TRANSFER_MATRIX = 'transfer_matrix'
    BRUTE_FORCE = 'brute_force'
    MONTE_CARLO = 'monte_carlo'


@dataclass(frozen=True)
class FidelityResult:
    """Valor de fidelidad con su método; los campos mc_* solo para Monte Carlo"""

    n_qubits: int
    sigma: float
    value: float
    method: FidelityMethod
    graph: str
    mc_samples: Optional[int] = None
    mc_stderr: Optional[float] = None
    mc_mean_fidelity: Optional[float] = None
    mc_batch_means: Optional[List[float]] = field(default=None, compare=False)
    model: Optional[str] = None

    def __post_init__(self):
        if not (-1e-12 <= self.value <= 1.0 + 1e-12):
            raise ValueError(f"fidelity {self.value} outside [0, 1]")
        object.__setattr__(self, 'value', float(min(max(self.value, 0.0), 1.0)))
        is_mc = self.method is FidelityMethod.MONTE_CARLO
        mc_fields = (self.mc_samples, self.mc_stderr, self.mc_mean_fidelity, self.mc_batch_means)
        if is_mc and any(v is None for v in mc_fields):
            raise ValueError("Monte Carlo results need mc_samples, mc_stderr, mean fidelity and batch means")
        if not is_mc and any(v is not None for v in mc_fields):
            raise ValueError("mc_* fields are only allowed for Monte Carlo results")

    def as_dict(self) -> Dict:
        report = {
            'n_qubits': self.n_qubits,
            'sigma_rad': self.sigma,
            'value': self.value,
            'method': self.method.value,
            'graph': self.graph,
        }
        if self.method is FidelityMethod.MONTE_CARLO:
            report.update({
                'model': self.model,
                'mc_samples': self.mc_samples,
                'mc_stderr': self.mc_stderr,
                'mc_mean_fidelity': self.mc_mean_fidelity,
                'mc_batch_means': self.mc_batch_means,
            })
        return report


def characteristic(sigma: float) -> float:
    """E[e^{iθ}] para θ ~ G(0, σ²)"""
    if sigma < 0 or math.isnan(sigma):
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    return math.exp(-0.5 * sigma ** 2)


def fidelity_transfer_matrix(n_qubits: int, sigma: float,
                             graph: Union[str, InteractionGraph] = 'chain') -> FidelityResult:
    """
    F = ((1/2)·1ᵀ (T/2)^{N−1} 1)², T = [[1, 1], [1, c]].

    Solo para la cadena; O(N).
    """
    if int(n_qubits) != n_qubits or n_qubits < 2:
        raise ValueError(f"need at least 2 qubits, got {n_qubits}")
    if resolve_graph(graph, n_qubits).tag != 'chain':
        raise NoiseModelError("the transfer-matrix form only applies to chain graphs")
    c = characteristic(sigma)
    half = np.array([[0.5, 0.5], [0.5, 0.5 * c]])
    amplitude = 0.5 * float(np.ones(2) @ np.linalg.matrix_power(half, n_qubits - 1) @ np.ones(2))
    return FidelityResult(
        n_qubits=int(n_qubits),
        sigma=float(sigma),
        value=amplitude ** 2,
        method=FidelityMethod.TRANSFER_MATRIX,
        graph='chain',
    )


def fidelity_brute_force(n_qubits: int, sigma: Union[float, Sequence[float]],
                         graph: Union[str, InteractionGraph] = 'chain') -> FidelityResult:
    """
    Suma directa sobre los 2^N valores de z.

    Args:
        n_qubits: N ≤ 14
        sigma: σ común o una σ por arista (en el orden de graph.sorted_edges)
        graph: 'chain', 'complete' o un InteractionGraph

    Returns:
        FidelityResult con method = brute_force; sigma es la media cuadrática
        si se dan σ por arista
    """
    limit = LIMITS['max_qubits_bruteforce']
    if int(n_qubits) != n_qubits or not 1 <= n_qubits <= limit:
        raise ValueError(f"brute force needs 1 <= N <= {limit}, got {n_qubits}")
    resolved = resolve_graph(graph, n_qubits)
    edges = resolved.sorted_edges

    per_edge = np.ndim(sigma) > 0
    if per_edge:
        sigmas = np.asarray(sigma, dtype=float).ravel()
        if sigmas.size != len(edges):
            raise ValueError(f"expected {len(edges)} per-edge sigmas, got {sigmas.size}")
    else:
        sigmas = np.full(len(edges), float(sigma))
    checked = sigmas if per_edge else np.array([float(sigma)])
    if not (np.all(checked >= 0) and np.all(np.isfinite(checked))):
        raise ValueError("sigma values must be finite and >= 0")

    z = bit_table(n_qubits).astype(float)
    log_weight = np.zeros(2 ** n_qubits)
    for (i, j), s in zip(edges, sigmas):
        log_weight -= 0.5 * s ** 2 * z[:, i - 1] * z[:, j - 1]
    amplitude = float(np.mean(np.exp(log_weight)))

    if per_edge:
        # sin aristas no hay σ que promediar
        sigma_tag = float(np.sqrt(np.mean(sigmas ** 2))) if sigmas.size else 0.0
    else:
        sigma_tag = float(sigma)
    return FidelityResult(
        n_qubits=int(n_qubits),
        sigma=sigma_tag,
        value=amplitude ** 2,
        method=FidelityMethod.BRUTE_FORCE,
        graph=resolved.tag,
    )


def fidelity_floor(n_qubits: int) -> float:
    """Límite σ → ∞ en la cadena: (F_{N+2}/2^N)², F_k de Fibonacci"""
    previous, current = 0, 1
    for _ in range(n_qubits + 1):
        previous, current = current, previous + current
    # current = Fib(N+2): número de cadenas binarias sin dos unos seguidos
    return (current / 2.0 ** n_qubits) ** 2
