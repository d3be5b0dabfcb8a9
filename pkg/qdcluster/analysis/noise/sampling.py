"""
Muestreo de realizaciones de ruido y Monte Carlo de la fidelidad

Todas las fases de error son diagonales en la base σˣ y conmutan con el gate
ideal, así que ⟨ψ_ideal|ψ_ruidoso⟩ = 2^{−N} Σ_p e^{−iφ(p)}.

Cada muestra usa su propio stream sample_stream(seed, índice): el resultado
no depende del número de workers ni del reparto de bloques.
"""
import math
from enum import Enum
from multiprocessing import Pool
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from qdcluster.analysis.cluster import (
    InteractionGraph,
    complete_graph_amplitudes,
    from_label_amplitudes,
    resolve_graph,
)
from qdcluster.analysis.noise.fidelity import FidelityMethod, FidelityResult
from qdcluster.analysis.noise.variances import NoiseSpec
from qdcluster.config.constants import LIMITS
from qdcluster.core.errors import NoiseModelError
from qdcluster.core.qsys import StateVector
from qdcluster.utils.helpers import bit_table, sample_stream
from qdcluster.utils.log import get_logger

logger = get_logger(__name__)


class NoiseModel(Enum):
    # Una fase θ_e ~ G(0, σ²) por arista sobre z_i z_j (z = nˣ)
    BOND_PHASE = 'bond_phase'
    # Fase global α Σ_{i<j} σᵢˣσⱼˣ más β_i σᵢˣ por qubit
    WIDETEXT = 'widetext'


def _resolve_model(model: Union[str, NoiseModel]) -> NoiseModel:
    try:
        return NoiseModel(model)
    except ValueError as exc:
        choices = [m.value for m in NoiseModel]
        raise NoiseModelError(f"unknown noise model {model!r}; expected one of {choices}") from exc


# ================================
# FASES DE ERROR
# ================================

def _draw(model: NoiseModel, noise: NoiseSpec, n_qubits: int, n_edges: int,
          rng: np.random.Generator) -> Tuple[np.ndarray, float, np.ndarray]:
    """(θ por arista, α, β por qubit) en un orden de extracción fijo"""
    if model is NoiseModel.BOND_PHASE:
        return rng.normal(0.0, noise.sigma, size=n_edges), 0.0, np.zeros(n_qubits)
    # θ₁ = 4∫δλ y θ₂ = 4∫δη/(N−1)
    alpha = float(rng.normal(0.0, noise.sigma1 / 4.0))
    beta = rng.normal(0.0, noise.sigma2 * (n_qubits - 1) / 4.0, size=n_qubits)
    return np.zeros(n_edges), alpha, beta


def _error_phases(n_qubits: int, edges: Sequence[Tuple[int, int]], thetas: np.ndarray,
                  alpha: float, beta: np.ndarray) -> np.ndarray:
    """φ(p) sobre las 2^N etiquetas"""
    labels = bit_table(n_qubits).astype(float)
    z = 1.0 - labels
    s = 1.0 - 2.0 * labels
    phases = np.zeros(2 ** n_qubits)
    for (i, j), theta in zip(edges, thetas):
        phases += theta * z[:, i - 1] * z[:, j - 1]
    if alpha != 0.0:
        total = s.sum(axis=1)
        phases += alpha * (total ** 2 - n_qubits) / 2.0
    phases += s @ beta
    return phases


def _chain_overlap(thetas: np.ndarray) -> complex:
    """2^{−N} 1ᵀ Π_j [[1, 1], [1, e^{−iθ_j}]] 1 en O(N)"""
    vector = np.array([0.5, 0.5], dtype=complex)
    for theta in thetas:
        vector = np.array([vector[0] + vector[1], vector[0] + vector[1] * np.exp(-1j * theta)]) / 2.0
    return complex(vector.sum())


def _overlap_one(n_qubits: int, noise: NoiseSpec, model: NoiseModel,
                 edges: Sequence[Tuple[int, int]], chain: bool, seed: int, index: int) -> complex:
    rng = sample_stream(seed, index)
    thetas, alpha, beta = _draw(model, noise, n_qubits, len(edges), rng)
    if model is NoiseModel.BOND_PHASE and chain:
        return _chain_overlap(thetas)
    phases = _error_phases(n_qubits, edges, thetas, alpha, beta)
    return complex(np.mean(np.exp(-1j * phases)))


def _overlap_chunk(args) -> np.ndarray:
    n_qubits, noise, model, edges, chain, seed, start, stop = args
    return np.array(
        [_overlap_one(n_qubits, noise, model, edges, chain, seed, i) for i in range(start, stop)],
        dtype=complex,
    )


# ================================
# API
# ================================

def sample_noisy_state(n_qubits: int, noise: NoiseSpec, model: Union[str, NoiseModel],
                       rng_seed: int, graph: Union[str, InteractionGraph] = 'chain',
                       sample_index: int = 0,
                       bond_phases: Optional[Sequence[float]] = None) -> StateVector:
    """
    Estado ideal seguido del operador de error de una realización.

    Args:
        n_qubits: Número de qubits
        noise: Desviaciones típicas
        model: 'bond_phase' o 'widetext'
        rng_seed: Semilla
        graph: Aristas que reciben fase en bond_phase
        sample_index: Índice de la realización dentro de la semilla
        bond_phases: Fuerza los θ por arista (solo bond_phase)

    Returns:
        StateVector de solo qubits
    """
    model = _resolve_model(model)
    resolved = resolve_graph(graph, n_qubits)
    edges = resolved.sorted_edges
    if n_qubits > LIMITS['max_qubits_bruteforce']:
        raise ValueError(f"explicit noisy states are limited to {LIMITS['max_qubits_bruteforce']} qubits")

    if bond_phases is not None:
        if model is not NoiseModel.BOND_PHASE:
            raise NoiseModelError("bond phases can only be forced in the bond_phase model")
        thetas = np.asarray(bond_phases, dtype=float)
        if thetas.shape != (len(edges),):
            raise NoiseModelError(f"expected {len(edges)} bond phases, got {thetas.shape}")
        alpha, beta = 0.0, np.zeros(n_qubits)
    else:
        rng = sample_stream(rng_seed, sample_index)
        thetas, alpha, beta = _draw(model, noise, n_qubits, len(edges), rng)

    phases = _error_phases(n_qubits, edges, thetas, alpha, beta)
    amplitudes = complete_graph_amplitudes(n_qubits) * np.exp(-1j * phases)
    return from_label_amplitudes(amplitudes, n_qubits)


def fidelity_monte_carlo(n_qubits: int, noise: NoiseSpec, model: Union[str, NoiseModel] = 'bond_phase',
                         graph: Union[str, InteractionGraph] = 'chain', samples: int = 20000,
                         rng_seed: int = 0, batches: int = LIMITS['min_mc_batches'],
                         workers: int = 1) -> FidelityResult:
    """
    F = |media de ⟨ψ_ideal|ψ_ruidoso⟩|², con error por medias de lotes.

    El error típico usa la linealización δF = 2 Re(m̄* δm) sobre `batches`
    lotes contiguos. También se devuelve E|⟨·⟩|² como mc_mean_fidelity.
    """
    model = _resolve_model(model)
    if samples < LIMITS['min_mc_samples']:
        raise ValueError(f"samples must be >= {LIMITS['min_mc_samples']}, got {samples}")
    if batches < LIMITS['min_mc_batches'] or samples < 2 * batches:
        raise ValueError(f"degenerate batching: {samples} samples in {batches} batches")
    if workers < 1:
        raise ValueError("workers must be >= 1")

    resolved = resolve_graph(graph, n_qubits)
    chain = resolved.tag == 'chain'
    if not (model is NoiseModel.BOND_PHASE and chain) and n_qubits > LIMITS['max_qubits_bruteforce']:
        raise ValueError(
            f"Monte Carlo beyond {LIMITS['max_qubits_bruteforce']} qubits needs bond_phase on a chain"
        )

    edges = resolved.sorted_edges
    bounds = np.linspace(0, samples, max(workers, 1) * 4 + 1).astype(int)
    tasks = [
        (n_qubits, noise, model, edges, chain, rng_seed, int(a), int(b))
        for a, b in zip(bounds[:-1], bounds[1:]) if b > a
    ]
    if workers == 1:
        parts = [_overlap_chunk(task) for task in tasks]
    else:
        with Pool(processes=workers) as pool:
            parts = pool.map(_overlap_chunk, tasks)
    overlaps = np.concatenate(parts)

    mean = complex(overlaps.mean())
    batch_means = np.array([chunk.mean() for chunk in np.array_split(overlaps, batches)])
    projected = (np.conj(mean) * batch_means).real
    stderr = 2.0 * float(np.std(projected, ddof=1)) / math.sqrt(batches)
    value = abs(mean) ** 2

    logger.debug("monte carlo N=%d model=%s graph=%s: F=%.6f +- %.2e",
                 n_qubits, model.value, resolved.tag, value, stderr)
    return FidelityResult(
        n_qubits=int(n_qubits),
        sigma=float(noise.sigma),
        value=value,
        method=FidelityMethod.MONTE_CARLO,
        graph=resolved.tag,
        mc_samples=int(samples),
        mc_stderr=stderr,
        mc_mean_fidelity=float(np.mean(np.abs(overlaps) ** 2)),
        mc_batch_means=[abs(m) ** 2 for m in batch_means],
        model=model.value,
    )
