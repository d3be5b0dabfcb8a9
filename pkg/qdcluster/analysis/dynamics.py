"""
Hamiltonianos y propagadores

Dos caminos de propagación:
- Ordenado en el tiempo (regla del punto medio) sobre el Hamiltoniano en
  imagen de interacción. Es la referencia.
- Exponencial del Hamiltoniano estático en el marco rotante a frecuencia δ.
  Coincide con el anterior en tiempos estroboscópicos δτ = 2kπ.

Operadores efectivos (solo qubits): acoplo σˣσˣ, operador total con drive,
el gate de cluster diagonal en la base σˣ y el modelo XY de segundo orden
−(g₀²/δ)S⁺S⁻ + ηSˣ que sale del acoplo con σ±.

La cavidad empieza siempre en el vacío.
"""
import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np
from scipy import linalg

from qdcluster.analysis.dotmodel import solve_schedule
from qdcluster.config.constants import TOLERANCES
from qdcluster.core.errors import ConvergenceError, LayoutError, OperatorError
from qdcluster.core.qsys import (
    SIGMA_MINUS,
    SIGMA_X,
    X_BASIS,
    HilbertLayout,
    LinOperator,
    annihilation,
    cavity_vacuum_projector,
    collective_qubit_op,
    embed_cavity_op,
    embed_qubit_op,
    extend_to_cavity,
    mat_exp,
    unitary_fidelity_up_to_phase,
)
from qdcluster.utils.helpers import bit_table
from qdcluster.utils.log import get_logger

logger = get_logger(__name__)

HamiltonianFn = Callable[[float], LinOperator]


@dataclass(frozen=True)
class DriveParams:
    """Drive clásico η Σσˣ aplicado a todos los qubits a la vez"""

    amplitude: float
    applied_to_all: bool = True

    def __post_init__(self):
        if not (self.amplitude >= 0 and math.isfinite(self.amplitude)):
            raise ValueError(f"drive amplitude must be >= 0, got {self.amplitude}")
        if not self.applied_to_all:
            raise ValueError("only a simultaneous drive on all qubits is supported")


def _drive_amplitude(drive: Union[float, DriveParams]) -> float:
    if isinstance(drive, DriveParams):
        return drive.amplitude
    return DriveParams(float(drive)).amplitude


@dataclass(frozen=True)
class DispersiveGateReport:
    fidelity_up_to_phase: float
    leakage: float
    fidelity_xy: float
    converged: bool
    fidelity_raised_cutoff: Optional[float]
    fock_cutoff: int
    n_qubits: int
    k: int
    n: int
    g0: float
    delta: float
    tau: float
    lam: float

    def as_dict(self) -> Dict:
        return {
            'n_qubits': self.n_qubits,
            'k': self.k,
            'n': self.n,
            'fock_cutoff': self.fock_cutoff,
            'g0_rad_s': self.g0,
            'delta_rad_s': self.delta,
            'tau_s': self.tau,
            'lambda_rad_s': self.lam,
            'fidelity_up_to_phase': self.fidelity_up_to_phase,
            'leakage': self.leakage,
            'fidelity_xy_model': self.fidelity_xy,
            'fidelity_raised_cutoff': self.fidelity_raised_cutoff,
            'cutoff_converged': self.converged,
        }


# ================================
# BLOQUES CONSTRUCTIVOS
# ================================

@lru_cache(maxsize=16)
def _ladder_blocks(layout: HilbertLayout) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(a† S⁻, a†a, Σσˣ) embebidos; S⁻ = Σᵢ σᵢ⁻"""
    if layout.fock_cutoff < 1:
        raise LayoutError("the cavity needs fock_cutoff >= 1")
    a = embed_cavity_op(layout, annihilation(layout.fock_cutoff)).matrix
    s_minus = collective_qubit_op(layout, SIGMA_MINUS).matrix
    sx = collective_qubit_op(layout, SIGMA_X).matrix
    raising = a.conj().T @ s_minus
    number = a.conj().T @ a
    blocks = (raising, number, sx)
    for block in blocks:
        block.setflags(write=False)
    return blocks


@lru_cache(maxsize=16)
def x_basis_matrix(n_qubits: int) -> np.ndarray:
    """B^{⊗N}: columnas = productos de autoestados de σˣ en orden de bit_table"""
    matrix = reduce(np.kron, [X_BASIS] * n_qubits)
    matrix.setflags(write=False)
    return matrix


@lru_cache(maxsize=16)
def _pair_sum_xx(n_qubits: int) -> np.ndarray:
    """Σ_{i<j} σᵢˣσⱼˣ sobre el layout solo de qubits"""
    layout = HilbertLayout(n_qubits, 0)
    singles = [embed_qubit_op(layout, i, SIGMA_X).matrix for i in range(1, n_qubits + 1)]
    total = np.zeros((layout.dim, layout.dim), dtype=complex)
    for i in range(n_qubits):
        for j in range(i + 1, n_qubits):
            total += singles[i] @ singles[j]
    total.setflags(write=False)
    return total


# ================================
# HAMILTONIANOS
# ================================

def h_jc_interaction(layout: HilbertLayout, g0: float, delta: float, t: float) -> LinOperator:
    """g₀ Σᵢ (e^{iδt} a†σᵢ⁻ + e^{−iδt} a σᵢ⁺)"""
    raising, _, _ = _ladder_blocks(layout)
    phase = np.exp(1j * delta * t)
    matrix = g0 * (phase * raising + np.conj(phase) * raising.conj().T)
    return LinOperator(layout, matrix, hermitian_hint=True)


def h_total(layout: HilbertLayout, g0: float, delta: float, drive: Union[float, DriveParams],
            t: float) -> LinOperator:
    """Acoplo JC en imagen de interacción más el drive η Σσˣ"""
    _, _, sx = _ladder_blocks(layout)
    jc = h_jc_interaction(layout, g0, delta, t)
    return jc + LinOperator(layout, _drive_amplitude(drive) * sx, hermitian_hint=True)


def h_static_frame(layout: HilbertLayout, g0: float, delta: float,
                   drive: Union[float, DriveParams]) -> LinOperator:
    """
    H′ = δ a†a + g₀ Σᵢ(a†σᵢ⁻ + aσᵢ⁺) + η Σσˣ.

    Es el Hamiltoniano total visto desde el marco que rota con e^{−iδt a†a}.
    El operador de marco vale la identidad cuando δτ = 2kπ, así que
    exp(−iH′τ) es el propagador en imagen de interacción en esos tiempos.
    """
    raising, number, sx = _ladder_blocks(layout)
    eta = _drive_amplitude(drive)
    matrix = delta * number + g0 * (raising + raising.conj().T) + eta * sx
    return LinOperator(layout, matrix, hermitian_hint=True)


# ================================
# PROPAGACIÓN ORDENADA EN EL TIEMPO
# ================================

def propagate_time_ordered(h_of_t: HamiltonianFn, tau: float, steps: int) -> LinOperator:
    """
    Producto ordenado Π_{k=steps..1} exp(−i H(t_k − dt/2) dt), dt = τ/steps.

    Args:
        h_of_t: Función t -> LinOperator hermítico
        tau: Tiempo total (s), ≥ 0
        steps: Número de pasos, ≥ 1

    Returns:
        Propagador unitario
    """
    if int(steps) != steps or steps < 1:
        raise ValueError(f"steps must be a positive integer, got {steps}")
    if tau < 0 or not math.isfinite(tau):
        raise ValueError(f"tau must be finite and >= 0, got {tau}")

    first = h_of_t(0.0)
    layout = first.layout
    if tau == 0.0:
        return LinOperator.identity(layout)

    dt = tau / steps
    tol = TOLERANCES['hermitian_sample']
    propagator = np.eye(layout.dim, dtype=complex)
    for step in range(steps):
        h = h_of_t((step + 0.5) * dt).matrix
        scale = max(float(np.max(np.abs(h))), 1.0)
        asym = float(np.max(np.abs(h - h.conj().T)))
        if asym > tol * scale:
            raise OperatorError(f"non-Hermitian Hamiltonian sample at step {step}: asymmetry {asym:.3e}")
        values, vectors = linalg.eigh(h)
        propagator = ((vectors * np.exp(-1j * values * dt)[None, :]) @ vectors.conj().T) @ propagator

    result = LinOperator(layout, propagator)
    drift = result.unitarity_error()
    if drift > TOLERANCES['propagation']:
        logger.warning("time-ordered propagator drifted from unitarity by %.2e", drift)
    logger.debug("time-ordered propagation: %d steps, dt=%.3e s", steps, dt)
    return result


def richardson_propagate(h_of_t: HamiltonianFn, tau: float, steps: int) -> LinOperator:
    """
    Extrapolación (4 U_{2n} − U_n)/3 sobre la regla del punto medio.

    El error del punto medio solo tiene potencias pares de dt, así que la
    combinación cancela el término O(dt²). El resultado no es exactamente unitario.
    """
    coarse = propagate_time_ordered(h_of_t, tau, steps).matrix
    fine = propagate_time_ordered(h_of_t, tau, 2 * steps).matrix
    layout = h_of_t(0.0).layout
    return LinOperator(layout, (4.0 * fine - coarse) / 3.0)


# ================================
# OPERADORES EFECTIVOS (solo qubits)
# ================================

def u_effective_xx(n_qubits: int, lam: float, tau: float, form: str = 'pairs') -> LinOperator:
    """
    Evolución efectiva del acoplo dispersivo.

    form='pairs': exp(−iλτ Σ_{i<j} σᵢˣσⱼˣ)
    form='square': exp(−i(λ/2)τ(Σσˣ)²), igual a 'pairs' por e^{−iλτN/2}
    """
    layout = HilbertLayout(n_qubits, 0)
    if form == 'pairs':
        generator = LinOperator(layout, _pair_sum_xx(n_qubits), hermitian_hint=True)
        return mat_exp(generator, -1j * lam * tau)
    if form == 'square':
        sx = collective_qubit_op(layout, SIGMA_X).matrix
        return mat_exp(LinOperator(layout, sx @ sx, hermitian_hint=True), -0.5j * lam * tau)
    raise ValueError(f"unknown form {form!r}; expected 'pairs' or 'square'")


def u_effective_total(n_qubits: int, lam: float, eta: float, tau: float) -> LinOperator:
    """exp(−iητ Σσˣ − iλτ Σ_{i<j} σᵢˣσⱼˣ)"""
    layout = HilbertLayout(n_qubits, 0)
    sx = collective_qubit_op(layout, SIGMA_X).matrix
    generator = LinOperator(layout, eta * sx + lam * _pair_sum_xx(n_qubits), hermitian_hint=True)
    return mat_exp(generator, -1j * tau)


def u_effective_xy(n_qubits: int, g0: float, delta: float, eta: float, tau: float) -> LinOperator:
    """
    exp(−iτ(−(g₀²/δ) S⁺S⁻ + η Σσˣ)), eliminación adiabática del fotón virtual.

    Con la cavidad en el vacío, a a† = 1 y el acoplo con σ± deja el término
    de intercambio S⁺S⁻ (tipo XY), no Σσᵢˣσⱼˣ.
    """
    if not delta > 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    layout = HilbertLayout(n_qubits, 0)
    s_minus = collective_qubit_op(layout, SIGMA_MINUS).matrix
    sx = collective_qubit_op(layout, SIGMA_X).matrix
    exchange = s_minus.conj().T @ s_minus
    generator = LinOperator(layout, -(g0 ** 2 / delta) * exchange + eta * sx, hermitian_hint=True)
    return mat_exp(generator, -1j * tau)


def cluster_phases(n_qubits: int, angle: float) -> np.ndarray:
    """
    Diagonal del gate exp(−i·angle Σ_{i<j} nᵢˣnⱼˣ) en la base σˣ.

    Etiqueta 0 de cada qubit = autovalor σˣ = +1 (nˣ = 1); orden de
    bit_table, qubit 1 el más lento.
    """
    occupied = 1 - bit_table(n_qubits).astype(np.int64)
    count = occupied.sum(axis=1)
    pairs = count * (count - 1) // 2
    return np.exp(-1j * angle * pairs)


def u_cluster_gate(n_qubits: int, lam: float, tau: float) -> LinOperator:
    """
    exp(−4iλτ Σ_{i<j} nᵢˣnⱼˣ), nˣ = (1+σˣ)/2.

    Se construye diagonal en la base σˣ y se rota a la base {|+⟩, |−⟩}.
    Con 4λτ = (2n+1)π es un controlled-phase(π) entre todos los pares.
    """
    if int(n_qubits) != n_qubits or n_qubits < 2:
        raise ValueError(f"the cluster gate needs at least 2 qubits, got {n_qubits}")
    layout = HilbertLayout(n_qubits, 0)
    diagonal = cluster_phases(n_qubits, 4.0 * lam * tau)
    basis = x_basis_matrix(n_qubits)
    return LinOperator(layout, (basis * diagonal[None, :]) @ basis.conj().T)


# ================================
# VALIDEZ DE LA APROXIMACIÓN DISPERSIVA
# ================================

def _full_vs_effective(n_qubits: int, g0: float, delta: float, tau: float, lam: float,
                       fock_cutoff: int) -> Tuple[float, float, float]:
    """(fidelidad frente al gate de cluster, fuga, fidelidad frente al modelo XY)"""
    layout = HilbertLayout(n_qubits, fock_cutoff)
    drive = DriveParams((n_qubits - 1) * lam)
    u_full = mat_exp(h_static_frame(layout, g0, delta, drive), -1j * tau)
    if n_qubits >= 2:
        u_gate = u_cluster_gate(n_qubits, lam, tau)
    else:
        u_gate = LinOperator.identity(layout.qubits_only)
    projector = cavity_vacuum_projector(layout)
    fidelity = unitary_fidelity_up_to_phase(u_full, extend_to_cavity(u_gate, layout), projector)
    u_xy = u_effective_xy(n_qubits, g0, delta, drive.amplitude, tau)
    fidelity_xy = unitary_fidelity_up_to_phase(u_full, extend_to_cavity(u_xy, layout), projector)

    # Estados producto de la base σˣ con la cavidad en el vacío
    cavity = layout.cavity_dim
    vacuum_columns = u_full.matrix[:, ::cavity]
    evolved = vacuum_columns @ x_basis_matrix(n_qubits)
    kept = np.sum(np.abs(evolved[::cavity, :]) ** 2, axis=0)
    leakage = float(max(0.0, np.max(1.0 - kept)))
    return fidelity, leakage, fidelity_xy


def dispersive_gate_error(n_qubits: int, g0: float, k: int, n: int, fock_cutoff: int,
                          delta: Optional[float] = None, check_cutoff: bool = True,
                          strict: bool = False) -> DispersiveGateReport:
    """
    Compara la dinámica completa exp(−iH′τ) con el gate efectivo ⊗ I_cavidad.

    Args:
        n_qubits: Número de qubits
        g0: Acoplamiento (rad/s); 0 solo si se fija `delta`
        k, n: Enteros de la temporización
        fock_cutoff: Corte de Fock (≥ 1)
        delta: Detuning fijado a mano; τ = 2kπ/δ y λ = g₀²/(2δ)
        check_cutoff: Repite con fock_cutoff + 2 para detectar falta de convergencia
        strict: Lanza ConvergenceError si el corte no converge

    Returns:
        DispersiveGateReport con fidelidad salvo fase frente al gate de cluster
        y frente al modelo XY, fuga fuera del vacío y la bandera de convergencia del corte
    """
    if delta is None:
        schedule = solve_schedule(g0, k, n, n_qubits)
        delta, tau, lam = schedule.delta, schedule.tau, schedule.lam
    else:
        if not (delta > 0 and math.isfinite(delta)):
            raise ValueError(f"delta must be > 0, got {delta}")
        if g0 < 0:
            raise ValueError("g0 must be >= 0")
        tau = 2.0 * k * math.pi / delta
        lam = g0 ** 2 / (2.0 * delta)

    fidelity, leakage, fidelity_xy = _full_vs_effective(n_qubits, g0, delta, tau, lam, fock_cutoff)

    raised = None
    converged = True
    if check_cutoff:
        raised, _, _ = _full_vs_effective(n_qubits, g0, delta, tau, lam, fock_cutoff + 2)
        change = abs(raised - fidelity)
        converged = change <= TOLERANCES['cutoff_convergence']
        if not converged:
            message = (f"Fock cutoff {fock_cutoff} not converged: raising it by 2 "
                       f"changes the fidelity by {change:.2e}")
            if strict:
                raise ConvergenceError(message)
            logger.warning(message)

    logger.debug("dispersive check N=%d k=%d n=%d cutoff=%d: F=%.6f leakage=%.2e",
                 n_qubits, k, n, fock_cutoff, fidelity, leakage)
    return DispersiveGateReport(
        fidelity_up_to_phase=fidelity,
        leakage=leakage,
        fidelity_xy=fidelity_xy,
        converged=converged,
        fidelity_raised_cutoff=raised,
        fock_cutoff=fock_cutoff,
        n_qubits=n_qubits,
        k=int(k),
        n=int(n),
        g0=g0,
        delta=delta,
        tau=tau,
        lam=lam,
    )
