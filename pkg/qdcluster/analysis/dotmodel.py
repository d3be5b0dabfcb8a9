"""
Física del doble punto cuántico y diseño del dispositivo
- Estructura propia (mezcla |(1,1)S⟩, |(0,2)S⟩)
- Acoplamiento al resonador g₀ y acoplamiento efectivo
- Solver de temporización (δτ = 2kπ, 4λτ = (2n+1)π)
- Presupuesto de decoherencia
- Barrido adiabático para preparar el estado inicial

Unidades: energías en µeV, tasas en rad/s (ħ = 1 en la dinámica). La
conversión µeV -> rad/s solo ocurre en la frontera de DotParams/DecoherenceInputs.
"""
import math
from dataclasses import asdict, dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from qdcluster.config.constants import (
    BUDGET_FACTOR,
    LIMITS,
    DEVICE_DEFAULTS,
    PHYSICAL,
    TOLERANCES,
)
from qdcluster.core.errors import ConvergenceError, ScheduleError
from qdcluster.utils.log import get_logger

logger = get_logger(__name__)

HBAR = PHYSICAL['hbar_uev_s']
PLANCK = PHYSICAL['h_uev_s']


def uev_to_rad_s(energy_uev: float) -> float:
    """Energía (µeV) -> frecuencia angular (rad/s)"""
    return energy_uev / HBAR


def uev_to_hz(energy_uev: float) -> float:
    """Energía (µeV) -> frecuencia ordinaria (Hz)"""
    return energy_uev / PLANCK


# ================================
# TIPOS
# ================================

@dataclass(frozen=True)
class DotParams:
    """Tunneling T_c y detuning Δ del doble punto, en µeV"""

    tunneling_uev: float = DEVICE_DEFAULTS['tunneling_uev']
    detuning_uev: float = DEVICE_DEFAULTS['detuning_uev']

    def __post_init__(self):
        if not (self.tunneling_uev > 0 and math.isfinite(self.tunneling_uev)):
            raise ValueError(f"tunneling must be > 0, got {self.tunneling_uev}")
        if not math.isfinite(self.detuning_uev):
            raise ValueError("detuning must be finite")

    @property
    def gap_uev(self) -> float:
        """Ω = √(4T_c² + Δ²)"""
        return math.hypot(2.0 * self.tunneling_uev, self.detuning_uev)


@dataclass(frozen=True)
class CircuitParams:
    """
    Parámetros del resonador y del acoplo capacitivo.

    omega en rad/s; capacidades en F; impedancias en Ω.
    """

    omega: float
    coupling_capacitance: float = DEVICE_DEFAULTS['coupling_capacitance_f']
    total_capacitance: float = DEVICE_DEFAULTS['total_capacitance_f']
    impedance: float = DEVICE_DEFAULTS['impedance_ohm']
    resistance_quantum: float = PHYSICAL['resistance_quantum_ohm']
    quality_factor: float = DEVICE_DEFAULTS['quality_factor']

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be strictly positive, got {value}")
        if self.capacitance_ratio > LIMITS['max_circuit_ratio']:
            raise ValueError(
                f"C_c/(2 C_tot) = {self.capacitance_ratio:.3g} exceeds "
                f"{LIMITS['max_circuit_ratio']}: implausible geometry"
            )

    @property
    def frequency_hz(self) -> float:
        """f = ω/2π"""
        return self.omega / (2.0 * math.pi)

    @property
    def capacitance_ratio(self) -> float:
        return self.coupling_capacitance / (2.0 * self.total_capacitance)

    @classmethod
    def from_frequency_hz(cls, frequency_hz: float, **kwargs) -> 'CircuitParams':
        return cls(omega=2.0 * math.pi * frequency_hz, **kwargs)

    @classmethod
    def from_resonator_geometry(cls, length_m: float, capacitance_per_m: float,
                                **kwargs) -> 'CircuitParams':
        """
        Modo de onda completa de un TLR de longitud L: k = π/L, ω = k/(C₀ Z₀).

        Args:
            length_m: Longitud L del resonador
            capacitance_per_m: Capacidad por unidad de longitud C₀
            **kwargs: Resto de campos (impedance = Z₀ incluida)
        """
        if length_m <= 0 or capacitance_per_m <= 0:
            raise ValueError("length and capacitance per length must be positive")
        impedance = kwargs.get('impedance', DEVICE_DEFAULTS['impedance_ohm'])
        omega = (math.pi / length_m) / (capacitance_per_m * impedance)
        return cls(omega=omega, **kwargs)


@dataclass(frozen=True)
class GateSchedule:
    """Cantidades derivadas de la temporización del gate de un paso"""

    k: int
    n: int
    g0: float
    delta: float
    tau: float
    lam: float
    n_qubits: int

    @property
    def eta(self) -> float:
        """Amplitud del drive η = (N−1)λ"""
        return self.drive_amplitude(self.n_qubits)

    def drive_amplitude(self, n_qubits: int) -> float:
        return (n_qubits - 1) * self.lam

    @property
    def residuals(self) -> Dict[str, float]:
        """Residuos relativos de δτ = 2kπ y 4λτ = (2n+1)π"""
        return {
            'delta_tau': abs(self.delta * self.tau - 2 * self.k * math.pi) / (2 * self.k * math.pi),
            'four_lambda_tau': abs(4 * self.lam * self.tau - (2 * self.n + 1) * math.pi)
            / ((2 * self.n + 1) * math.pi),
        }

    def as_dict(self) -> Dict:
        return {
            'k': self.k,
            'n': self.n,
            'n_qubits': self.n_qubits,
            'g0_rad_s': self.g0,
            'g0_over_2pi_hz': self.g0 / (2 * math.pi),
            'delta_rad_s': self.delta,
            'delta_over_2pi_hz': self.delta / (2 * math.pi),
            'tau_s': self.tau,
            'lambda_rad_s': self.lam,
            'eta_rad_s': self.eta,
            'residual_delta_tau': self.residuals['delta_tau'],
            'residual_four_lambda_tau': self.residuals['four_lambda_tau'],
        }


@dataclass(frozen=True)
class DecoherenceInputs:
    """Tiempos de decoherencia de entrada (no se calculan aquí)"""

    t2_star: float = DEVICE_DEFAULTS['t2_star_s']
    t1: float = DEVICE_DEFAULTS['t1_s']
    t2_bare: float = DEVICE_DEFAULTS['t2_bare_s']
    gap_uev: float = DEVICE_DEFAULTS['gap_uev']
    temperature_k: float = DEVICE_DEFAULTS['temperature_k']

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be strictly positive, got {value}")


@dataclass(frozen=True)
class DotEigenstructure:
    gap_uev: float
    theta: float
    plus_coeffs: Tuple[float, float]
    minus_coeffs: Tuple[float, float]


@dataclass(frozen=True)
class DecoherenceBudget:
    photon_decay_time: float
    t2_star: float
    t1: float
    t2_alpha: float
    tau: float
    factor: float
    gap_over_kt: float
    thermal_excited_population: float

    @property
    def timescales(self) -> Dict[str, float]:
        return {
            'photon_decay_time_s': self.photon_decay_time,
            't2_star_s': self.t2_star,
            't1_s': self.t1,
            't2_alpha_s': self.t2_alpha,
        }

    @property
    def ratios(self) -> Dict[str, float]:
        return {name: value / self.tau for name, value in self.timescales.items()}

    @property
    def passed(self) -> bool:
        return self.tau <= min(self.timescales.values()) / self.factor

    def as_dict(self) -> Dict:
        return {
            **self.timescales,
            'tau_s': self.tau,
            'ratios_to_tau': self.ratios,
            'log10_ratios_to_tau': {k: math.log10(v) for k, v in self.ratios.items()},
            'factor': self.factor,
            'pass': self.passed,
            't2_alpha_note': 'order-of-magnitude estimate (Omega/h) * T2_bare^2',
            'frequency_convention': 'photon decay time Q/f and T2_alpha with Omega/h use ordinary frequency',
            'gap_over_kT': self.gap_over_kt,
            'thermal_excited_population': self.thermal_excited_population,
        }


@dataclass(frozen=True)
class SweepResult:
    final_state: np.ndarray
    adiabaticity: float
    branch: str
    initial_branch_overlap: float
    max_norm_drift: float
    converged: bool
    steps: int

    def as_dict(self) -> Dict:
        return {
            'final_state': self.final_state,
            'adiabaticity': self.adiabaticity,
            'branch': self.branch,
            'initial_branch_overlap': self.initial_branch_overlap,
            'max_norm_drift': self.max_norm_drift,
            'converged': self.converged,
            'steps': self.steps,
        }


# ================================
# ESTRUCTURA PROPIA Y ACOPLAMIENTO
# ================================

def eigenstructure(p: DotParams) -> DotEigenstructure:
    """
    Autoestados del doble punto en la base {|(1,1)S⟩, |(0,2)S⟩}:
    |+⟩ = −sinθ|11S⟩ + cosθ|02S⟩,  |−⟩ = cosθ|11S⟩ + sinθ|02S⟩,
    con tanθ = −2T_c/(Ω+Δ).
    """
    gap = p.gap_uev
    theta = math.atan2(-2.0 * p.tunneling_uev, gap + p.detuning_uev)
    return DotEigenstructure(
        gap_uev=gap,
        theta=theta,
        plus_coeffs=(-math.sin(theta), math.cos(theta)),
        minus_coeffs=(math.cos(theta), math.sin(theta)),
    )


def coupling_g0(c: CircuitParams) -> float:
    """g₀ = ω · C_c/(2 C_tot) · √(2 z₀/R_Q), en rad/s"""
    return c.omega * c.capacitance_ratio * math.sqrt(2.0 * c.impedance / c.resistance_quantum)


def effective_coupling(c: CircuitParams, p: DotParams) -> float:
    """g₀ · 2T_c/Ω: máximo en Δ = 0, decrece con |Δ|"""
    return coupling_g0(c) * 2.0 * p.tunneling_uev / p.gap_uev


def detuning_for_coupling(tunneling_uev: float, fraction: float) -> float:
    """
    |Δ| (µeV) que reduce el acoplamiento efectivo a `fraction`·g₀.

    2T_c/Ω = f  =>  Δ = 2T_c·√(1/f² − 1)
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    if tunneling_uev <= 0:
        raise ValueError("tunneling must be > 0")
    return 2.0 * tunneling_uev * math.sqrt(1.0 / fraction ** 2 - 1.0)


# ================================
# TEMPORIZACIÓN
# ================================

def solve_schedule(g0: float, k: int, n: int, n_qubits: int) -> GateSchedule:
    """
    Resuelve δ = g₀√(4k/(2n+1)), τ = 2kπ/δ, λ = g₀²/(2δ), η = (N−1)λ.

    Args:
        g0: Acoplamiento (rad/s), > 0
        k: Entero ≥ 1 (δτ = 2kπ)
        n: Entero ≥ 0 (4λτ = (2n+1)π)
        n_qubits: Número de qubits N ≥ 1

    Returns:
        GateSchedule que cumple ambas condiciones
    """
    if int(k) != k or k < 1:
        raise ValueError(f"k must be an integer >= 1, got {k}")
    if int(n) != n or n < 0:
        raise ValueError(f"n must be an integer >= 0, got {n}")
    if not (g0 > 0 and math.isfinite(g0)):
        raise ValueError(f"g0 must be > 0, got {g0}")
    if int(n_qubits) != n_qubits or n_qubits < 1:
        raise ValueError(f"n_qubits must be a positive integer, got {n_qubits}")

    k, n = int(k), int(n)
    delta = g0 * math.sqrt(4.0 * k / (2 * n + 1))
    tau = 2.0 * k * math.pi / delta
    lam = g0 ** 2 / (2.0 * delta)
    schedule = GateSchedule(k=k, n=n, g0=g0, delta=delta, tau=tau, lam=lam, n_qubits=int(n_qubits))

    for name, residual in schedule.residuals.items():
        if residual > TOLERANCES['schedule']:
            raise ScheduleError(f"timing condition {name} violated: relative residual {residual:.3e}")

    logger.debug("schedule k=%d n=%d: delta/g0=%.6g tau=%.6g s", k, n, delta / g0, tau)
    return schedule


# ================================
# PRESUPUESTO DE DECOHERENCIA
# ================================

def decoherence_budget(c: CircuitParams, d: DecoherenceInputs, s: GateSchedule,
                       factor: float = BUDGET_FACTOR) -> DecoherenceBudget:
    """
    Compara τ con las escalas de decoherencia.

    Convención: tiempo de vida del fotón Q/f y T₂,α = (Ω/h)·T₂,bare² usan
    frecuencia ordinaria; pasa si τ ≤ min(escalas)/factor.
    """
    if factor <= 0:
        raise ValueError("budget factor must be positive")
    photon_decay_time = c.quality_factor / c.frequency_hz
    t2_alpha = uev_to_hz(d.gap_uev) * d.t2_bare ** 2

    kt = PHYSICAL['kb_uev_per_k'] * d.temperature_k
    gap_over_kt = d.gap_uev / kt
    excited = 1.0 / (1.0 + math.exp(gap_over_kt))

    budget = DecoherenceBudget(
        photon_decay_time=photon_decay_time,
        t2_star=d.t2_star,
        t1=d.t1,
        t2_alpha=t2_alpha,
        tau=s.tau,
        factor=factor,
        gap_over_kt=gap_over_kt,
        thermal_excited_population=excited,
    )
    if not budget.passed:
        logger.warning(
            "decoherence budget failed: tau=%.3g s, shortest timescale %.3g s (factor %g)",
            s.tau, min(budget.timescales.values()), factor,
        )
    return budget


# ================================
# BARRIDO ADIABÁTICO
# ================================

def _two_level_hamiltonian(tunneling_uev: float, detuning_uev: float) -> np.ndarray:
    """H = (Δ/2)(|02⟩⟨02| − |11⟩⟨11|) + T_c(|11⟩⟨02| + h.c.), base (11S, 02S), en rad/s"""
    return np.array(
        [[-detuning_uev / 2.0, tunneling_uev], [tunneling_uev, detuning_uev / 2.0]],
        dtype=complex,
    ) / HBAR


def _two_level_step(tunneling_uev: float, detuning_uev: float, dt: float) -> np.ndarray:
    """exp(−iH dt) en forma cerrada: H = hx σx + hz σz"""
    hx = tunneling_uev / HBAR
    hz = -detuning_uev / (2.0 * HBAR)
    magnitude = math.hypot(hx, hz)
    if magnitude == 0.0:
        return np.eye(2, dtype=complex)
    angle = magnitude * dt
    unit = np.array([[hz, hx], [hx, -hz]], dtype=complex) / magnitude
    return math.cos(angle) * np.eye(2, dtype=complex) - 1j * math.sin(angle) * unit


def _eigenbasis(tunneling_uev: float, detuning_uev: float) -> Tuple[np.ndarray, np.ndarray]:
    """Autovectores ordenados (inferior, superior)"""
    values, vectors = np.linalg.eigh(_two_level_hamiltonian(tunneling_uev, detuning_uev))
    return values, vectors


def _integrate_sweep(p_start: DotParams, p_end: DotParams, ramp_duration: float,
                     steps: int, initial: np.ndarray) -> Tuple[np.ndarray, float]:
    dt = ramp_duration / steps
    state = initial.copy()
    drift = 0.0
    for step in range(steps):
        fraction = (step + 0.5) / steps
        detuning = p_start.detuning_uev + fraction * (p_end.detuning_uev - p_start.detuning_uev)
        state = _two_level_step(p_start.tunneling_uev, detuning, dt) @ state
        drift = max(drift, abs(float(np.linalg.norm(state)) - 1.0))
    return state, drift


def adiabatic_sweep(p_start: DotParams, p_end: DotParams, ramp_duration: float,
                    steps: int, initial: str = 'charge', strict: bool = False) -> SweepResult:
    """
    Rampa lineal de Δ a T_c fijo partiendo de |(0,2)S⟩.

    Args:
        p_start: Parámetros al inicio de la rampa
        p_end: Parámetros al final (mismo T_c)
        ramp_duration: Duración (s); 0 = límite súbito
        steps: Pasos de la integración (≥ 100)
        initial: 'charge' (|02S⟩ desnudo) o 'eigenstate' (autoestado
                 instantáneo con más peso en |02S⟩)
        strict: Lanza ConvergenceError si la integración no converge

    Returns:
        SweepResult con el estado final, la adiabaticidad y la rama seguida
    """
    if steps < LIMITS['min_sweep_steps']:
        raise ValueError(f"steps must be >= {LIMITS['min_sweep_steps']}, got {steps}")
    if ramp_duration < 0:
        raise ValueError("ramp_duration must be >= 0")
    if not math.isclose(p_start.tunneling_uev, p_end.tunneling_uev):
        raise ValueError("the sweep ramps the detuning at fixed tunneling")

    charge_02 = np.array([0.0, 1.0], dtype=complex)
    _, start_vectors = _eigenbasis(p_start.tunneling_uev, p_start.detuning_uev)
    weights = np.abs(start_vectors.conj().T @ charge_02) ** 2
    branch_index = int(np.argmax(weights))
    branch = 'plus' if branch_index == 1 else 'minus'

    if initial == 'eigenstate':
        psi0 = start_vectors[:, branch_index].copy()
        # fase fijada para que la componente |02S⟩ sea real positiva
        psi0 = psi0 * np.exp(-1j * np.angle(psi0[1]))
    elif initial == 'charge':
        psi0 = charge_02
    else:
        raise ValueError(f"unknown initial state {initial!r}")

    if ramp_duration == 0.0:
        final, drift = psi0.copy(), 0.0
        converged = True
    else:
        final, drift = _integrate_sweep(p_start, p_end, ramp_duration, steps, psi0)
        coarse, _ = _integrate_sweep(p_start, p_end, ramp_duration, steps // 2, psi0)
        _, end_vectors = _eigenbasis(p_end.tunneling_uev, p_end.detuning_uev)
        target = end_vectors[:, branch_index]
        change = abs(abs(np.vdot(target, final)) ** 2 - abs(np.vdot(target, coarse)) ** 2)
        converged = change <= TOLERANCES['sweep_convergence']
        if not converged:
            message = f"sweep not converged: halving the step changes adiabaticity by {change:.2e}"
            if strict:
                raise ConvergenceError(message)
            logger.warning(message)

    _, end_vectors = _eigenbasis(p_end.tunneling_uev, p_end.detuning_uev)
    adiabaticity = float(abs(np.vdot(end_vectors[:, branch_index], final)) ** 2)

    return SweepResult(
        final_state=final,
        adiabaticity=adiabaticity,
        branch=branch,
        initial_branch_overlap=float(weights[branch_index]),
        max_norm_drift=drift,
        converged=converged,
        steps=steps,
    )
