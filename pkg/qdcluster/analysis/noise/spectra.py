"""
Espectros de ruido y la integral ⟨(∫₀^τ ε²(t)dt)²⟩

Convención: S(ω) es una densidad bilateral y par, con
⟨ε(t)ε(t′)⟩ = ∫ S(ω) e^{iω(t−t′)} dω sobre toda la recta, así que
la potencia total ∫S dω cuenta ambos signos de ω.
"""
import math
import warnings
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
from scipy import integrate

from qdcluster.config.constants import LIMITS, TOLERANCES
from qdcluster.core.errors import ConvergenceError
from qdcluster.utils.helpers import sample_stream
from qdcluster.utils.log import get_logger

logger = get_logger(__name__)


# ================================
# MODELOS ESPECTRALES
# ================================

class Spectrum(ABC):
    """Densidad espectral bilateral; nula para |ω| > support"""

    amplitude: float
    cutoff: float

    @abstractmethod
    def density(self, omega: np.ndarray) -> np.ndarray:
        """S(ω), vectorizada"""

    @property
    @abstractmethod
    def support(self) -> float:
        """Frecuencia a partir de la cual S = 0 (límite de la cuadratura)"""

    @abstractmethod
    def total_power(self) -> float:
        """∫ S dω en forma cerrada"""

    @property
    def is_zero(self) -> bool:
        return self.amplitude == 0.0

    def describe(self) -> Dict:
        return {'model': type(self).__name__, 'amplitude': self.amplitude, 'cutoff_rad_s': self.cutoff}


@dataclass(frozen=True)
class BoxSpectrum(Spectrum):
    """S = A para |ω| ≤ γ"""

    amplitude: float
    cutoff: float

    def __post_init__(self):
        if self.amplitude < 0 or not self.cutoff > 0:
            raise ValueError("box spectrum needs amplitude >= 0 and cutoff > 0")

    def density(self, omega):
        omega = np.asarray(omega, dtype=float)
        return np.where(np.abs(omega) <= self.cutoff, self.amplitude, 0.0)

    @property
    def support(self) -> float:
        return self.cutoff

    def total_power(self) -> float:
        return 2.0 * self.amplitude * self.cutoff

    @classmethod
    def from_t2_bare(cls, t2_bare: float, cutoff: float) -> 'BoxSpectrum':
        """Normaliza la potencia total a 1/T₂,bare²"""
        return cls(amplitude=1.0 / (2.0 * cutoff * t2_bare ** 2), cutoff=cutoff)


@dataclass(frozen=True)
class LorentzianSpectrum(Spectrum):
    """
    S = A γ²/(ω² + γ²), truncada en |ω| ≤ cutoff_factor·γ.

    La cola de la lorentziana no es integrable frente a ω²; el truncado es
    parte del modelo y lo usan por igual la cuadratura y el muestreo.
    """

    amplitude: float
    cutoff: float
    cutoff_factor: float = 100.0

    def __post_init__(self):
        if self.amplitude < 0 or not self.cutoff > 0 or not self.cutoff_factor > 0:
            raise ValueError("lorentzian spectrum needs amplitude >= 0, cutoff > 0, cutoff_factor > 0")

    def density(self, omega):
        omega = np.asarray(omega, dtype=float)
        value = self.amplitude * self.cutoff ** 2 / (omega ** 2 + self.cutoff ** 2)
        return np.where(np.abs(omega) <= self.support, value, 0.0)

    @property
    def support(self) -> float:
        return self.cutoff_factor * self.cutoff

    def total_power(self) -> float:
        return 2.0 * self.amplitude * self.cutoff * math.atan(self.cutoff_factor)


# ================================
# INTEGRAL ESPECTRAL
# ================================

def _quad_positive(func, upper: float, what: str) -> float:
    """2·∫₀^upper f dω para un integrando par"""
    with warnings.catch_warnings():
        warnings.simplefilter('error', integrate.IntegrationWarning)
        try:
            value, abserr = integrate.quad(func, 0.0, upper, limit=1000, epsabs=0.0, epsrel=1e-10)
        except integrate.IntegrationWarning as exc:
            raise ConvergenceError(f"quadrature of {what} did not converge: {exc}") from exc
    if abserr > 1e-8 * abs(value) and abserr > 0.0:
        raise ConvergenceError(f"quadrature of {what} has error estimate {abserr:.2e}")
    return 2.0 * value


def variance_integral_terms(spectrum: Spectrum, tau: float) -> Tuple[float, float]:
    """
    Los dos sumandos (∫S dω)²τ² y 2(∫S sin(ωτ)/(ωτ) dω)²τ².
    """
    if not tau > 0:
        raise ValueError(f"tau must be > 0, got {tau}")
    if spectrum.is_zero:
        return 0.0, 0.0
    power = _quad_positive(lambda w: float(spectrum.density(w)), spectrum.support, 'S')
    filtered = _quad_positive(
        lambda w: float(spectrum.density(w)) * float(np.sinc(w * tau / np.pi)),
        spectrum.support,
        'S sinc',
    )
    return (power * tau) ** 2, 2.0 * (filtered * tau) ** 2


def variance_integral(spectrum: Spectrum, tau: float) -> float:
    """⟨(∫₀^τ ε²dt)²⟩ = (∫S)²τ² + 2(∫S sinc(ωτ))²τ²"""
    first, second = variance_integral_terms(spectrum, tau)
    return first + second


def low_frequency_variance(spectrum: Spectrum, tau: float) -> float:
    """3(∫S dω)²τ², válido para γτ ≪ 1"""
    if spectrum.cutoff * tau > 0.01:
        logger.warning("low-frequency limit used with gamma*tau = %.3g", spectrum.cutoff * tau)
    return 3.0 * (spectrum.total_power() * tau) ** 2


# ================================
# VALIDACIÓN POR MUESTREO
# ================================

@dataclass(frozen=True)
class VarianceValidation:
    analytic: float
    empirical: float
    rel_err: float
    stderr: float
    samples: int
    time_points: int
    modes: int

    def as_dict(self) -> Dict:
        return {
            'analytic': self.analytic,
            'empirical': self.empirical,
            'rel_err': self.rel_err,
            'stderr': self.stderr,
            'samples': self.samples,
            'time_points': self.time_points,
            'modes': self.modes,
        }


def _squared_integrals(weights: np.ndarray, phasors: np.ndarray, times: np.ndarray) -> np.ndarray:
    """∫₀^τ ε² dt por muestra (trapecio); ε(t) = Re Σ_k w_k e^{iω_k t}"""
    signal = (weights @ phasors).real
    return integrate.trapezoid(signal ** 2, times, axis=1)


def validate_variance_by_sampling(spectrum: Spectrum, tau: float, samples: int, rng_seed: int,
                                  modes: int = 256, time_points: int = 17,
                                  chunk: int = 5000) -> VarianceValidation:
    """
    Contrasta variance_integral con la media empírica de (∫ε²dt)².

    ε(t) = Σ_k a_k cos(ω_k t + φ_k), φ_k uniformes, ω_k en el punto medio de
    celdas Δω sobre (0, support], a_k = 2√(S(ω_k)Δω) (densidad bilateral:
    la varianza Σa_k²/2 reproduce ∫S dω). La malla temporal se refina hasta
    que dividir el paso por dos cambie la integral menos de 1e-3 relativo.

    Args:
        spectrum: Modelo espectral
        tau: Duración (s)
        samples: Número de realizaciones
        rng_seed: Semilla; el bloque b usa sample_stream(seed, b)
        modes: Número de cosenos
        time_points: Puntos iniciales de la malla temporal
        chunk: Realizaciones por bloque

    Returns:
        VarianceValidation con el valor analítico, el empírico, el error relativo
        y el error típico de la media empírica
    """
    if samples < 1 or modes < 1 or time_points < 2:
        raise ValueError("samples, modes must be >= 1 and time_points >= 2")
    analytic = variance_integral(spectrum, tau)

    step = spectrum.support / modes
    omegas = (np.arange(modes) + 0.5) * step
    amplitudes = 2.0 * np.sqrt(spectrum.density(omegas) * step)

    def draw(block: int, size: int) -> np.ndarray:
        rng = sample_stream(rng_seed, block)
        phases = rng.uniform(0.0, 2.0 * np.pi, size=(size, modes))
        return amplitudes[None, :] * np.exp(1j * phases)

    def grid(points: int) -> Tuple[np.ndarray, np.ndarray]:
        times = np.linspace(0.0, tau, points)
        return times, np.exp(1j * np.outer(omegas, times))

    # Refinado de la malla sobre el primer bloque
    first_block = draw(0, min(chunk, samples))

    def mean_square(points: int) -> float:
        times, phasors = grid(points)
        return float(np.mean(_squared_integrals(first_block, phasors, times) ** 2))

    points = time_points
    while True:
        coarse = mean_square(points)
        fine_points = 2 * points - 1
        fine = mean_square(fine_points)
        change = abs(fine - coarse) / abs(fine) if fine != 0.0 else 0.0
        if change < TOLERANCES['grid_convergence']:
            points = fine_points
            break
        points = fine_points
        if points > LIMITS['max_time_points']:
            raise ConvergenceError(f"time grid not converged at {points} points (change {change:.2e})")
    logger.debug("variance sampling grid: %d points", points)

    times, phasors = grid(points)
    total = 0.0
    total_sq = 0.0
    done = 0
    block = 0
    while done < samples:
        size = min(chunk, samples - done)
        weights = first_block[:size] if block == 0 else draw(block, size)
        values = _squared_integrals(weights, phasors, times) ** 2
        total += float(np.sum(values))
        total_sq += float(np.sum(values ** 2))
        done += size
        block += 1
    empirical = total / samples
    spread = max(total_sq / samples - empirical ** 2, 0.0)
    stderr = math.sqrt(spread / max(samples - 1, 1))

    if analytic == 0.0:
        rel_err = 0.0 if empirical == 0.0 else math.inf
    else:
        rel_err = abs(empirical - analytic) / analytic
    return VarianceValidation(
        analytic=analytic,
        empirical=empirical,
        rel_err=rel_err,
        stderr=stderr,
        samples=samples,
        time_points=points,
        modes=modes,
    )
