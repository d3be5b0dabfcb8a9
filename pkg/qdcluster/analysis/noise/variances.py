"""
Varianzas de las fases indeseadas θ₁ (fluctuación de λ) y θ₂ (fluctuación de η)
"""
import math
from dataclasses import dataclass, replace
from typing import Dict, Optional

from qdcluster.analysis.noise.spectra import Spectrum
from qdcluster.config.constants import DEVICE_DEFAULTS
from qdcluster.core.errors import NoiseModelError
from qdcluster.utils.log import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class NoiseSpec:
    """
    Desviaciones típicas de las fases de ruido (rad) y modelo espectral.

    Los valores por defecto de sigma1/sigma2/sigma son los citados para el
    dispositivo; no se derivan de variance_theta1/variance_theta2.
    """

    sigma1: float = DEVICE_DEFAULTS['sigma1_rad']
    sigma2: float = DEVICE_DEFAULTS['sigma2_rad']
    sigma: float = DEVICE_DEFAULTS['sigma_rad']
    t2_bare: float = DEVICE_DEFAULTS['t2_bare_s']
    drive_rel_sigma: float = DEVICE_DEFAULTS['drive_rel_sigma']
    spectrum: Optional[Spectrum] = None

    def __post_init__(self):
        for name in ('sigma1', 'sigma2', 'sigma', 'drive_rel_sigma'):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise NoiseModelError(f"{name} must be finite and >= 0, got {value}")
        if not self.t2_bare > 0:
            raise NoiseModelError(f"t2_bare must be > 0, got {self.t2_bare}")

    @classmethod
    def from_parts(cls, sigma1: float, sigma2: float, **kwargs) -> 'NoiseSpec':
        """σ = √(σ₁² + σ₂²)"""
        return cls(sigma1=sigma1, sigma2=sigma2, sigma=combined_sigma(sigma1, sigma2), **kwargs)

    def matched(self, sigma: float) -> 'NoiseSpec':
        """
        Reescala σ₁ y σ₂ en la misma proporción para que su combinación sea `sigma`.
        Si ambas son 0 se reparte todo en σ₁.
        """
        if not (sigma >= 0 and math.isfinite(sigma)):
            raise NoiseModelError(f"sigma must be finite and >= 0, got {sigma}")
        current = combined_sigma(self.sigma1, self.sigma2)
        if current == 0.0:
            return replace(self, sigma1=sigma, sigma2=0.0, sigma=sigma)
        factor = sigma / current
        return replace(self, sigma1=self.sigma1 * factor, sigma2=self.sigma2 * factor, sigma=sigma)

    def low_frequency_ok(self, tau: float, limit: float = 0.01) -> bool:
        """γτ ≪ 1 (con `limit` como umbral); True si no hay espectro"""
        if self.spectrum is None:
            return True
        ok = self.spectrum.cutoff * tau <= limit
        if not ok:
            logger.warning("low-frequency limit used with gamma*tau = %.3g", self.spectrum.cutoff * tau)
        return ok

    def as_dict(self) -> Dict:
        return {
            'sigma1_rad': self.sigma1,
            'sigma2_rad': self.sigma2,
            'sigma_rad': self.sigma,
            't2_bare_s': self.t2_bare,
            'drive_rel_sigma': self.drive_rel_sigma,
            'spectrum': None if self.spectrum is None else self.spectrum.describe(),
        }


@dataclass(frozen=True)
class Theta1Variance:
    variance: float
    intermediate: float

    @property
    def sigma(self) -> float:
        return math.sqrt(self.variance)


def variance_theta1(g0: float, delta: float, omega: float, tau: float,
                    t2_bare: float) -> Theta1Variance:
    """
    σ₁² = (12 g₀⁴/δ⁴)·(τ/(Ω T₂,bare²))² en el límite de baja frecuencia.

    Args:
        g0, delta: Acoplamiento y detuning (rad/s)
        omega: Gap del qubit Ω (rad/s)
        tau: Duración del gate (s)
        t2_bare: T₂,bare (s); math.inf da el límite sin ruido

    Returns:
        Theta1Variance con la forma cerrada y la intermedia
        (2g₀²/(Ωδ²))²·3(∫S dω)²τ² con ∫S dω = 1/T₂,bare²
    """
    for name, value in (('g0', g0), ('delta', delta), ('omega', omega), ('tau', tau)):
        if not (value > 0 and math.isfinite(value)):
            raise ValueError(f"{name} must be finite and > 0, got {value}")
    if not t2_bare > 0:
        raise ValueError(f"t2_bare must be > 0, got {t2_bare}")

    closed = 12.0 * g0 ** 4 / delta ** 4 * (tau / (omega * t2_bare ** 2)) ** 2
    power = 1.0 / t2_bare ** 2
    intermediate = (2.0 * g0 ** 2 / (omega * delta ** 2)) ** 2 * 3.0 * power ** 2 * tau ** 2
    if not math.isclose(closed, intermediate, rel_tol=1e-12, abs_tol=0.0):
        raise NoiseModelError(f"theta1 variance forms disagree: {closed!r} vs {intermediate!r}")
    return Theta1Variance(variance=closed, intermediate=intermediate)


def variance_theta2(drive_rel_sigma: float, lam: float, tau: float, n_qubits: int) -> float:
    """
    (4τ σ_rel η/(N−1))² = (4 σ_rel λ τ)² con η = (N−1)λ cuasiestático.

    No depende de N.
    """
    if int(n_qubits) != n_qubits or n_qubits < 2:
        raise ValueError(f"the drive phase needs at least 2 qubits, got {n_qubits}")
    if drive_rel_sigma < 0 or lam < 0 or tau < 0:
        raise ValueError("drive_rel_sigma, lam and tau must be >= 0")
    eta = (n_qubits - 1) * lam
    return (4.0 * tau * drive_rel_sigma * eta / (n_qubits - 1)) ** 2


def combined_sigma(sigma1: float, sigma2: float) -> float:
    """√(σ₁² + σ₂²)"""
    if sigma1 < 0 or sigma2 < 0:
        raise ValueError("standard deviations must be >= 0")
    return math.hypot(sigma1, sigma2)
