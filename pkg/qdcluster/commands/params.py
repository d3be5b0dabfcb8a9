"""
Comando params: acoplamiento, temporización y presupuesto de decoherencia
"""
import math

from qdcluster.analysis.dotmodel import (
    decoherence_budget,
    eigenstructure,
    effective_coupling,
    uev_to_rad_s,
)
from qdcluster.analysis.noise import combined_sigma, variance_theta1, variance_theta2
from qdcluster.commands.common import (
    build_circuit,
    build_decoherence,
    build_dot,
    build_noise,
    build_schedule,
    emit_report,
)
from qdcluster.config.constants import EXIT_CODES
from qdcluster.config.settings import RunConfig
from qdcluster.utils.log import get_logger

logger = get_logger(__name__)


def cmd_params(config: RunConfig) -> int:
    """
    Informe de parámetros del dispositivo.

    Returns:
        0, o 2 si el presupuesto falla y budget_exit está activo
    """
    dot = build_dot(config)
    circuit = build_circuit(config)
    decoherence = build_decoherence(config)
    schedule = build_schedule(config)
    budget = decoherence_budget(circuit, decoherence, schedule, factor=config['budget_factor'])
    structure = eigenstructure(dot)
    noise = build_noise(config)

    theta1 = variance_theta1(schedule.g0, schedule.delta, uev_to_rad_s(decoherence.gap_uev),
                             schedule.tau, decoherence.t2_bare)
    theta2 = variance_theta2(noise.drive_rel_sigma, schedule.lam, schedule.tau,
                             max(schedule.n_qubits, 2))

    result = {
        'schedule': schedule.as_dict(),
        'circuit': {
            'frequency_hz': circuit.frequency_hz,
            'capacitance_ratio': circuit.capacitance_ratio,
            'impedance_factor': math.sqrt(2.0 * circuit.impedance / circuit.resistance_quantum),
            'effective_coupling_rad_s': effective_coupling(circuit, dot),
        },
        'dot': {
            'gap_uev': structure.gap_uev,
            'theta_rad': structure.theta,
            'plus_coeffs': list(structure.plus_coeffs),
            'minus_coeffs': list(structure.minus_coeffs),
        },
        'budget': budget.as_dict(),
        'noise_estimates': {
            'sigma1_formula_rad': theta1.sigma,
            'sigma1_configured_rad': noise.sigma1,
            'sigma2_formula_rad': math.sqrt(theta2),
            'sigma2_configured_rad': noise.sigma2,
            'sigma_combined_configured_rad': combined_sigma(noise.sigma1, noise.sigma2),
        },
    }
    emit_report('params', config, result)

    logger.info("g0/2pi = %.4g Hz, tau = %.4g s, budget %s",
                schedule.g0 / (2 * math.pi), schedule.tau, 'pass' if budget.passed else 'FAIL')
    if not budget.passed and config['budget_exit']:
        return EXIT_CODES['budget_fail']
    return EXIT_CODES['ok']
