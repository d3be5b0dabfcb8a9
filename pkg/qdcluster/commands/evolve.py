"""
Comando evolve: dinámica completa frente al gate efectivo
"""
import numpy as np

from qdcluster.analysis.dotmodel import coupling_g0, solve_schedule
from qdcluster.analysis.dynamics import (
    DriveParams,
    dispersive_gate_error,
    h_static_frame,
    h_total,
    propagate_time_ordered,
)
from qdcluster.commands.common import build_circuit, check_guard, emit_report, resolve_g0
from qdcluster.config.constants import EXIT_CODES
from qdcluster.config.settings import RunConfig
from qdcluster.core.qsys import HilbertLayout, mat_exp
from qdcluster.utils.log import get_logger

logger = get_logger(__name__)


def _frame_check(n_qubits: int, fock_cutoff: int, g0: float, delta: float, eta: float,
                 tau: float, steps: int) -> float:
    """max|U_ordenado − exp(−iH′τ)| elemento a elemento"""
    layout = HilbertLayout(n_qubits, fock_cutoff)
    drive = DriveParams(eta)
    ordered = propagate_time_ordered(lambda t: h_total(layout, g0, delta, drive, t), tau, steps)
    static = mat_exp(h_static_frame(layout, g0, delta, drive), -1j * tau)
    return float(np.max(np.abs(ordered.matrix - static.matrix)))


def cmd_evolve(config: RunConfig) -> int:
    """
    Fidelidad salvo fase, fuga y convergencia del corte de Fock.

    Con g₀ = 0 el detuning se toma de la temporización del circuito.
    """
    n_qubits = config['n_qubits']
    fock_cutoff = config['fock_cutoff']
    check_guard(config, 'n_qubits', n_qubits, 'max_qubits_evolve')
    check_guard(config, 'fock_cutoff', fock_cutoff, 'max_fock_cutoff')

    g0 = resolve_g0(config)
    delta = None
    if g0 == 0.0:
        delta = solve_schedule(coupling_g0(build_circuit(config)), config['k'], config['n'],
                               n_qubits).delta
    report = dispersive_gate_error(n_qubits, g0, config['k'], config['n'], fock_cutoff, delta=delta)

    steps = config['frame_check_steps']
    result = report.as_dict()
    result['steps_used'] = steps
    result['frame_check_max_abs_diff'] = None
    if steps > 0:
        result['frame_check_max_abs_diff'] = _frame_check(
            n_qubits, fock_cutoff, g0, report.delta, (n_qubits - 1) * report.lam, report.tau, steps
        )
    emit_report('evolve', config, result)

    logger.info("N=%d k=%d cutoff=%d: fidelity %.6f (XY model %.6f), leakage %.2e, cutoff %s",
                n_qubits, config['k'], fock_cutoff, report.fidelity_up_to_phase,
                report.fidelity_xy, report.leakage,
                'converged' if report.converged else 'NOT converged')
    return EXIT_CODES['ok']
