"""
Piezas compartidas por los comandos: construcción de parámetros desde la
configuración, límites de tamaño y escritura de la salida
"""
import math
import sys
from typing import Any, Dict, Optional

from qdcluster.analysis.dotmodel import (
    CircuitParams,
    DecoherenceInputs,
    DotParams,
    GateSchedule,
    coupling_g0,
    solve_schedule,
)
from qdcluster.analysis.noise import NoiseSpec
from qdcluster.config.constants import LIMITS
from qdcluster.config.settings import RunConfig
from qdcluster.core.errors import ConfigError
from qdcluster.utils.helpers import dump_json


def build_dot(config: RunConfig) -> DotParams:
    return DotParams(tunneling_uev=config['tunneling_uev'], detuning_uev=config['detuning_uev'])


def build_circuit(config: RunConfig) -> CircuitParams:
    return CircuitParams.from_frequency_hz(
        config['resonator_frequency_hz'],
        coupling_capacitance=config['coupling_capacitance_f'],
        total_capacitance=config['total_capacitance_f'],
        impedance=config['impedance_ohm'],
        resistance_quantum=config['resistance_quantum_ohm'],
        quality_factor=config['quality_factor'],
    )


def build_decoherence(config: RunConfig) -> DecoherenceInputs:
    return DecoherenceInputs(
        t2_star=config['t2_star_s'],
        t1=config['t1_s'],
        t2_bare=config['t2_bare_s'],
        gap_uev=config['gap_uev'],
        temperature_k=config['temperature_k'],
    )


def build_noise(config: RunConfig) -> NoiseSpec:
    return NoiseSpec(
        sigma1=config['sigma1_rad'],
        sigma2=config['sigma2_rad'],
        sigma=config['sigma_rad'],
        t2_bare=config['t2_bare_s'],
        drive_rel_sigma=config['drive_rel_sigma'],
    )


def resolve_g0(config: RunConfig) -> float:
    """g₀ en rad/s: el valor fijado en la configuración o el del circuito"""
    fixed = config['g0_over_2pi_hz']
    if fixed is not None:
        if fixed < 0 or not math.isfinite(fixed):
            raise ConfigError(f"g0_over_2pi_hz must be finite and >= 0, got {fixed}")
        return 2.0 * math.pi * fixed
    return coupling_g0(build_circuit(config))


def build_schedule(config: RunConfig, g0: Optional[float] = None) -> GateSchedule:
    return solve_schedule(resolve_g0(config) if g0 is None else g0,
                          config['k'], config['n'], config['n_qubits'])


def check_guard(config: RunConfig, name: str, value: int, limit_key: str):
    """Límite de tamaño salvo que unsafe_dims esté activo"""
    limit = LIMITS[limit_key]
    if value > limit and not config['unsafe_dims']:
        raise ConfigError(f"{name} = {value} exceeds the guard rail {limit} (use --unsafe-dims)")


def make_report(command: str, config: RunConfig, result: Dict[str, Any]) -> Dict[str, Any]:
    return {'command': command, 'config': config.as_dict(), 'result': result}


def write_output(text: str, out: str = ''):
    """A fichero si `out` no está vacío; si no, a stdout"""
    if out:
        with open(out, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def emit_report(command: str, config: RunConfig, result: Dict[str, Any]):
    write_output(dump_json(make_report(command, config, result)), config['out'])
