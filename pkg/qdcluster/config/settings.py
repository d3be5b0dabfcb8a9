"""
Configuración de ejecución
Resuelve cada clave desde tres fuentes:
1. Overrides de línea de comandos
2. Fichero de configuración (`clave = valor`, comentarios con #)
3. DEFAULT_CONFIG
"""
import math
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from qdcluster.config.constants import BUDGET_FACTOR, DEVICE_DEFAULTS, PHYSICAL
from qdcluster.core.errors import ConfigError

# Orden de claves = orden del eco en los informes
DEFAULT_CONFIG: Dict[str, Any] = {
    # Sistema
    'n_qubits': 2,
    'k': 1,
    'n': 0,
    'fock_cutoff': 5,
    'frame_check_steps': 0,

    # Doble punto
    'tunneling_uev': DEVICE_DEFAULTS['tunneling_uev'],
    'detuning_uev': DEVICE_DEFAULTS['detuning_uev'],

    # Resonador
    'resonator_frequency_hz': DEVICE_DEFAULTS['resonator_frequency_hz'],
    'coupling_capacitance_f': DEVICE_DEFAULTS['coupling_capacitance_f'],
    'total_capacitance_f': DEVICE_DEFAULTS['total_capacitance_f'],
    'impedance_ohm': DEVICE_DEFAULTS['impedance_ohm'],
    'resistance_quantum_ohm': PHYSICAL['resistance_quantum_ohm'],
    'quality_factor': DEVICE_DEFAULTS['quality_factor'],
    'g0_over_2pi_hz': None,

    # Decoherencia
    't2_star_s': DEVICE_DEFAULTS['t2_star_s'],
    't1_s': DEVICE_DEFAULTS['t1_s'],
    't2_bare_s': DEVICE_DEFAULTS['t2_bare_s'],
    'gap_uev': DEVICE_DEFAULTS['gap_uev'],
    'temperature_k': DEVICE_DEFAULTS['temperature_k'],
    'budget_factor': BUDGET_FACTOR,
    'budget_exit': True,

    # Ruido
    'sigma1_rad': DEVICE_DEFAULTS['sigma1_rad'],
    'sigma2_rad': DEVICE_DEFAULTS['sigma2_rad'],
    'sigma_rad': DEVICE_DEFAULTS['sigma_rad'],
    'drive_rel_sigma': DEVICE_DEFAULTS['drive_rel_sigma'],

    # Monte Carlo y curvas
    'seed': 42,
    'mc_samples': 0,
    'mc_batches': 10,
    'workers': 1,
    'model': 'bond_phase',
    'graph': 'chain',
    'n_range': '2..30',

    # Salida y límites
    'out': '',
    'unsafe_dims': False,
}

# Claves cuyo valor por defecto es None
_OPTIONAL_FLOATS = {'g0_over_2pi_hz'}

_TRUE = {'true', 'yes', 'on', '1'}
_FALSE = {'false', 'no', 'off', '0'}


def parse_float(text: str) -> float:
    """Float con sufijo opcional 'pi': '0.023pi' -> 0.023·π"""
    text = text.strip().lower()
    if text.endswith('pi'):
        head = text[:-2].strip().rstrip('*').strip()
        factor = float(head) if head else 1.0
        return factor * math.pi
    return float(text)


def _coerce(key: str, raw: Any, line: Optional[int] = None) -> Any:
    """Convierte `raw` al tipo del valor por defecto de `key`"""
    if key not in DEFAULT_CONFIG:
        raise ConfigError(f"unknown key {key!r}", line)
    default = DEFAULT_CONFIG[key]
    if not isinstance(raw, str):
        return raw
    text = raw.strip()
    try:
        if key in _OPTIONAL_FLOATS:
            return None if text.lower() in ('', 'none') else parse_float(text)
        if isinstance(default, bool):
            lowered = text.lower()
            if lowered in _TRUE:
                return True
            if lowered in _FALSE:
                return False
            raise ValueError(f"not a boolean: {text!r}")
        if isinstance(default, int):
            return int(text)
        if isinstance(default, float):
            return parse_float(text)
        return text
    except ValueError as exc:
        raise ConfigError(f"invalid value for {key!r}: {exc}", line) from exc


def parse_config_text(text: str) -> Dict[str, Any]:
    """Parsea el formato `clave = valor`; los errores llevan número de línea"""
    values: Dict[str, Any] = {}
    for number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(f"expected 'key = value', got {raw_line.strip()!r}", number)
        key, value = (part.strip() for part in line.split('=', 1))
        if not key:
            raise ConfigError("empty key", number)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", number)
        values[key] = _coerce(key, value, number)
    return values


def parse_override(item: str) -> Dict[str, Any]:
    """'clave=valor' de --set"""
    if '=' not in item:
        raise ConfigError(f"override must look like key=value, got {item!r}")
    key, value = (part.strip() for part in item.split('=', 1))
    return {key: _coerce(key, value)}


class RunConfig:
    """Configuración resuelta con el origen de cada valor"""

    def __init__(self, file_values: Optional[Mapping[str, Any]] = None,
                 overrides: Optional[Mapping[str, Any]] = None):
        self._values = dict(DEFAULT_CONFIG)
        self._sources = {key: 'default' for key in DEFAULT_CONFIG}
        for source, layer in (('file', file_values or {}), ('cli', overrides or {})):
            for key, value in layer.items():
                if key not in DEFAULT_CONFIG:
                    raise ConfigError(f"unknown key {key!r}")
                if value is None and key not in _OPTIONAL_FLOATS:
                    continue
                self._values[key] = _coerce(key, value)
                self._sources[key] = source

    @classmethod
    def load(cls, path: Optional[Union[str, Path]] = None,
             overrides: Optional[Mapping[str, Any]] = None) -> 'RunConfig':
        """Lee el fichero (UTF-8) si se indica y aplica los overrides"""
        file_values = {}
        if path:
            file_values = parse_config_text(Path(path).read_text(encoding='utf-8'))
        return cls(file_values, overrides)

    def __getitem__(self, key: str) -> Any:
        return self._values[key]

    def get(self, key: str, default: Any = None) -> Any:
        return self._values.get(key, default)

    def as_dict(self) -> Dict[str, Any]:
        """Eco completo en el orden de DEFAULT_CONFIG"""
        return {key: self._values[key] for key in DEFAULT_CONFIG}

    def to_text(self) -> str:
        """Formato de fichero reutilizable con RunConfig.load"""
        lines = []
        for key, value in self.as_dict().items():
            if value is None:
                value = 'none'
            elif isinstance(value, bool):
                value = 'true' if value else 'false'
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"

    def get_config_status(self) -> Dict[str, str]:
        """Origen de cada valor: 'default', 'file' o 'cli'"""
        return dict(self._sources)
