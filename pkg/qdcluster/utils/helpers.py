"""
Utilidades y funciones auxiliares
"""
import json
import math
from functools import lru_cache
from typing import Any, Dict, Tuple

import numpy as np


@lru_cache(maxsize=32)
def bit_table(n_bits: int) -> np.ndarray:
    """
    Tabla (2^n, n) de bits de cada índice de base.

    El qubit 1 es el índice más lento (bit más significativo), igual que la
    convención de ordenación de HilbertLayout.
    """
    indices = np.arange(2 ** n_bits, dtype=np.int64)
    shifts = np.arange(n_bits - 1, -1, -1, dtype=np.int64)
    table = ((indices[:, None] >> shifts[None, :]) & 1).astype(np.int8)
    table.setflags(write=False)
    return table


def sample_stream(seed: int, index: int) -> np.random.Generator:
    """
    Generador independiente para la muestra `index` de la semilla `seed`.

    El stream depende solo de (seed, index), nunca del worker que lo ejecuta.
    """
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return np.random.default_rng(sequence)


def parse_range(text: str) -> Tuple[int, int]:
    """
    Parsea un rango 'A..B' (inclusivo).

    Returns:
        Tupla (A, B)
    """
    parts = str(text).split('..')
    if len(parts) != 2:
        raise ValueError(f"range must look like A..B, got {text!r}")
    start, stop = int(parts[0]), int(parts[1])
    if start > stop:
        raise ValueError(f"empty range {text!r}")
    return start, stop


def to_jsonable(value: Any) -> Any:
    """Convierte tipos numpy/complejos a tipos JSON nativos"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {'re': float(value.real), 'im': float(value.imag)}
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def dump_json(report: Dict[str, Any]) -> str:
    """JSON UTF-8 con orden de claves estable (orden de inserción)"""
    return json.dumps(to_jsonable(report), indent=2, ensure_ascii=False) + "\n"
