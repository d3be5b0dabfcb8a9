"""
Jerarquía de excepciones de qdcluster
"""
from typing import Optional


class QDClusterError(Exception):
    """Error base del paquete"""


class LayoutError(QDClusterError, ValueError):
    """Layout inválido o incompatible entre operandos"""


class OperatorError(QDClusterError, ValueError):
    """Operador mal formado (dimensión, entradas no finitas, proyector inválido)"""


class NumericalDegeneracyError(QDClusterError):
    """Fallo de la descomposición espectral"""


class ScheduleError(QDClusterError, ValueError):
    """Las condiciones de temporización no se cumplen"""


class ConvergenceError(QDClusterError):
    """Corte de Fock, barrido, cuadratura o malla temporal sin convergencia"""


class NoiseModelError(QDClusterError, ValueError):
    """Modelo de ruido desconocido o parámetros inconsistentes"""


class ConfigError(QDClusterError, ValueError):
    """Error en el fichero de configuración o en los overrides"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
