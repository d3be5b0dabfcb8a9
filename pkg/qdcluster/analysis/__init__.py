"""
Módulos de análisis: física del doble punto, dinámica, estados cluster y ruido
"""
