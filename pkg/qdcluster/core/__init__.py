"""Módulo core: espacio de Hilbert compuesto y errores"""
