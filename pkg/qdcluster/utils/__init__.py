"""Módulo utils"""
