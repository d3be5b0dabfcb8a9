"""Módulo config"""
