"""
Constantes de configuración para qdcluster
"""
import math

# ================================
# CONSTANTES FÍSICAS
# ================================

PHYSICAL = {
    'hbar_uev_s': 6.582119569e-10,     # ħ en µeV·s
    'h_uev_s': 4.135667696e-9,         # h en µeV·s
    'kb_uev_per_k': 86.17333262,       # k_B en µeV/K
    'resistance_quantum_ohm': 25812.80745,  # h/e²
}

# ================================
# VALORES POR DEFECTO (dispositivo y ruido)
# ================================

DEVICE_DEFAULTS = {
    # Doble punto cuántico
    'tunneling_uev': 5.0,
    'detuning_uev': 0.0,

    # Resonador
    'resonator_frequency_hz': 2.0e9,
    'coupling_capacitance_f': 400e-18,
    'total_capacitance_f': 200e-18,
    'impedance_ohm': 50.0,
    'quality_factor': 1.0e5,

    # Decoherencia
    't2_star_s': 1.0e-6,
    't1_s': 1.0e-6,
    't2_bare_s': 1.0e-8,
    'gap_uev': 10.0,
    'temperature_k': 0.1,

    # Ruido de fase (valores citados, no derivados de las fórmulas)
    'sigma1_rad': 0.022 * math.pi,
    'sigma2_rad': 0.006 * math.pi,
    'sigma_rad': 0.023 * math.pi,
    'drive_rel_sigma': 0.02,
}

# Tolerancias numéricas
TOLERANCES = {
    'validation': 1e-12,
    'propagation': 1e-9,
    'hermitian_sample': 1e-10,
    'projector': 1e-10,
    'schedule': 1e-12,
    'schedule_odd_phase': 1e-9,
    'sweep_convergence': 1e-4,
    'cutoff_convergence': 1e-4,
    'grid_convergence': 1e-3,
}

# Límites
LIMITS = {
    'max_dimension': 2 ** 26,
    'max_qubits_evolve': 6,
    'max_fock_cutoff': 8,
    'max_qubits_cluster': 10,
    'max_qubits_bruteforce': 14,
    'min_mc_samples': 100,
    'min_mc_batches': 10,
    'min_sweep_steps': 100,
    'max_time_points': 4097,
    'max_circuit_ratio': 2.0,
}

# Umbral del presupuesto de decoherencia: cada escala >= factor * τ
BUDGET_FACTOR = 10.0

# Códigos de salida del CLI
EXIT_CODES = {
    'ok': 0,
    'error': 1,
    'budget_fail': 2,
}
