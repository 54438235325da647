"""Coherence-based non-Markovianity of the amplitude-damping channel.

Modules: ``qubit`` (states), ``channel`` (survival probability, Kraus map),
``coherence``, ``nonmarkov`` (N_C), ``optics`` (bench emulator),
``tomography`` and ``cli``.
"""
from .channel import ChannelParams, apply_channel, joint_map, survival_p, survival_p_tau
from .coherence import CoherenceTrace, coherence, coherence_closed_form, trace_coherence
from .nonmarkov import (
    NonMarkovianity,
    nc_analytic,
    nc_asymptotic,
    nc_maximize,
    nc_numeric,
    nc_partial,
    revival_schedule,
)
from .optics import BenchConfig, measure_tomography, reduced_state, run_bench, theta_from_p
from .qubit import BlochVector, DensityMatrix, from_bloch, to_bloch, validate
from .tomography import TomographyRecord, reconstruct

__version__ = "0.1.0"
