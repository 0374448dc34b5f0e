"""Optically mediated three-spin entangling gate simulator.

A central optically active spin switches on exchange coupling to two qubit
spins when excited. The package implements the analytic pulsed (dynamic)
gate, the adiabatic Gaussian-pulse gate, average entangling power, Lindblad
decay of the control, and a sweep CLI that writes CSV data with rendered
figures.
"""

__version__ = "0.1.0"

from .core import SystemParams, params_from_reduced
from .dynamic import (DynamicPhases, LogicalGate, dynamic_phases,
                      dynamic_unitary, propagate_excited, revival_time,
                      simulate_pulsed_gate)
from .entangling import (entangling_power, entangling_power_closed,
                         entangling_power_mc, linear_entropy)
from .adiabatic import (CphaseReport, PulseProfile, adiabaticity_metric,
                        cphase_report, eigenspectrum, extract_logical_gate,
                        find_cphase_tau, gaussian_pulse, interference_trace,
                        propagate_pulse)
from .open_system import (AdiabaticGateSpec, DecayModel, DynamicGateSpec,
                          decoherence_study, evolve_master, lindblad_rhs)

__all__ = [
    "__version__",
    "SystemParams", "params_from_reduced",
    "DynamicPhases", "LogicalGate", "revival_time", "dynamic_phases",
    "dynamic_unitary", "propagate_excited", "simulate_pulsed_gate",
    "linear_entropy", "entangling_power", "entangling_power_mc",
    "entangling_power_closed",
    "PulseProfile", "gaussian_pulse", "adiabaticity_metric", "propagate_pulse",
    "extract_logical_gate", "CphaseReport", "cphase_report", "find_cphase_tau",
    "eigenspectrum", "interference_trace",
    "DecayModel", "lindblad_rhs", "evolve_master", "decoherence_study",
    "DynamicGateSpec", "AdiabaticGateSpec",
]
