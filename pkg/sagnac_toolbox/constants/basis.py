"""
Two-qubit basis conventions.

Every ket, density matrix and projector in the toolbox is written over the
ordered basis (HH, HV, VH, VV), i.e. np.kron(arm_a, arm_b) with H = (1, 0) and
V = (0, 1) for each arm. Nothing else in the code base may assume an order.
"""
import numpy as np

BASIS_LABELS = ('HH', 'HV', 'VH', 'VV')
HH, HV, VH, VV = range(4)

H_KET = np.array([1.0, 0.0], dtype=complex)
V_KET = np.array([0.0, 1.0], dtype=complex)
D_KET = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2)
A_KET = np.array([1.0, -1.0], dtype=complex) / np.sqrt(2)
R_KET = np.array([1.0, 1.0j], dtype=complex) / np.sqrt(2)

# Tolerances for the physicality checks.
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_SLACK = 1e-9
