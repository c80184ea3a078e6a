"""
Calibration values of the CW-pumped telecom Sagnac source.

Units: mW, nm, mm, degrees C, ns, Hz.
"""

PUMP_POWER = 60.0
PUMP_WAVELENGTH = 775.04
CRYSTAL_TEMPERATURE = 32.0
CENTRAL_WAVELENGTH = 1550.0
COHERENCE_LENGTH = 0.44

ALPHA1 = 0.82  # Filter transmission.
ALPHA2 = 0.32  # Fiber coupling.
DUTY_CYCLE = 0.09

# Fitted to a 0.964 raw fringe visibility, S ~ 2.6 and fidelity ~ 0.935 at once.
NOISE_P = 0.964
BALANCE = 0.663

# Pairs/s/mW at the source. 150 cps of coincidences at p_joint = 0.5 with the
# detector chain below. Predicted singles come out near 2.4 kcps.
PAIR_RATE_COEFF = 67240.0

# Free running gated APD (triggers the second one).
APD1_EFFICIENCY = 0.15
APD1_GATE_WINDOW = 1.0
APD1_DARK_PROB = 5.6e-6
APD1_TRIGGER_RATE = 90e6

# Triggered APD, its gating is absorbed into APD1's duty cycle.
APD2_EFFICIENCY = 0.08
APD2_GATE_WINDOW = 2.5
APD2_DUTY_CYCLE = 1.0
APD2_DARK_PROB = 2.0e-5
# Trigger rate that reproduces the ~500 cps dark rate seen on this port.
APD2_TRIGGER_RATE = 25e6

COINCIDENCE_RATE = 150.0
BANDWIDTH = 2.4
HOM_VISIBILITY = 0.953
HOM_PUMP_POWER = 50.0
HOM_STEP = 0.01  # Air gap step in mm.
MEASUREMENT_TIME = 10.0  # Accumulation per point in s.

# (temperature C, signal wavelength nm), ordered by temperature.
TUNING_TABLE = (
    (17.5, 1560.31),
    (27.0, 1554.72),
    (32.0, 1550.09),
    (41.0, 1545.47),
    (51.0, 1539.90),
)
