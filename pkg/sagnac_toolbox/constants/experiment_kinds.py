"""
Collection of experiment kinds and the classes that run them.
"""

FRINGE = 'fringe'
HOM = 'hom'
CHSH = 'chsh'
TOMOGRAPHY = 'tomography'
SWEEP_POWER = 'sweep-power'
SWEEP_TEMPERATURE = 'sweep-temperature'

# Kinds that analyze_file understands.
FILE_KINDS = (FRINGE, HOM, CHSH, TOMOGRAPHY)
SWEEP_KINDS = (SWEEP_POWER, SWEEP_TEMPERATURE)
ALL_KINDS = FILE_KINDS + SWEEP_KINDS

EXPERIMENT_TARGETS = {
    FRINGE: 'sagnac_toolbox.experiments.fringe.FringeExperiment',
    HOM: 'sagnac_toolbox.experiments.hom.HomExperiment',
    CHSH: 'sagnac_toolbox.experiments.chsh.ChshExperiment',
    TOMOGRAPHY: 'sagnac_toolbox.experiments.tomography.TomographyExperiment',
    SWEEP_POWER: 'sagnac_toolbox.experiments.sweeps.PowerSweep',
    SWEEP_TEMPERATURE: 'sagnac_toolbox.experiments.sweeps.TemperatureSweep',
}
