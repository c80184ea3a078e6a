import os
import pathlib

__version__ = '1.0.0'

SAGNAC_TOOLBOX_PATH = str(pathlib.Path(__file__).parent.parent.resolve())
os.environ['SAGNAC_TOOLBOX_PATH'] = SAGNAC_TOOLBOX_PATH
