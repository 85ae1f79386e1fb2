from clustertrop.trop.fan import *
from clustertrop.trop.developing import *
from clustertrop.trop.calibration import *
from clustertrop.trop.lines import *
from clustertrop.trop.regions import *
