from clustertrop.surfaces.boundary import *
from clustertrop.surfaces.picard import *
