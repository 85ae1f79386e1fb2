from clustertrop.linalg.matrices import *
from clustertrop.linalg.conjugacy import *
from clustertrop.linalg.lattice import *
