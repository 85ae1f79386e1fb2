from clustertrop.monodromy.factorization import *
from clustertrop.monodromy.kodaira import *
