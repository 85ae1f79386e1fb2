from clustertrop.seeds.seed import *
from clustertrop.seeds.fan_spec import *
from clustertrop.seeds.equivalence import *
from clustertrop.seeds.tropical import *
from clustertrop.seeds.quiver import *
from clustertrop.seeds.isomorphism import *
