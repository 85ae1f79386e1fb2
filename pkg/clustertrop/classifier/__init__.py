from clustertrop.classifier.gamma import *
from clustertrop.classifier.report import *
