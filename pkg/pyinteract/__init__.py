import os

from pyinteract.utils import *
import pyinteract.utils as utils
from pyinteract.specfun import *
import pyinteract.specfun as specfun
from pyinteract.kernel import *
import pyinteract.kernel as kernel
from pyinteract.quadrature import *
import pyinteract.quadrature as quadrature
from pyinteract.closedform import *
import pyinteract.closedform as closedform
from pyinteract.measure import *
import pyinteract.measure as measure
from pyinteract.solver import *
import pyinteract.solver as solver
from pyinteract.verify import *
import pyinteract.verify as verify
from pyinteract.rng import *
import pyinteract.rng as rng
import pyinteract.commands as commands


# export all the symbols from separate modules
__all__ = (
    utils.__all__ +
    specfun.__all__ +
    kernel.__all__ +
    quadrature.__all__ +
    closedform.__all__ +
    measure.__all__ +
    solver.__all__ +
    verify.__all__ +
    rng.__all__ +
    ["commands"]
)
from pyinteract.version import __version__


def get_include():
    '''return a list of include directories.'''
    dirname = os.path.abspath(os.path.join(os.path.dirname(__file__)))
    return [dirname]
