from ._ctrwfp import *  # noqa: F401,F403
from ._ctrwfp import __version__  # noqa: F401
