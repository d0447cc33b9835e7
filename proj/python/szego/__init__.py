from ._szego import *  # noqa: F401,F403
from ._szego import __doc__ as _doc

__doc__ = _doc
