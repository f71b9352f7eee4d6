"""Fair division of indivisible goods whose bundles must be connected in a graph.

Exact ``Fraction`` arithmetic throughout.  The submodules are re-exported
here; ``graphfair.cli`` is the command-line entry point.
"""

from .caps import CapExceeded, get_cap
from .checkers import *  # noqa: F403
from .envy import *  # noqa: F403
from .graph import *  # noqa: F403
from .instances import *  # noqa: F403
from .mms import *  # noqa: F403
from .oracles import *  # noqa: F403
from .valuation import *  # noqa: F403
from . import checkers, envy, graph, instances, mms, oracles, valuation

__version__ = "0.1.0"

__all__ = ["CapExceeded", "get_cap", "__version__"]
for _module in (graph, valuation, checkers, oracles, mms, envy, instances):
    __all__ += _module.__all__
del _module
