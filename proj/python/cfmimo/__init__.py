"""Cell-free massive MIMO uplink simulation with large-scale fading decoding."""

from ._cfmimo import *  # noqa: F401,F403
from ._cfmimo import __version__  # noqa: F401
