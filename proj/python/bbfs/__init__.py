from ._bbfs import *  # noqa: F401,F403
