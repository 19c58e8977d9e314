from ._nbm import *  # noqa: F401,F403
