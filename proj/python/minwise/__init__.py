from ._minwise import *  # noqa: F401,F403
