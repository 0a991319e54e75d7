"""Python access to the qnsem core."""

try:
    from ._qnsem import *  # noqa: F401,F403
    from ._qnsem import DEFAULT_TOL, ParseError, QnsemError
except ImportError:  # build tree: the extension sits next to the package
    from _qnsem import *  # noqa: F401,F403
    from _qnsem import DEFAULT_TOL, ParseError, QnsemError

__all__ = ["DEFAULT_TOL", "ParseError", "QnsemError"]
