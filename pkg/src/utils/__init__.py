"""
Exact rational arithmetic (`utils.exact`) and validated parameter fields
(`utils.validator`) shared by the rest of the package.

"""

from . import exact, validator

__all__ = ["exact", "validator"]
