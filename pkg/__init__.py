"""Imports from '.src' for use from a source checkout. Not part of the package."""

from .src import *
from .src import __all__
