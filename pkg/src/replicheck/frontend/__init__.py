from .ast import LibraryDef, MethodDef
from .parser import DslError, parse_library, pretty
from .universe import POISON, LocationUniverse, location_universe
from .unroll import Atom, UnrolledMethod, unroll, unroll_library

__all__ = [
    "Atom", "DslError", "LibraryDef", "LocationUniverse", "MethodDef", "POISON",
    "UnrolledMethod", "location_universe", "parse_library", "pretty", "unroll",
    "unroll_library",
]
