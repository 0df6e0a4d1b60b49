"""Zariski topology graphs of finite modules over finite rings."""

from .errors import CapExceeded, EmptySpectrum, NotClosedError, ZariskiError
from .ring import Ideal, Ring
from .module import DirectSumModule, FiniteModule, Submodule, enumerate_submodules
from .spectra import TContext, make_T_context, spectrum
from .graph import Graph, build_AG, build_AG_star, build_G_tau, metrics

__version__ = "0.1.0"

__all__ = [
    "CapExceeded", "EmptySpectrum", "NotClosedError", "ZariskiError",
    "Ideal", "Ring", "DirectSumModule", "FiniteModule", "Submodule", "enumerate_submodules",
    "TContext", "make_T_context", "spectrum",
    "Graph", "build_AG", "build_AG_star", "build_G_tau", "metrics",
]
