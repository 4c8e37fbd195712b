"""Casimir-Polder free energy and entropy of an atom near a wall.

Lifshitz-formula evaluation under oscillator, dc-conducting, plasma, Drude
and screened wall models, with low-temperature asymptotics and a Nernst
heat theorem audit.
"""
from importlib import metadata as _metadata

try:
    __version__ = _metadata.version("artifact")
except _metadata.PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"
