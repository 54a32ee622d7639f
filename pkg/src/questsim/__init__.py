"""Simulation toolkit for entanglement decoherence over a ground-to-orbit optical link."""

__version__ = "0.1.0"
