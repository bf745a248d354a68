"""Lattice-theoretic counting of Fourier-Mukai partners of cubic fourfolds."""

__version__ = "0.1.0"
