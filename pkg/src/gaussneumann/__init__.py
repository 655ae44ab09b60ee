"""Neumann and Dirichlet eigenvalues of the Gaussian-weighted Laplacian."""

__version__ = "0.1.0"
