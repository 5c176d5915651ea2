"""Reproducing kernels of theta-Fock spaces: lattice sums, Hermite coefficients, elliptic functions and zeros."""
