"""permupoly - permutation polynomials over F_{q^3}: verification, search and symbolic re-derivation."""

__version__ = "0.1.0"
