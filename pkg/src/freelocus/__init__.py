"""Exact computations with free (noncommutative) polynomials: evaluation,
linearization, free loci and their atomic decompositions."""

__version__ = "0.1.0"
