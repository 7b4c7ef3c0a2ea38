"""equipure: exact commutative algebra for equidimensionality, purity,
splinter probing and char-p descent checks, with self-verifying certificates.
"""

__version__ = "0.1.0"
