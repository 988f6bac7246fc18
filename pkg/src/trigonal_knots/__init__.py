"""
Trigonal Knot Degree
Braid calculus of real trigonal curves and degree bounds for two-bridge knots
"""

__version__ = "0.1.0"
