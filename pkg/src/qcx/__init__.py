"""Information-theoretic spreading measures of quantum states and orthogonal polynomials."""

__version__ = "0.1.0"
