"""Well-balanced fifth-order WENO-AO finite volume solver for shallow water flows."""

__version__ = "0.1.0"
