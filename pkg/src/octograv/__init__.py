"""Complex quaternion/octonion algebra, frame geometry and Lagrangian densities."""

__version__ = "0.1.0"
