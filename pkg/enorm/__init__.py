"""Energy-constrained operator norms, Γ frontiers and √G-bounds on finite truncations."""

__version__ = "1.0.0"
