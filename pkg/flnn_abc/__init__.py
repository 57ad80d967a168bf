"""Functional link neural networks trained by an artificial bee colony, with backpropagation baselines."""

__version__ = "0.1.0"
