"""Bernoulli Lab - free-boundary problems for the p-Laplacian on planar convex domains."""

__version__ = "0.1.0"
