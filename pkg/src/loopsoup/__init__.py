"""loopsoup: Brownian/disk/massive loop soups, their layering fields,
and the convergence laboratory toward tilted imaginary Gaussian chaos
on the unit disk."""

__version__ = "0.1.0"
