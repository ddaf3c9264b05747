"""Spectral sets, translational tilings and non-spectrality certificates for convex polytopes."""
