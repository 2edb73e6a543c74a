"""Multiplex network, coordination game, diffusion dynamics and analytics."""
