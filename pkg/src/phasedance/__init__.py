"""Group-dance synthesis from a variational phase manifold.

A conditional VAE whose latent space is parameterized in the frequency
domain (amplitude / frequency / offset / phase-shift per channel), so a
single prior pass supports sampling any number of synchronized dancers
at constant working memory.
"""

__version__ = "0.1.0"
