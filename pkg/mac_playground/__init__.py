"""
MAC Playground - game-theoretic power and rate control for fading multiple-access channels,
with and without an eavesdropper.
"""

__version__ = "0.1.0"
