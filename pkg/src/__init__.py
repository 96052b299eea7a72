"""Dueling Max-Entropy Lab - dueling Q-networks with an advantage-entropy loss, verified on toy MDPs."""

__version__ = "0.1.0"
