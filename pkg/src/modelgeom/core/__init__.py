"""Shared models, exceptions, the classification decision tree and batch verification."""
