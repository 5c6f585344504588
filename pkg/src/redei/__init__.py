"""Exact direction counting in finite planes and growth in Aff(GF(q))."""

from .ff import Field, construct_field

__all__ = ["Field", "construct_field"]
