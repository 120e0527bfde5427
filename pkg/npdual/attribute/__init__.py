"""Declarative, verifiable configuration attributes."""
from npdual.attribute.attribute import NpdualAttribute, VerifiedConfig
