"""Command line interface for npdual."""
