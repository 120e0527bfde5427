"""Global utility module for npdual."""
