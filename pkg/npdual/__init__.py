"""Composite-vs-composite Neyman-Pearson testing on finite sample spaces via linear programming."""
