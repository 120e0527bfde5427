"""Dense two-phase primal simplex with dual multipliers and optimality residuals."""
from npdual.simplex.simplex import (LinearProgram, LpResiduals, LpSolution,
                                    LpStatus, RowSense, solve_lp)
