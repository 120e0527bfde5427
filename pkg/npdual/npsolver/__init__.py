"""Max-min testing problem, its dual and the values of both."""
from npdual.npsolver.formulation import build_maxmin_lp, build_middle_lp
from npdual.npsolver.npsolver import (DualRayScan, DualSolution,
                                      PrimalSolution, SolveReport,
                                      dual_objective, reduce_to_simple,
                                      scan_dual_ray, solve_maxmin)
