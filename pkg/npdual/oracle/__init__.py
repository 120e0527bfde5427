"""Ground truth for the solver: the closed-form simple-versus-simple test and grid enumeration."""
from npdual.oracle.oracle import (ClassicNpResult, GridResult, classic_np,
                                  classic_np_problem, grid_bruteforce)
