"""Discretized parametric testing problems and checks of their least favorable priors."""
from npdual.families.gaussian import (GaussianSide, GaussianXbarSpec,
                                      gaussian_preset, gaussian_xbar_problem,
                                      member_parameters, spec_from_dict)
from npdual.families.lfp import LfpReport, check_lfp, lfp_report
