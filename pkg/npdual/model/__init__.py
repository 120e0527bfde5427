"""Core domain types for finite-space composite hypothesis testing."""
from npdual.model.io import (load_candidate, load_problem, problem_from_dict,
                             problem_to_dict)
from npdual.model.model import (Density, FunctionalEvaluation,
                                HypothesisFamily, Mixture, Prior,
                                RandomizedTest, ReferenceMeasure, Side,
                                TestingProblem, ensure_valid, evaluate_power,
                                evaluate_size, mixture_density,
                                validate_problem)
