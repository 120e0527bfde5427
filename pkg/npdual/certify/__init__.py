"""Independent checks of the optimality conditions for a candidate (phi, q, lambda)."""
from npdual.certify.certify import (CkCertificate, SaddleReport,
                                    SlacknessReport, StructureDecomposition,
                                    WeakDualityReport, check_saddle,
                                    check_slackness, check_weak_duality,
                                    ck_certificate, decompose_structure)
