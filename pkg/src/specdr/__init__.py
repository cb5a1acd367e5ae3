"""Spectral dimension reduction.

Every method runs the same pipeline: a pre-treatment of the data, one
EVD/SVD through :func:`pca_core`, and a post-treatment that transports the
result back to the original coordinates.
"""
from .cca import CcaResult, canonical_projectors, cca
from .coa import (CoaResult, ContingencyTable, chi_square, coa, drop_empty,
                  row_profile_distances)
from .errors import *  # noqa: F401,F403
from .kernels import BACKEND as KERNEL_BACKEND
from .linalg import (SpdFactor, SvdResult, gaussian_sketch, qr_orthonormalize,
                     spd_factor, svd_exact, svd_grp, sym_evd)
from .mca import (IndicatorMatrix, McaResult, burt_table,
                  indicator_from_categories, mca, mca_from_categories)
from .mds import (MdsResult, embedding_stress, gram_from_distances, mds,
                  pairwise_distances)
from .pca import (BicenterDecomposition, PcaMethod, PcaResult, QualityReport,
                  bicenter, center, pca_core, pca_double_averaged,
                  pca_scaled_centered, quality_metrics, rank_for_accuracy,
                  scale_columns)
from .pcaiv import (PcaivResult, Subspace, metric_projector, pcaiv,
                    pcaiv_constrained_one_side, pcaiv_with_metrics, projector)
from .pcamet import pca_met, transport_norm, weighted_center

__version__ = "0.1.0"
