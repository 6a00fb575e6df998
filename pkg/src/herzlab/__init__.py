"""Numerical toolkit for mixed-norm dyadic analysis on periodic grids.

Exact-measure Herz norms of sampled fields, smooth dyadic frequency
decompositions, an analysis/synthesis transform over scale-and-shift
lattices, sequence-space norms on dyadic tilings, axiswise maximal
operators, and harnesses that measure the package's embedding
inequalities empirically.
"""

__version__ = "0.1.0"

from .embedlab import (EmbeddingSpec, dilation_family, dilation_scan,
                       hardy_check, necessity_fit, ppn_check,
                       seq_embedding_check, single_spike_ratio)
from .frames import (CoeffSeq, analyze, load_coeffs, roundtrip_error,
                     save_coeffs, synthesize)
from .grid import (DyadicGeometry, SampledField, annulus_mask_axis,
                   cube_indicator, load_field, make_field, save_field,
                   spectral_transform)
from .herz import (HerzParams, HypothesisError, axis_herz_norm, axis_lp_norm,
                   lq_combine, mixed_herz_norm, mixed_lebesgue_norm)
from .lpdecomp import (SpectralSystem, bandlimited_witness, build_fj_pair,
                       build_resolution, lp_block, partition_sum,
                       random_band_field)
from .maximal import (EtaKernel, axis_maximal, fs_vector_check,
                      iterated_maximal, rtrick_check)
from .seqspace import (RearrangedProfile, SeqSpaceParams, b_norm, f_norm,
                       lambda_star, seq_norm)
from .spaces import (SpaceParams, besov_norm, block_norms,
                     norm_equivalence_report, space_norm, triebel_norm)

__all__ = [name for name in dir() if not name.startswith("_")]
