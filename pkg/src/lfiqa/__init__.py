"""Full-reference IQA metrics with a fixed logistic remapping of scores.

Native metrics (SSIM, MS-SSIM, GMSD) work on float luma planes; any other
metric can be ingested as precomputed scores. Scores are normalised to a
similarity in [0, 1] and remapped by ``lf_map`` to spread out the
saturated high-quality end before correlating with MOS.
"""

from .imageio import (DatasetManifest, DatasetRecord, ImageDecodeError, LumaImage,
                      ManifestError, load_image, parse_manifest, serialize_manifest)
from .lf import LfMode, LfScore, LfVariant, lf_map, lf_per_window, lf_values
from .metrics import (GMSD, MS_SSIM, SSIM, DimensionError, Direction, MetricKind, MetricScore,
                      ScoreSet, SimilarityScore, SsimParams, gmsd, ingest_scores, ms_ssim,
                      normalize_direction, ssim)
from .stats import (EvaluationReport, PrecisionReport, ProbeSet, QualityGroup,
                    build_evaluation_report, build_precision_report,
                    discrimination_resolution, group_by_quality, plcc, scatter_export,
                    select_probe_set)

__version__ = "0.1.0"
