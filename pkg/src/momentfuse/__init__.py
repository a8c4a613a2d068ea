"""momentfuse: grayscale multi-sensor image fusion via local-moment decision
maps, with baseline fusers, quality metrics, and a batch harness."""

from .batch import (
    BatchReport,
    BatchRow,
    EmptyBatchError,
    PairSpec,
    discover_pairs,
    emit_report,
    read_manifest,
    run_batch,
    run_pair,
)
from .filters import (
    DEFAULT_CENTER_WEIGHT,
    Kernel3,
    convolve3,
    high_boost_mask,
    identity_kernel,
    preprocess,
)
from .fusion import (
    FUSION_METHODS,
    AverageFuser,
    FusionResult,
    Fuser,
    MomentFuser,
    PcaFuser,
    decision_map,
    local_moment_map,
    make_fuser,
    pca_weights,
)
from .image import pad, quantize, widen
from .metrics import (
    EdgeMap,
    MetricsRecord,
    QabfConstants,
    entropy,
    evaluate,
    histogram256,
    joint_histogram,
    mim,
    mutual_information,
    qabf,
    sobel_edges,
    std_dev,
)
from .pgm import PgmError, load_pgm, read_pgm, save_pgm, write_pgm
from .synthetic import (
    SyntheticPair,
    complementary_blur_pair,
    gaussian_blur,
    random_texture,
    synthesize_pairs,
)
from .validation import ShapeMismatchError

__version__ = "0.1.0"
