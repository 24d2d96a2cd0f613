"""Video compression by pixelwise frame mixing with sparse-recovery decoding.

Groups of n consecutive frames are mixed down to m < n frames by a known
matrix before a conventional encoder sees them; the decoder gets the
sources back by classifying wavelet-coefficient columns onto the subspaces
spanned by the matrix columns.
"""
from .cli import BenchResult, compression_ratio
from .metrics import QualityReport, frame_mse, frame_psnr, sequence_report
from .mixcore import (
    Frame,
    FrameBlock,
    MixedBlock,
    MixingMatrix,
    SparsityReport,
    ValidationReport,
    check_sparsity,
    default_mixing_matrix,
    generalized_inverse,
    mix_block,
    snap_to_8bit,
    validate_mixing_matrix,
)
from .pipeline import (
    CodecConfig,
    EncodedSequence,
    RoundtripReport,
    decode_sequence,
    default_config,
    encode_sequence,
    load_config,
    roundtrip_eval,
)
from .sca import (
    ColumnAssignment,
    Hyperplane,
    HyperplaneSet,
    RecoveryStats,
    build_hyperplanes,
    classify_column,
    column_residual,
    reconstruct_column,
    recover_block,
    recover_dense,
)
from .synth import generate
from .vio import (
    ContainerError,
    SequenceSource,
    read_container,
    read_sequence,
    write_container,
    write_sequence,
)
from .wavelet import SubbandImage, haar_forward, haar_inverse

__version__ = "0.1.0"

__all__ = [
    "BenchResult",
    "CodecConfig",
    "ColumnAssignment",
    "ContainerError",
    "EncodedSequence",
    "Frame",
    "FrameBlock",
    "Hyperplane",
    "HyperplaneSet",
    "MixedBlock",
    "MixingMatrix",
    "QualityReport",
    "RecoveryStats",
    "RoundtripReport",
    "SequenceSource",
    "SparsityReport",
    "SubbandImage",
    "ValidationReport",
    "build_hyperplanes",
    "check_sparsity",
    "classify_column",
    "column_residual",
    "compression_ratio",
    "decode_sequence",
    "default_config",
    "default_mixing_matrix",
    "encode_sequence",
    "frame_mse",
    "frame_psnr",
    "generalized_inverse",
    "generate",
    "haar_forward",
    "haar_inverse",
    "load_config",
    "mix_block",
    "read_container",
    "read_sequence",
    "reconstruct_column",
    "recover_block",
    "recover_dense",
    "roundtrip_eval",
    "sequence_report",
    "snap_to_8bit",
    "validate_mixing_matrix",
    "write_container",
    "write_sequence",
]
