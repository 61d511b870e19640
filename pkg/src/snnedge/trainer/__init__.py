from .artifact import (
    ArtifactError,
    ArtifactVersionError,
    CorruptArtifactError,
    ModelArtifact,
    load_model,
    model_checksum,
    save_model,
)
from .evaluation import AccuracyReport, ModelStateError, SampleOutcome, evaluate
from .idx import (
    Dataset,
    IdxDataError,
    IdxFormatError,
    IdxLengthError,
    load_idx_images,
    load_idx_labels,
    load_mnist,
    stratified_indices,
)
from .training import LabelCoverageError, TrainConfig, assign_neuron_labels, label_from_rates, train

__all__ = [
    "AccuracyReport",
    "ArtifactError",
    "ArtifactVersionError",
    "CorruptArtifactError",
    "Dataset",
    "IdxDataError",
    "IdxFormatError",
    "IdxLengthError",
    "LabelCoverageError",
    "ModelArtifact",
    "ModelStateError",
    "SampleOutcome",
    "TrainConfig",
    "assign_neuron_labels",
    "evaluate",
    "label_from_rates",
    "load_idx_images",
    "load_idx_labels",
    "load_mnist",
    "load_model",
    "model_checksum",
    "save_model",
    "stratified_indices",
    "train",
]
