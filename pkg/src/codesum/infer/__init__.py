"""Teacher-forcing pairs, training loop, greedy and ensemble decoding."""

from .data import (
    VIEWS,
    EncodedSet,
    PairIndex,
    TrainingPair,
    batch_inputs,
    encode_examples,
    expand_dataset,
    expand_pairs,
    lengths_for,
    sources_for,
    strip_delimiters,
)
from .decode import (
    ensemble_decode,
    greedy_decode,
    greedy_decode_with_attention,
    indices_to_words,
    pick_next,
)
from .training import TrainingDiverged, TrainRunReport, train, validation_score

__all__ = [
    "VIEWS", "EncodedSet", "PairIndex",
    "TrainRunReport", "TrainingDiverged", "TrainingPair", "batch_inputs", "encode_examples",
    "ensemble_decode", "expand_dataset", "expand_pairs", "greedy_decode",
    "greedy_decode_with_attention", "indices_to_words", "lengths_for", "pick_next", "sources_for",
    "strip_delimiters", "train", "validation_score",
]
