"""Corpus preparation: filtering, tokenization, vocabularies and splits."""

from .pipeline import (
    DATASET_COLUMNS,
    SPLITS,
    VOCAB_FILES,
    CorpusConfig,
    MethodRecord,
    ProcessedExample,
    RecordRejected,
    SplitCorpus,
    build_vocabs,
    extract_methods,
    load_dataset,
    partition_counts,
    prepare_corpus,
    process_record,
    read_java_tree,
    read_method_tsv,
    read_split,
    reinstate_unique_autogen,
    split_by_project,
    write_dataset,
    write_split,
)
from .text import extract_summary, is_autogenerated, is_english, split_identifier, tokenize
from .vocab import (
    END,
    END_ID,
    PAD,
    PAD_ID,
    START,
    START_ID,
    UNK,
    UNK_ID,
    Vocab,
    build_vocab,
    frame_batch,
    frame_sequence,
)

__all__ = [
    "DATASET_COLUMNS", "SPLITS", "VOCAB_FILES",
    "END", "END_ID", "PAD", "PAD_ID", "START", "START_ID", "UNK", "UNK_ID",
    "CorpusConfig", "MethodRecord", "ProcessedExample", "RecordRejected", "SplitCorpus",
    "Vocab", "build_vocab", "build_vocabs", "extract_methods", "extract_summary",
    "frame_batch", "frame_sequence", "is_autogenerated", "is_english", "load_dataset",
    "partition_counts", "prepare_corpus", "process_record", "read_java_tree",
    "read_method_tsv", "read_split", "reinstate_unique_autogen", "split_by_project",
    "split_identifier", "tokenize", "write_dataset", "write_split",
]
