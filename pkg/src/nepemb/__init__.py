"""Contextual word embeddings for Nepali: corpus pipeline, masked-LM encoder and evaluation."""

from .corpus import Corpus, Document, SourceCategory, Stage, corpus_stats, ingest, merge
from .preprocess import filter_non_nepali, lexical_split, run_pipeline, standardize
from .tokenizer import Vocab, decode, encode, train_vocab

__version__ = "0.1.0"

__all__ = [
    "Corpus", "Document", "SourceCategory", "Stage", "corpus_stats", "ingest", "merge",
    "filter_non_nepali", "lexical_split", "run_pipeline", "standardize",
    "Vocab", "decode", "encode", "train_vocab",
]
