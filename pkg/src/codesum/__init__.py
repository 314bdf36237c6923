"""Code summarization toolkit: SBT-AO ASTs, attentional GRU encoder-decoders, BLEU."""

__version__ = "0.1.0"
