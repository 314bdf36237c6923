"""scikit-learn style front end.

``SBTTransformer`` and ``CodeTokenizer`` are stateless transformers over
Java method text; ``CodeSummarizer`` wraps preprocessing, vocabulary
building, training and greedy decoding behind ``fit``/``predict``/``score``.
"""

from __future__ import annotations

import logging

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .ast import ApiWhitelist, AstNode, ParseError, parse_method, sbt_ao_flatten, sbt_flatten
from .corpus import END, START, ProcessedExample, Vocab, build_vocabs, tokenize
from .infer import EncodedSet, encode_examples, greedy_decode, indices_to_words, lengths_for
from .infer import VIEWS, sources_for, train
from .metrics import corpus_bleu
from .models import KINDS, ModelConfig, Seq2SeqModel, init_model
from .nn import Adam
from .validation import check_choice, check_positive, check_sources, check_summaries

log = logging.getLogger(__name__)


def _whitelist(value) -> ApiWhitelist:
    if value is None:
        return ApiWhitelist.default()
    if isinstance(value, ApiWhitelist):
        return value
    if isinstance(value, str):
        return ApiWhitelist.from_file(value)
    return ApiWhitelist(frozenset(value))


class SBTTransformer(TransformerMixin, BaseEstimator):
    """Java method text (or parsed trees) -> SBT or SBT-AO token lists.

    Parameters
    ----------
    mode : {"sbt", "sbt-ao"}
    whitelist : path, iterable of class names, ApiWhitelist or None (java.lang default)
    max_len : truncate sequences to this many tokens (None keeps everything)
    on_error : "raise" re-raises parse errors; "empty" yields an empty list
    """

    def __init__(self, mode="sbt-ao", whitelist=None, max_len=None, on_error="raise"):
        self.mode = mode
        self.whitelist = whitelist
        self.max_len = max_len
        self.on_error = on_error

    def fit(self, X, y=None):
        check_choice("mode", self.mode, ("sbt", "sbt-ao"))
        check_choice("on_error", self.on_error, ("raise", "empty"))
        self.whitelist_ = _whitelist(self.whitelist)
        self.n_failed_ = 0
        return self

    def transform(self, X):
        check_is_fitted(self, "whitelist_")
        out = []
        self.n_failed_ = 0
        for item in check_sources(X):
            try:
                tree = item if isinstance(item, AstNode) else parse_method(item)
            except ParseError:
                if self.on_error == "raise":
                    raise
                self.n_failed_ += 1
                out.append([])
                continue
            tokens = sbt_flatten(tree) if self.mode == "sbt" else sbt_ao_flatten(tree, self.whitelist_)
            out.append(tokens[: self.max_len] if self.max_len else tokens)
        return out


class CodeTokenizer(TransformerMixin, BaseEstimator):
    """Split text on camelCase, underscores and non-letters; lowercase."""

    def __init__(self, kind="code", delimit=False):
        self.kind = kind
        self.delimit = delimit

    def fit(self, X, y=None):
        check_choice("kind", self.kind, ("code", "comment"))
        return self

    def transform(self, X):
        out = []
        for text in check_sources(X):
            tokens = tokenize(text, self.kind)
            out.append([START, *tokens, END] if self.delimit else tokens)
        return out


class CodeSummarizer(BaseEstimator):
    """Attentional GRU encoder-decoder that generates one-sentence method summaries.

    ``X`` is a list of Java method sources (or :class:`ProcessedExample`),
    ``y`` a list of summary sentences. ``challenge=True`` trains the
    single-encoder model on the SBT-AO sequence only.
    """

    def __init__(
        self,
        kind="ast-attendgru",
        challenge=False,
        txtlen=100,
        astlen=100,
        comlen=13,
        embdims=100,
        rnndims=256,
        txtvocabsize=20000,
        astvocabsize=2000,
        comvocabsize=10000,
        epochs=10,
        batch_size=200,
        learning_rate=1e-3,
        metric="bleu",
        whitelist=None,
        seed=0,
    ):
        self.kind = kind
        self.challenge = challenge
        self.txtlen = txtlen
        self.astlen = astlen
        self.comlen = comlen
        self.embdims = embdims
        self.rnndims = rnndims
        self.txtvocabsize = txtvocabsize
        self.astvocabsize = astvocabsize
        self.comvocabsize = comvocabsize
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.metric = metric
        self.whitelist = whitelist
        self.seed = seed

    # -- feature construction ------------------------------------------

    def _txt_view(self) -> str:
        if self.challenge:
            if self.kind != "attendgru":
                raise ValueError("challenge=True needs kind='attendgru' (single SBT-AO encoder)")
            return "sbtao"
        return "sbt" if self.kind == "sbt" else "code"

    def _examples(self, X, y=None) -> list[ProcessedExample]:
        items = check_sources(X)
        if isinstance(items[0], ProcessedExample):
            return items
        summaries = check_summaries(y, len(items)) if y is not None else [""] * len(items)
        wl = self.whitelist_
        out = []
        for i, (item, summary) in enumerate(zip(items, summaries)):
            tree = item if isinstance(item, AstNode) else parse_method(item)
            code = tokenize(item, "code") if isinstance(item, str) else [w.lower() for w in tree.words()]
            out.append(
                ProcessedExample(
                    id=i,
                    project_id="input",
                    code_tokens=[START, *code, END][: self.txtlen],
                    ast_tokens=sbt_ao_flatten(tree, wl)[: self.astlen],
                    sbt_tokens=sbt_flatten(tree)[: self.txtlen],
                    comment_tokens=[START, *tokenize(summary, "comment"), END][: self.comlen],
                )
            )
        return out

    def _encode(self, examples) -> EncodedSet:
        return encode_examples(examples, sources_for(self.config_), self.vocabs_, lengths_for(self.config_))

    # -- estimator API -------------------------------------------------

    def fit(self, X, y=None, X_valid=None, y_valid=None):
        check_choice("kind", self.kind, KINDS)
        check_choice("metric", self.metric, ("bleu", "exact_match"))
        check_positive(
            txtlen=self.txtlen, astlen=self.astlen, comlen=self.comlen, embdims=self.embdims,
            rnndims=self.rnndims, epochs=self.epochs, batch_size=self.batch_size,
        )
        txt_view = self._txt_view()
        self.whitelist_ = _whitelist(self.whitelist)
        examples = self._examples(X, y)
        caps = {"txt": self.txtvocabsize, "ast": self.astvocabsize, "com": self.comvocabsize}
        caps["sbt"] = self.txtvocabsize if txt_view == "sbt" else self.astvocabsize
        if txt_view == "sbtao":
            caps["ast"] = self.txtvocabsize
        self.vocabs_ = build_vocabs(examples, caps)
        txt_key = VIEWS[txt_view][1]
        self.config_ = ModelConfig(
            kind=self.kind, txtlen=self.txtlen, astlen=self.astlen, comlen=self.comlen,
            embdims=self.embdims, rnndims=self.rnndims, txtvocabsize=len(self.vocabs_[txt_key]),
            astvocabsize=len(self.vocabs_["ast"]), comvocabsize=len(self.vocabs_["com"]),
            txt_view=txt_view,
        )
        self.model_ = init_model(self.config_, seed=self.seed)
        train_set = self._encode(examples)
        valid_set = self._encode(self._examples(X_valid, y_valid)) if X_valid is not None else None
        self.report_ = train(
            self.model_, train_set, valid_set, self.vocabs_["com"], epochs=self.epochs,
            batch_size=self.batch_size, seed=self.seed, optimizer=Adam(lr=self.learning_rate),
            metric=self.metric,
        )
        return self

    def predict_tokens(self, X) -> list[list[str]]:
        check_is_fitted(self, "model_")
        data = self._encode(self._examples(X))
        idx = greedy_decode(self.model_, data.inputs, batch_size=self.batch_size)
        return indices_to_words(idx, self.vocabs_["com"])

    def predict(self, X) -> list[str]:
        return [" ".join(t) for t in self.predict_tokens(X)]

    def score(self, X, y) -> float:
        """Composite corpus BLEU (percent) of greedy predictions against ``y``."""
        preds = self.predict_tokens(X)
        refs = [tokenize(s, "comment") for s in check_summaries(y, len(preds))]
        return corpus_bleu(preds, refs)

    @classmethod
    def from_model(cls, model: Seq2SeqModel, vocabs: dict[str, Vocab], **params) -> CodeSummarizer:
        """Wrap an already trained model (e.g. loaded from a checkpoint)."""
        c = model.config
        est = cls(
            kind=c.kind, challenge=c.txt_view == "sbtao", txtlen=c.txtlen, astlen=c.astlen,
            comlen=c.comlen, embdims=c.embdims, rnndims=c.rnndims, **params,
        )
        est.whitelist_ = _whitelist(est.whitelist)
        est.config_ = c
        est.vocabs_ = dict(vocabs)
        est.model_ = model
        return est
