import numpy as np
import pytest
from conftest import EXAMPLE1, EXAMPLE1_SBTAO
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from codesum.ast import ParseError
from codesum.estimators import CodeSummarizer, CodeTokenizer, SBTTransformer
from codesum.synthetic import generate_methods

SMALL = dict(txtlen=30, astlen=60, comlen=6, embdims=8, rnndims=16, epochs=3, batch_size=64)


@pytest.fixture(scope="module")
def corpus():
    methods = generate_methods(30, seed=4)
    return [m.source for m in methods], [m.summary for m in methods]


def test_sbt_transformer_example1():
    out = SBTTransformer(whitelist=["String"]).fit_transform([EXAMPLE1])
    assert out == [EXAMPLE1_SBTAO.split()]
    sbt = SBTTransformer(mode="sbt", max_len=8).fit_transform([EXAMPLE1])[0]
    assert len(sbt) == 8 and sbt[0] == "("


def test_sbt_transformer_errors():
    t = SBTTransformer(on_error="empty").fit([])
    assert t.transform(["not java at all {"]) == [[]] and t.n_failed_ == 1
    with pytest.raises(ParseError):
        SBTTransformer().fit([]).transform(["not java at all {"])
    with pytest.raises(ValueError):
        SBTTransformer(mode="xml").fit([])
    with pytest.raises(NotFittedError):
        SBTTransformer().transform([EXAMPLE1])


def test_code_tokenizer():
    out = CodeTokenizer(delimit=True).fit_transform([EXAMPLE1])[0]
    assert out[0] == "<s>" and out[-1] == "</s>"
    assert " ".join(out[1:-1]) == "public config token url string token url this token url token url return this"
    assert CodeTokenizer(kind="comment").fit_transform(["Sets the tokenUrl."]) == [["sets", "the", "token", "url"]]


def test_get_params_and_clone():
    est = CodeSummarizer(kind="attendgru", rnndims=17)
    params = est.get_params()
    assert params["rnndims"] == 17 and params["kind"] == "attendgru"
    twin = clone(est)
    assert twin.get_params() == params and twin is not est
    assert est.set_params(epochs=2).epochs == 2


@pytest.mark.parametrize("kind", ["ast-attendgru", "attendgru", "sbt"])
def test_fit_predict_score(corpus, kind):
    X, y = corpus
    est = CodeSummarizer(kind=kind, **SMALL).fit(X, y)
    preds = est.predict(X[:5])
    assert len(preds) == 5 and all(isinstance(p, str) for p in preds)
    assert 0.0 <= est.score(X, y) <= 100.0
    assert len(est.report_.train_loss) == 3


def test_fit_is_deterministic(corpus):
    X, y = corpus
    a = CodeSummarizer(kind="attendgru", **SMALL).fit(X, y)
    b = CodeSummarizer(kind="attendgru", **SMALL).fit(X, y)
    assert np.array_equal(a.model_.params["out_dense.kernel"], b.model_.params["out_dense.kernel"])


def test_challenge_uses_sbtao_only(corpus):
    X, y = corpus
    est = CodeSummarizer(kind="attendgru", challenge=True, **SMALL).fit(X, y)
    assert est.config_.txt_view == "sbtao" and not est.config_.uses_ast
    with pytest.raises(ValueError, match="challenge"):
        CodeSummarizer(challenge=True, **SMALL).fit(X, y)


def test_from_model_round_trip(corpus):
    X, y = corpus
    est = CodeSummarizer(kind="attendgru", **SMALL).fit(X, y)
    wrapped = CodeSummarizer.from_model(est.model_, est.vocabs_)
    assert wrapped.predict(X) == est.predict(X)


def test_input_validation():
    with pytest.raises(NotFittedError):
        CodeSummarizer().predict([EXAMPLE1])
    with pytest.raises(ValueError):
        CodeSummarizer(**SMALL).fit([EXAMPLE1], ["a", "b"])
    with pytest.raises(ValueError):
        CodeSummarizer(kind="codenn").fit([EXAMPLE1], ["a"])
    with pytest.raises(ValueError):
        CodeSummarizer(**dict(SMALL, epochs=0)).fit([EXAMPLE1], ["a"])
