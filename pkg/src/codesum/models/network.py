"""The three encoder-decoder architectures: ``ast-attendgru``, ``attendgru`` and ``sbt``.

All three share the same decoder and output head:

    decoder GRU over the comment prefix (initialised with the last encoder state)
    -> dot-product attention over every encoder's per-step states
    -> concatenate [contexts..., decoder states]
    -> time-distributed dense (relu) -> flatten -> dense softmax over comment words

``ast-attendgru`` runs a GRU over the SBT-AO sequence first and hands its
final state to the code/text GRU. ``attendgru`` has only the code/text
encoder (zero initial state); ``sbt`` is ``attendgru`` fed SBT tokens
through its own vocabulary.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from .. import nn
from ..nn import ParamSet, glorot_uniform, uniform

KINDS = ("attendgru", "ast-attendgru", "sbt")
TXT_VIEWS = ("code", "sbt", "sbtao")
AST_VIEWS = ("sbtao", "sbt")
_STR_FIELDS = ("kind", "txt_view", "ast_view")


@dataclass
class ModelConfig:
    kind: str = "ast-attendgru"
    txtlen: int = 100
    astlen: int = 100
    comlen: int = 13
    embdims: int = 100
    rnndims: int = 256
    txtvocabsize: int = 1000
    astvocabsize: int = 1000
    comvocabsize: int = 1000
    # token view in the txt slot; "sbtao" on attendgru is the challenge setting
    txt_view: str = ""
    # leaf rendering fed to the AST encoder of ast-attendgru
    ast_view: str = "sbtao"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}; expected one of {KINDS}")
        if not self.txt_view:
            self.txt_view = "sbt" if self.kind == "sbt" else "code"
        if self.txt_view not in TXT_VIEWS:
            raise ValueError(f"txt_view must be one of {TXT_VIEWS}, got {self.txt_view!r}")
        if self.ast_view not in AST_VIEWS:
            raise ValueError(f"ast_view must be one of {AST_VIEWS}, got {self.ast_view!r}")
        for f in fields(self):
            if f.name in _STR_FIELDS:
                continue
            if int(getattr(self, f.name)) <= 0:
                raise ValueError(f"{f.name} must be positive")
            setattr(self, f.name, int(getattr(self, f.name)))
        if self.comlen < 2:
            raise ValueError("comlen must be at least 2 (start token plus one word)")

    @property
    def uses_ast(self) -> bool:
        return self.kind == "ast-attendgru"

    @property
    def n_contexts(self) -> int:
        return 2 if self.uses_ast else 1

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> ModelConfig:
        unknown = set(d) - {f.name for f in fields(cls)}
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        return cls(**{k: (v if k in _STR_FIELDS else int(v)) for k, v in d.items()})


def param_shapes(config: ModelConfig) -> dict[str, tuple[int, ...]]:
    """Every parameter name and shape, in initialisation order."""
    e, h = config.embdims, config.rnndims
    shapes: dict[str, tuple[int, ...]] = {}

    def gru(prefix):
        shapes[f"{prefix}.kernel"] = (e, 3 * h)
        shapes[f"{prefix}.recurrent_kernel"] = (h, 3 * h)
        shapes[f"{prefix}.bias"] = (3 * h,)

    shapes["txt_embedding"] = (config.txtvocabsize, e)
    if config.uses_ast:
        shapes["ast_embedding"] = (config.astvocabsize, e)
    shapes["com_embedding"] = (config.comvocabsize, e)
    if config.uses_ast:
        gru("ast_gru")
    gru("txt_gru")
    gru("dec_gru")
    shapes["td_dense.kernel"] = ((config.n_contexts + 1) * h, h)
    shapes["td_dense.bias"] = (h,)
    shapes["out_dense.kernel"] = (config.comlen * h, config.comvocabsize)
    shapes["out_dense.bias"] = (config.comvocabsize,)
    return shapes


def init_params(config: ModelConfig, seed: int = 0, dtype=np.float32) -> ParamSet:
    """Seeded initialisation: uniform(+-0.05) embeddings, Glorot-uniform kernels, zero biases."""
    rng = np.random.default_rng(seed)
    params = ParamSet()
    for name, shape in param_shapes(config).items():
        if name.endswith("embedding"):
            value = uniform(rng, shape, 0.05, dtype)
        elif name.endswith("bias"):
            value = np.zeros(shape, dtype=dtype)
        else:
            value = glorot_uniform(rng, shape, dtype)
        params.add(name, value)
    return params


class Seq2SeqModel:
    """One model instance: a config plus its parameters, with forward and backward passes.

    Inputs are dicts of framed index arrays: ``txt[b, txtlen]``, ``com[b, comlen]``
    and, for ``ast-attendgru``, ``ast[b, astlen]``. For ``sbt`` the ``txt`` slot
    carries the SBT sequence.
    """

    def __init__(self, config: ModelConfig, params: ParamSet | None = None, seed: int = 0):
        self.config = config
        self.params = params if params is not None else init_params(config, seed)
        expected = param_shapes(config)
        if list(self.params.names()) != list(expected):
            raise ValueError(
                f"parameter names {self.params.names()} do not match {config.kind} layout {list(expected)}"
            )
        for name, shape in expected.items():
            if self.params[name].shape != shape:
                raise ValueError(f"{name}: shape {self.params[name].shape} != expected {shape}")

    @property
    def dtype(self):
        return self.params["txt_embedding"].dtype

    def _check_inputs(self, inputs: dict[str, np.ndarray], need_com: bool = True) -> int:
        c = self.config
        need = {"txt": c.txtlen}
        if need_com:
            need["com"] = c.comlen
        if c.uses_ast:
            need["ast"] = c.astlen
        batch = None
        for key, length in need.items():
            if key not in inputs:
                raise KeyError(f"missing input {key!r} for {c.kind}")
            arr = inputs[key]
            if arr.ndim != 2 or arr.shape[1] != length:
                raise ValueError(f"input {key!r} must have shape (batch, {length}), got {arr.shape}")
            if batch is None:
                batch = arr.shape[0]
            elif arr.shape[0] != batch:
                raise ValueError("inputs disagree on batch size")
        return batch

    def encode(self, inputs: dict[str, np.ndarray], trace: dict | None = None) -> dict:
        """Run the encoder GRUs; the result feeds :meth:`decode` for any comment prefix."""
        p = self.params.values
        c = self.config
        batch = self._check_inputs(inputs, need_com=False)
        enc: dict = {"inputs": inputs, "encoders": []}

        def rec(name, arr):
            if trace is not None:
                trace[name] = arr.shape

        h0 = np.zeros((batch, c.rnndims), dtype=self.dtype)
        if c.uses_ast:
            se = nn.embedding_forward(inputs["ast"], p["ast_embedding"])
            rec("ast_embedded", se)
            astout, h0, enc["ast_gru"] = nn.gru_forward(
                se, h0, p["ast_gru.kernel"], p["ast_gru.recurrent_kernel"], p["ast_gru.bias"]
            )
            rec("astout", astout)
        ee = nn.embedding_forward(inputs["txt"], p["txt_embedding"])
        rec("txt_embedded", ee)
        txtout, st, enc["txt_gru"] = nn.gru_forward(
            ee, h0, p["txt_gru.kernel"], p["txt_gru.recurrent_kernel"], p["txt_gru.bias"]
        )
        rec("txtout", txtout)
        enc["encoders"].append(("txt", txtout))
        if c.uses_ast:
            enc["encoders"].append(("ast", astout))
        enc["state"] = st
        return enc

    def decode(self, enc: dict, com: np.ndarray, trace: dict | None = None):
        """Decoder, attention and output head for comment prefixes ``com[b, comlen]``.

        Returns ``(probs, attention, cache)``.
        """
        p = self.params.values
        c = self.config
        if com.ndim != 2 or com.shape[1] != c.comlen or com.shape[0] != enc["state"].shape[0]:
            raise ValueError(f"comment prefix must have shape (batch, {c.comlen}), got {com.shape}")

        def rec(name, arr):
            if trace is not None:
                trace[name] = arr.shape

        cache: dict = {"enc": enc, "com": com}
        de = nn.embedding_forward(com, p["com_embedding"])
        rec("com_embedded", de)
        decout, _, cache["dec_gru"] = nn.gru_forward(
            de, enc["state"], p["dec_gru.kernel"], p["dec_gru.recurrent_kernel"], p["dec_gru.bias"]
        )
        rec("decout", decout)
        attention, contexts = {}, []
        for name, out in enc["encoders"]:
            attn = nn.softmax_forward(nn.batched_dot_forward(decout, out, (2, 2)))
            ctx = nn.batched_dot_forward(attn, out, (2, 1))
            rec(f"{name}_attn", attn)
            rec(f"{name}_context", ctx)
            attention[name] = attn
            contexts.append(ctx)
        context = nn.concatenate_forward(contexts + [decout])
        rec("context", context)
        td = nn.relu_forward(nn.time_distributed_dense_forward(context, p["td_dense.kernel"], p["td_dense.bias"]))
        rec("td_dense", td)
        flat = nn.flatten_forward(td)
        rec("flatten", flat)
        logits = nn.dense_forward(flat, p["out_dense.kernel"], p["out_dense.bias"])
        probs = nn.softmax_forward(logits)
        rec("probs", probs)
        cache.update(decout=decout, attention=attention, context=context, td=td, flat=flat, logits=logits)
        return probs, attention, cache

    def forward(self, inputs: dict[str, np.ndarray], trace: dict | None = None):
        """Returns ``(probs[b, comvocabsize], attention, cache)``.

        ``attention`` maps ``"txt"`` (and ``"ast"``) to ``[b, comlen, len]``
        matrices. When ``trace`` is a dict it is filled with intermediate shapes.
        """
        self._check_inputs(inputs)
        return self.decode(self.encode(inputs, trace), inputs["com"], trace)

    # decoding interface shared with ensemble members
    def next_word_probs(self, enc: dict, prefix: np.ndarray) -> np.ndarray:
        return self.decode(enc, prefix)[0]

    def predict_proba(self, inputs: dict[str, np.ndarray]) -> np.ndarray:
        return self.forward(inputs)[0]

    def backward(self, cache: dict, dlogits: np.ndarray):
        """Accumulate parameter gradients given the gradient w.r.t. the output logits."""
        p = self.params.values
        c = self.config
        acc = self.params.accumulate
        units = c.rnndims

        dflat, dk, db = nn.dense_backward(dlogits, cache["flat"], p["out_dense.kernel"])
        acc("out_dense.kernel", dk)
        acc("out_dense.bias", db)
        dtd = nn.relu_backward(nn.flatten_backward(dflat, cache["td"].shape), cache["td"])
        dcontext, dk, db = nn.dense_backward(dtd, cache["context"], p["td_dense.kernel"])
        acc("td_dense.kernel", dk)
        acc("td_dense.bias", db)
        enc = cache["enc"]
        names = [name for name, _ in enc["encoders"]]
        outs = dict(enc["encoders"])
        parts = nn.concatenate_backward(dcontext, [units] * (len(names) + 1))
        ddecout = parts[-1].copy()
        denc = {}
        decout = cache["decout"]
        for name, dctx in zip(names, parts[:-1]):
            out = outs[name]
            attn = cache["attention"][name]
            dattn, denc_ctx = nn.batched_dot_backward(dctx, attn, out, (2, 1))
            dscores = nn.softmax_backward(dattn, attn)
            ddec_part, denc_score = nn.batched_dot_backward(dscores, decout, out, (2, 2))
            ddecout += ddec_part
            denc[name] = denc_ctx + denc_score

        inputs = enc["inputs"]
        dde, dst, dk, dr, db = nn.gru_backward(ddecout, None, cache["dec_gru"])
        self._acc_gru("dec_gru", dk, dr, db)
        acc("com_embedding", nn.embedding_backward(dde, cache["com"], c.comvocabsize))
        dee, dh0, dk, dr, db = nn.gru_backward(denc["txt"], dst, enc["txt_gru"])
        self._acc_gru("txt_gru", dk, dr, db)
        acc("txt_embedding", nn.embedding_backward(dee, inputs["txt"], c.txtvocabsize))
        if c.uses_ast:
            dse, _, dk, dr, db = nn.gru_backward(denc["ast"], dh0, enc["ast_gru"])
            self._acc_gru("ast_gru", dk, dr, db)
            acc("ast_embedding", nn.embedding_backward(dse, inputs["ast"], c.astvocabsize))

    def _acc_gru(self, prefix, dk, dr, db):
        self.params.accumulate(f"{prefix}.kernel", dk)
        self.params.accumulate(f"{prefix}.recurrent_kernel", dr)
        self.params.accumulate(f"{prefix}.bias", db)

    def loss_and_grad(self, inputs: dict[str, np.ndarray], targets: np.ndarray) -> float:
        """Mean cross-entropy on ``targets``; gradients are accumulated into ``params.grads``."""
        _, _, cache = self.forward(inputs)
        loss, dlogits = nn.softmax_cross_entropy(cache["logits"], targets)
        self.backward(cache, dlogits.astype(self.dtype, copy=False))
        return loss

    def astype(self, dtype) -> Seq2SeqModel:
        return Seq2SeqModel(self.config, self.params.astype(dtype))


def init_model(config: ModelConfig, seed: int = 0, dtype=np.float32) -> Seq2SeqModel:
    return Seq2SeqModel(config, init_params(config, seed, dtype))


def forward_ast_attendgru(txt_idx, ast_idx, com_idx, model: Seq2SeqModel):
    """``(probs, txt_attn, ast_attn)`` for an ``ast-attendgru`` model."""
    if model.config.kind != "ast-attendgru":
        raise ValueError(f"expected an ast-attendgru model, got {model.config.kind}")
    probs, attn, _ = model.forward({"txt": txt_idx, "ast": ast_idx, "com": com_idx})
    return probs, attn["txt"], attn["ast"]


def forward_attendgru(txt_idx, com_idx, model: Seq2SeqModel):
    """``(probs, txt_attn)`` for an ``attendgru`` model."""
    if model.config.kind != "attendgru":
        raise ValueError(f"expected an attendgru model, got {model.config.kind}")
    probs, attn, _ = model.forward({"txt": txt_idx, "com": com_idx})
    return probs, attn["txt"]


def forward_sbt(sbt_idx, com_idx, model: Seq2SeqModel):
    """``probs`` for an ``sbt`` model (SBT tokens in the single encoder slot)."""
    if model.config.kind != "sbt":
        raise ValueError(f"expected an sbt model, got {model.config.kind}")
    probs, _, _ = model.forward({"txt": sbt_idx, "com": com_idx})
    return probs
