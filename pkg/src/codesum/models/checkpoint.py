"""Binary checkpoint format.

Layout (all integers u32 little-endian)::

    b"CSUMCKPT" | version | config length | config (UTF-8 "key=value" lines)
    then per tensor: name length | name | rank | dims... | float32 LE values

Tensors run to end of file in parameter order.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .._io import atomic_open
from ..nn import ParamSet
from .network import ModelConfig, Seq2SeqModel, param_shapes

MAGIC = b"CSUMCKPT"
VERSION = 1


class CheckpointError(ValueError):
    pass


def _u32(n: int) -> bytes:
    return struct.pack("<I", n)


def encode_checkpoint(model: Seq2SeqModel) -> bytes:
    cfg = "".join(f"{k}={v}\n" for k, v in sorted(model.config.to_dict().items())).encode("utf-8")
    chunks = [MAGIC, _u32(VERSION), _u32(len(cfg)), cfg]
    for name, value in model.params.items():
        raw_name = name.encode("utf-8")
        chunks += [_u32(len(raw_name)), raw_name, _u32(value.ndim)]
        chunks += [_u32(d) for d in value.shape]
        chunks.append(np.ascontiguousarray(value, dtype="<f4").tobytes())
    return b"".join(chunks)


def save_checkpoint(model: Seq2SeqModel, path: str | Path):
    with atomic_open(path, "wb") as fh:
        fh.write(encode_checkpoint(model))


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CheckpointError("truncated checkpoint")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    @property
    def done(self) -> bool:
        return self.pos == len(self.data)


def decode_checkpoint(data: bytes) -> Seq2SeqModel:
    r = _Reader(data)
    if r.take(len(MAGIC)) != MAGIC:
        raise CheckpointError("not a checkpoint (bad magic)")
    version = r.u32()
    if version != VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")
    cfg_text = r.take(r.u32()).decode("utf-8")
    cfg = {}
    for line in cfg_text.splitlines():
        key, _, value = line.partition("=")
        cfg[key] = value
    config = ModelConfig.from_dict(cfg)
    expected = param_shapes(config)
    params = ParamSet()
    while not r.done:
        name = r.take(r.u32()).decode("utf-8")
        rank = r.u32()
        shape = tuple(r.u32() for _ in range(rank))
        if name not in expected:
            raise CheckpointError(f"unexpected tensor {name!r} for {config.kind}")
        if shape != expected[name]:
            raise CheckpointError(f"shape mismatch for {name!r}: {shape} != {expected[name]}")
        count = int(np.prod(shape, dtype=np.int64))
        values = np.frombuffer(r.take(4 * count), dtype="<f4").reshape(shape)
        params.add(name, values.astype(np.float32))
    missing = set(expected) - set(params.names())
    if missing:
        raise CheckpointError(f"checkpoint is missing tensors {sorted(missing)}")
    ordered = ParamSet()
    for name in expected:
        ordered.add(name, params[name])
    return Seq2SeqModel(config, ordered)


def load_checkpoint(path: str | Path) -> Seq2SeqModel:
    return decode_checkpoint(Path(path).read_bytes())
