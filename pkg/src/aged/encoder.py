"""A compact transformer encoder with hand-written forward and backward passes.

Pre-normalization blocks, learned absolute position embeddings, learned
two-way segment embeddings (sentence vs. definition), GELU feed-forward.
Full bidirectional self-attention runs over the whole assembled pair, so
sentence tokens and definition slots contextualize each other. Gradients
are exact reverse-mode and are validated against central finite differences
in the test suite.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .encoding import EncodedPair

LN_EPS = 1e-5
_GELU_C = math.sqrt(2.0 / math.pi)
_GELU_A = 0.044715

DTYPES = {"f32": np.float32, "f64": np.float64}

ParameterSet = dict[str, np.ndarray]
ParameterGradients = dict[str, np.ndarray]


@dataclass
class EncoderConfig:
    vocab_size: int
    d_model: int = 32
    n_layers: int = 2
    n_heads: int = 4
    d_ff: int = 0  # 0 means 4 * d_model
    max_len: int = 256
    seed: int = 0
    dtype: str = "f32"
    dropout: float = 0.0

    def __post_init__(self):
        if self.d_ff == 0:
            self.d_ff = 4 * self.d_model
        for name in ("vocab_size", "d_model", "n_layers", "n_heads", "d_ff", "max_len"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.d_model % self.n_heads != 0:
            raise ValueError(
                f"d_model ({self.d_model}) must be divisible by n_heads ({self.n_heads})"
            )
        if self.dtype not in DTYPES:
            raise ValueError(f"dtype must be one of {sorted(DTYPES)}")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")

    @property
    def np_dtype(self):
        return DTYPES[self.dtype]

    def to_json(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_json(doc: dict) -> "EncoderConfig":
        return EncoderConfig(**doc)


@dataclass
class ContextualEncoding:
    """Per-position representations for one assembled pair, shape (len, d_model)."""

    reps: np.ndarray


def _glorot(rng: np.random.Generator, fan_in: int, fan_out: int, dtype) -> np.ndarray:
    limit = math.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out)).astype(dtype)


def init_parameters(config: EncoderConfig) -> ParameterSet:
    """Allocate all tensors, deterministically in the config seed.

    Weight matrices are Glorot-uniform, embeddings uniform in +-1/sqrt(d),
    normalization gains 1 and all biases 0. The pointer matrices live here
    too so one parameter set covers the whole trainable model.
    """
    rng = np.random.default_rng(config.seed)
    dt = config.np_dtype
    d, ff = config.d_model, config.d_ff
    scale = 1.0 / math.sqrt(d)
    params: ParameterSet = {}
    params["tok_emb"] = rng.uniform(-scale, scale, (config.vocab_size, d)).astype(dt)
    params["pos_emb"] = rng.uniform(-scale, scale, (config.max_len, d)).astype(dt)
    params["seg_emb"] = rng.uniform(-scale, scale, (2, d)).astype(dt)
    for i in range(config.n_layers):
        p = f"layer{i}."
        params[p + "ln1.gain"] = np.ones(d, dt)
        params[p + "ln1.bias"] = np.zeros(d, dt)
        for nm in ("w_q", "w_k", "w_v", "w_o"):
            params[p + "attn." + nm] = _glorot(rng, d, d, dt)
        # no key bias: it shifts every score in a softmax row equally, so its
        # gradient is identically zero
        for nm in ("b_q", "b_v", "b_o"):
            params[p + "attn." + nm] = np.zeros(d, dt)
        params[p + "ln2.gain"] = np.ones(d, dt)
        params[p + "ln2.bias"] = np.zeros(d, dt)
        params[p + "ffn.w1"] = _glorot(rng, d, ff, dt)
        params[p + "ffn.b1"] = np.zeros(ff, dt)
        params[p + "ffn.w2"] = _glorot(rng, ff, d, dt)
        params[p + "ffn.b2"] = np.zeros(d, dt)
    params["final_ln.gain"] = np.ones(d, dt)
    params["final_ln.bias"] = np.zeros(d, dt)
    params["pointer.w_start"] = _glorot(rng, d, d, dt)
    params["pointer.w_end"] = _glorot(rng, d, d, dt)
    return params


def _layer_norm(x, gain, bias):
    mu = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    inv = 1.0 / np.sqrt(var + LN_EPS)
    xhat = (x - mu) * inv
    return xhat * gain + bias, (xhat, inv)


def _layer_norm_backward(dy, cache, gain):
    xhat, inv = cache
    dgain = (dy * xhat).sum(axis=0)
    dbias = dy.sum(axis=0)
    dxhat = dy * gain
    m1 = dxhat.mean(axis=-1, keepdims=True)
    m2 = (dxhat * xhat).mean(axis=-1, keepdims=True)
    dx = inv * (dxhat - m1 - xhat * m2)
    return dx, dgain, dbias


def _gelu(x):
    t = np.tanh(_GELU_C * (x + _GELU_A * x**3))
    return 0.5 * x * (1.0 + t), t


def _gelu_backward(dy, x, t):
    du = _GELU_C * (1.0 + 3.0 * _GELU_A * x**2)
    return dy * (0.5 * (1.0 + t) + 0.5 * x * (1.0 - t**2) * du)


def _softmax(x):
    z = x - x.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def _split_heads(x: np.ndarray, n_heads: int) -> np.ndarray:
    length, d = x.shape
    return x.reshape(length, n_heads, d // n_heads).transpose(1, 0, 2)


def _merge_heads(x: np.ndarray) -> np.ndarray:
    n_heads, length, dh = x.shape
    return x.transpose(1, 0, 2).reshape(length, n_heads * dh)


def forward_cached(
    params: ParameterSet,
    config: EncoderConfig,
    pair: EncodedPair,
    rng: np.random.Generator | None = None,
) -> tuple[ContextualEncoding, dict]:
    """Forward pass keeping every intermediate needed by the backward pass.

    Dropout is applied only when `rng` is given (training mode) and
    config.dropout > 0; prediction always runs deterministically.
    """
    ids = np.asarray(pair.ids)
    length = len(ids)
    if length > config.max_len:
        raise ValueError(f"input length {length} exceeds max_len {config.max_len}")
    if ids.max() >= config.vocab_size:
        raise ValueError(f"token id {int(ids.max())} out of range for vocab_size {config.vocab_size}")
    segments = np.asarray(pair.segment)
    p_drop = config.dropout if rng is not None else 0.0

    x = params["tok_emb"][ids] + params["pos_emb"][:length] + params["seg_emb"][segments]
    cache: dict = {"ids": ids, "segments": segments, "length": length, "layers": [], "p_drop": p_drop}
    dh = config.d_model // config.n_heads
    inv_sqrt_dh = 1.0 / math.sqrt(dh)

    for i in range(config.n_layers):
        p = f"layer{i}."
        lc: dict = {"x_in": x}
        a, lc["ln1"] = _layer_norm(x, params[p + "ln1.gain"], params[p + "ln1.bias"])
        q = a @ params[p + "attn.w_q"] + params[p + "attn.b_q"]
        k = a @ params[p + "attn.w_k"]
        v = a @ params[p + "attn.w_v"] + params[p + "attn.b_v"]
        qh, kh, vh = (_split_heads(m, config.n_heads) for m in (q, k, v))
        scores = qh @ kh.transpose(0, 2, 1) * inv_sqrt_dh
        probs = _softmax(scores)
        ctx = _merge_heads(probs @ vh)
        o = ctx @ params[p + "attn.w_o"] + params[p + "attn.b_o"]
        if p_drop > 0.0:
            lc["mask_o"] = ((rng.random(o.shape) >= p_drop) / (1.0 - p_drop)).astype(o.dtype)
            o = o * lc["mask_o"]
        x1 = x + o
        a2, lc["ln2"] = _layer_norm(x1, params[p + "ln2.gain"], params[p + "ln2.bias"])
        h1 = a2 @ params[p + "ffn.w1"] + params[p + "ffn.b1"]
        g, t = _gelu(h1)
        f = g @ params[p + "ffn.w2"] + params[p + "ffn.b2"]
        if p_drop > 0.0:
            lc["mask_f"] = ((rng.random(f.shape) >= p_drop) / (1.0 - p_drop)).astype(f.dtype)
            f = f * lc["mask_f"]
        lc.update(a=a, qh=qh, kh=kh, vh=vh, probs=probs, ctx=ctx, x1=x1, a2=a2, h1=h1, t=t, g=g)
        cache["layers"].append(lc)
        x = x1 + f

    reps, cache["final_ln"] = _layer_norm(x, params["final_ln.gain"], params["final_ln.bias"])
    return ContextualEncoding(reps), cache


def forward(params: ParameterSet, config: EncoderConfig, pair: EncodedPair) -> ContextualEncoding:
    """Contextual representations for every assembled position."""
    encoding, _ = forward_cached(params, config, pair)
    return encoding


def backward_from_cache(
    params: ParameterSet,
    config: EncoderConfig,
    cache: dict,
    d_reps: np.ndarray,
) -> ParameterGradients:
    """Exact gradients of every parameter given d(loss)/d(reps)."""
    grads: ParameterGradients = {k: np.zeros_like(v) for k, v in params.items()}
    dh = config.d_model // config.n_heads
    inv_sqrt_dh = 1.0 / math.sqrt(dh)

    dx, grads["final_ln.gain"], grads["final_ln.bias"] = _layer_norm_backward(
        d_reps, cache["final_ln"], params["final_ln.gain"]
    )

    for i in reversed(range(config.n_layers)):
        p = f"layer{i}."
        lc = cache["layers"][i]
        # x_out = x1 + f, f = gelu(a2 @ w1 + b1) @ w2 + b2, a2 = LN2(x1)
        df = dx
        if cache["p_drop"] > 0.0:
            df = df * lc["mask_f"]
        grads[p + "ffn.w2"] = lc["g"].T @ df
        grads[p + "ffn.b2"] = df.sum(axis=0)
        dg = df @ params[p + "ffn.w2"].T
        dh1 = _gelu_backward(dg, lc["h1"], lc["t"])
        grads[p + "ffn.w1"] = lc["a2"].T @ dh1
        grads[p + "ffn.b1"] = dh1.sum(axis=0)
        da2 = dh1 @ params[p + "ffn.w1"].T
        dx1_ln, grads[p + "ln2.gain"], grads[p + "ln2.bias"] = _layer_norm_backward(
            da2, lc["ln2"], params[p + "ln2.gain"]
        )
        dx1 = dx + dx1_ln
        # x1 = x_in + o, o = merge(softmax(qk/sqrt) v) @ w_o + b_o
        do = dx1
        if cache["p_drop"] > 0.0:
            do = do * lc["mask_o"]
        grads[p + "attn.w_o"] = lc["ctx"].T @ do
        grads[p + "attn.b_o"] = do.sum(axis=0)
        dctx = _split_heads(do @ params[p + "attn.w_o"].T, config.n_heads)
        dprobs = dctx @ lc["vh"].transpose(0, 2, 1)
        dvh = lc["probs"].transpose(0, 2, 1) @ dctx
        dscores = lc["probs"] * (dprobs - (dprobs * lc["probs"]).sum(axis=-1, keepdims=True))
        dqh = dscores @ lc["kh"] * inv_sqrt_dh
        dkh = dscores.transpose(0, 2, 1) @ lc["qh"] * inv_sqrt_dh
        dq, dk, dv = _merge_heads(dqh), _merge_heads(dkh), _merge_heads(dvh)
        a = lc["a"]
        grads[p + "attn.w_q"] = a.T @ dq
        grads[p + "attn.b_q"] = dq.sum(axis=0)
        grads[p + "attn.w_k"] = a.T @ dk
        grads[p + "attn.w_v"] = a.T @ dv
        grads[p + "attn.b_v"] = dv.sum(axis=0)
        da = (
            dq @ params[p + "attn.w_q"].T
            + dk @ params[p + "attn.w_k"].T
            + dv @ params[p + "attn.w_v"].T
        )
        dx_ln, grads[p + "ln1.gain"], grads[p + "ln1.bias"] = _layer_norm_backward(
            da, lc["ln1"], params[p + "ln1.gain"]
        )
        dx = dx1 + dx_ln

    np.add.at(grads["tok_emb"], cache["ids"], dx)
    grads["pos_emb"][: cache["length"]] += dx
    np.add.at(grads["seg_emb"], cache["segments"], dx)
    return grads


def backward(
    params: ParameterSet,
    config: EncoderConfig,
    pair: EncodedPair,
    upstream_grads: np.ndarray,
) -> ParameterGradients:
    """Recompute the forward pass and backpropagate `upstream_grads` (d loss / d reps)."""
    encoding, cache = forward_cached(params, config, pair)
    if upstream_grads.shape != encoding.reps.shape:
        raise ValueError(
            f"upstream gradient shape {upstream_grads.shape} does not match "
            f"output shape {encoding.reps.shape}"
        )
    return backward_from_cache(params, config, cache, upstream_grads)


@dataclass
class Checkpoint:
    """Encoder plus pointer-head parameters and the config that shaped them."""

    config: EncoderConfig
    params: ParameterSet

    def copy(self) -> "Checkpoint":
        return Checkpoint(self.config, {k: v.copy() for k, v in self.params.items()})


def save_checkpoint(ckpt: Checkpoint, path: str | Path) -> None:
    """Single JSON document; float values round-trip bitwise."""
    doc = {
        "config": ckpt.config.to_json(),
        "params": {
            name: {"shape": list(t.shape), "data": [float(x) for x in t.ravel()]}
            for name, t in ckpt.params.items()
        },
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_checkpoint(path: str | Path) -> Checkpoint:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    config = EncoderConfig.from_json(doc["config"])
    params = {
        name: np.asarray(spec["data"], dtype=config.np_dtype).reshape(spec["shape"])
        for name, spec in doc["params"].items()
    }
    return Checkpoint(config, params)
