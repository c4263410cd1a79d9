"""Pre-norm transformer encoder with a tied-weight MLM head, forward and backward in numpy."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import ModelConfig

_NEG = -1e30
_GELU_C = math.sqrt(2.0 / math.pi)
LN_EPS = 1e-12


class ShapeError(ValueError):
    pass


def param_shapes(config: ModelConfig) -> dict[str, tuple[int, ...]]:
    """Name -> shape for every weight tensor, in canonical order."""
    H, F, V, L = config.hidden_dim, config.ff_dim, config.vocab_size, config.max_len
    shapes: dict[str, tuple[int, ...]] = {
        "embeddings.token": (V, H),
        "embeddings.position": (L, H),
    }
    for i in range(config.num_layers):
        p = f"layers.{i}."
        shapes.update(
            {
                p + "ln1.gamma": (H,),
                p + "ln1.beta": (H,),
                p + "attn.q.weight": (H, H),
                p + "attn.q.bias": (H,),
                p + "attn.k.weight": (H, H),
                p + "attn.k.bias": (H,),
                p + "attn.v.weight": (H, H),
                p + "attn.v.bias": (H,),
                p + "attn.out.weight": (H, H),
                p + "attn.out.bias": (H,),
                p + "ln2.gamma": (H,),
                p + "ln2.beta": (H,),
                p + "ff.in.weight": (H, F),
                p + "ff.in.bias": (F,),
                p + "ff.out.weight": (F, H),
                p + "ff.out.bias": (H,),
            }
        )
    shapes.update(
        {
            "final_ln.gamma": (H,),
            "final_ln.beta": (H,),
            "mlm.transform.weight": (H, H),
            "mlm.transform.bias": (H,),
            "mlm.ln.gamma": (H,),
            "mlm.ln.beta": (H,),
            "mlm.decoder.bias": (V,),
        }
    )
    return shapes


def init_weights(config: ModelConfig, seed: int, dtype=np.float32, std: float = 0.02) -> dict[str, np.ndarray]:
    rng = np.random.default_rng(seed)
    weights = {}
    for name, shape in param_shapes(config).items():
        if name.endswith(".gamma"):
            w = np.ones(shape)
        elif name.endswith((".beta", ".bias")):
            w = np.zeros(shape)
        else:
            w = rng.normal(0.0, std, size=shape)
        weights[name] = w.astype(dtype)
    return weights


# -- primitives ----------------------------------------------------------------

def gelu(x):
    return 0.5 * x * (1.0 + np.tanh(_GELU_C * (x + 0.044715 * (x * x * x))))


def gelu_grad(x):
    x2 = x * x
    t = np.tanh(_GELU_C * (x + 0.044715 * (x2 * x)))
    return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * _GELU_C * (1.0 + 3 * 0.044715 * x2)


def linear(x, w, b):
    """``x @ w + b`` over the last axis as one 2-D GEMM."""
    lead = x.shape[:-1]
    return (x.reshape(-1, x.shape[-1]) @ w + b).reshape(*lead, w.shape[1])


def _outer_sum(x, dy):
    """Sum over all leading axes of ``x[..., i] * dy[..., j]``."""
    return x.reshape(-1, x.shape[-1]).T @ dy.reshape(-1, dy.shape[-1])


def layer_norm(x, gamma, beta):
    mu = x.mean(-1, keepdims=True)
    xc = x - mu
    rstd = 1.0 / np.sqrt((xc * xc).mean(-1, keepdims=True) + LN_EPS)
    xhat = xc * rstd
    return xhat * gamma + beta, (xhat, rstd)


def layer_norm_backward(dy, cache, gamma):
    xhat, rstd = cache
    axes = tuple(range(dy.ndim - 1))
    dgamma = (dy * xhat).sum(axes)
    dbeta = dy.sum(axes)
    dxhat = dy * gamma
    dx = rstd * (
        dxhat - dxhat.mean(-1, keepdims=True) - xhat * (dxhat * xhat).mean(-1, keepdims=True)
    )
    return dx, dgamma, dbeta


def softmax(x, axis=-1):
    z = x - x.max(axis, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis, keepdims=True)


def log_softmax(x, axis=-1):
    z = x - x.max(axis, keepdims=True)
    return z - np.log(np.exp(z).sum(axis, keepdims=True))


def _dropout_mask(rng, shape, rate, dtype):
    if rng is None or rate <= 0.0:
        return None
    keep = 1.0 - rate
    return (rng.random(shape) < keep).astype(dtype) / dtype.type(keep)


# -- forward -------------------------------------------------------------------

@dataclass
class ForwardOutput:
    hidden: np.ndarray  # [B, T, H] final-layer states after the last layer norm
    logits: Optional[np.ndarray]  # [B, T, V]
    attentions: list[np.ndarray]  # per layer [B, heads, T, T]


def _check_inputs(config: ModelConfig, ids: np.ndarray, mask: np.ndarray):
    ids = np.asarray(ids)
    mask = np.asarray(mask)
    if ids.ndim == 1:
        ids, mask = ids[None], mask[None]
    if ids.ndim != 2 or ids.shape != mask.shape:
        raise ShapeError(f"ids {ids.shape} and mask {mask.shape} must be matching [batch, seq] arrays")
    if ids.shape[1] > config.max_len:
        raise ShapeError(f"sequence length {ids.shape[1]} exceeds max_len {config.max_len}")
    if ids.size and (ids.min() < 0 or ids.max() >= config.vocab_size):
        raise ShapeError(f"token ids must lie in [0, {config.vocab_size})")
    return ids.astype(np.int64), mask.astype(bool)


def _encode(config, W, ids, mask, rng=None, keep_cache=False):
    B, T = ids.shape
    H, nh, dh = config.hidden_dim, config.num_heads, config.head_dim
    dtype = W["embeddings.token"].dtype
    scale = dtype.type(1.0 / math.sqrt(dh))
    key_bias = np.where(mask[:, None, None, :], dtype.type(0.0), dtype.type(_NEG))

    x = W["embeddings.token"][ids] + W["embeddings.position"][:T]
    drop = _dropout_mask(rng, x.shape, config.dropout, dtype)
    cache = {"ids": ids, "drop0": drop} if keep_cache else None
    if drop is not None:
        x = x * drop
    attentions = []

    def heads(t):
        return t.reshape(B, T, nh, dh).transpose(0, 2, 1, 3)

    for i in range(config.num_layers):
        p = f"layers.{i}."
        h, ln1 = layer_norm(x, W[p + "ln1.gamma"], W[p + "ln1.beta"])
        q = heads(linear(h, W[p + "attn.q.weight"], W[p + "attn.q.bias"]))
        k = heads(linear(h, W[p + "attn.k.weight"], W[p + "attn.k.bias"]))
        v = heads(linear(h, W[p + "attn.v.weight"], W[p + "attn.v.bias"]))
        probs = softmax(q @ k.transpose(0, 1, 3, 2) * scale + key_bias)
        attentions.append(probs)
        ctx = (probs @ v).transpose(0, 2, 1, 3).reshape(B, T, H)
        a = linear(ctx, W[p + "attn.out.weight"], W[p + "attn.out.bias"])
        drop_a = _dropout_mask(rng, a.shape, config.dropout, dtype)
        if drop_a is not None:
            a = a * drop_a
        x = x + a

        h2, ln2 = layer_norm(x, W[p + "ln2.gamma"], W[p + "ln2.beta"])
        u = linear(h2, W[p + "ff.in.weight"], W[p + "ff.in.bias"])
        g = gelu(u)
        f = linear(g, W[p + "ff.out.weight"], W[p + "ff.out.bias"])
        drop_f = _dropout_mask(rng, f.shape, config.dropout, dtype)
        if drop_f is not None:
            f = f * drop_f
        x = x + f
        if keep_cache:
            cache[i] = dict(
                ln1=ln1, h=h, q=q, k=k, v=v, probs=probs, ctx=ctx, drop_a=drop_a,
                ln2=ln2, h2=h2, u=u, g=g, drop_f=drop_f,
            )

    hidden, lnf = layer_norm(x, W["final_ln.gamma"], W["final_ln.beta"])
    if keep_cache:
        cache["lnf"] = lnf
        cache["scale"] = scale
    return hidden, attentions, cache


def _head(W, hidden_rows):
    z = hidden_rows @ W["mlm.transform.weight"] + W["mlm.transform.bias"]
    gz = gelu(z)
    n, ln = layer_norm(gz, W["mlm.ln.gamma"], W["mlm.ln.beta"])
    logits = n @ W["embeddings.token"].T + W["mlm.decoder.bias"]
    return logits, (hidden_rows, z, n, ln)


def forward(config: ModelConfig, weights, ids, mask, *, with_logits: bool = True) -> ForwardOutput:
    """Inference pass (no dropout): final hidden states, MLM logits and attention maps."""
    ids, mask = _check_inputs(config, ids, mask)
    hidden, attentions, _ = _encode(config, weights, ids, mask)
    logits = _head(weights, hidden)[0] if with_logits else None
    return ForwardOutput(hidden, logits, attentions)


def masked_cross_entropy(logits: np.ndarray, labels: np.ndarray) -> float:
    """Mean negative log-likelihood of ``labels`` under row-wise softmax of ``logits``."""
    if len(labels) == 0:
        return 0.0
    logp = log_softmax(logits)
    return float(-logp[np.arange(len(labels)), labels].mean())


def mlm_loss(config, weights, ids, mask, positions, labels) -> float:
    ids, mask = _check_inputs(config, ids, mask)
    labels = np.asarray(labels, dtype=np.int64)
    if len(labels) == 0:
        return 0.0
    hidden, _, _ = _encode(config, weights, ids, mask)
    logits, _ = _head(weights, hidden[positions[0], positions[1]])
    return masked_cross_entropy(logits, labels)


# -- backward ------------------------------------------------------------------

def mlm_loss_and_grads(config, weights, ids, mask, positions, labels, rng=None):
    """Mean cross-entropy over label positions and its gradient for every weight.

    ``positions`` is a pair of index arrays (batch rows, sequence columns).
    Dropout is active iff ``rng`` is given.
    """
    ids, mask = _check_inputs(config, ids, mask)
    labels = np.asarray(labels, dtype=np.int64)
    W = weights
    grads = {name: np.zeros_like(w) for name, w in W.items()}
    if len(labels) == 0:
        return 0.0, grads

    B, T = ids.shape
    H, nh, dh = config.hidden_dim, config.num_heads, config.head_dim
    hidden, _, cache = _encode(config, W, ids, mask, rng=rng, keep_cache=True)
    rows, cols = np.asarray(positions[0]), np.asarray(positions[1])
    logits, (hsel, z, n, ln_head) = _head(W, hidden[rows, cols])

    N = len(labels)
    logp = log_softmax(logits)
    loss = float(-logp[np.arange(N), labels].mean())

    # head
    dlogits = np.exp(logp)
    dlogits[np.arange(N), labels] -= 1.0
    dlogits /= N
    grads["mlm.decoder.bias"] += dlogits.sum(0)
    grads["embeddings.token"] += dlogits.T @ n
    dn = dlogits @ W["embeddings.token"]
    dgz, grads["mlm.ln.gamma"], grads["mlm.ln.beta"] = layer_norm_backward(dn, ln_head, W["mlm.ln.gamma"])
    dz = dgz * gelu_grad(z)
    grads["mlm.transform.weight"] += hsel.T @ dz
    grads["mlm.transform.bias"] += dz.sum(0)
    dhsel = dz @ W["mlm.transform.weight"].T

    dhidden = np.zeros_like(hidden)
    np.add.at(dhidden, (rows, cols), dhsel)
    dx, grads["final_ln.gamma"], grads["final_ln.beta"] = layer_norm_backward(
        dhidden, cache["lnf"], W["final_ln.gamma"]
    )

    def merge(t):
        return t.transpose(0, 2, 1, 3).reshape(B, T, H)

    scale = cache["scale"]
    for i in reversed(range(config.num_layers)):
        p = f"layers.{i}."
        c = cache[i]
        # feed-forward block
        df = dx if c["drop_f"] is None else dx * c["drop_f"]
        grads[p + "ff.out.weight"] += _outer_sum(c["g"], df)
        grads[p + "ff.out.bias"] += df.sum((0, 1))
        du = linear(df, W[p + "ff.out.weight"].T, 0.0) * gelu_grad(c["u"])
        grads[p + "ff.in.weight"] += _outer_sum(c["h2"], du)
        grads[p + "ff.in.bias"] += du.sum((0, 1))
        dh2 = linear(du, W[p + "ff.in.weight"].T, 0.0)
        dln, grads[p + "ln2.gamma"], grads[p + "ln2.beta"] = layer_norm_backward(dh2, c["ln2"], W[p + "ln2.gamma"])
        dx = dx + dln

        # attention block
        da = dx if c["drop_a"] is None else dx * c["drop_a"]
        grads[p + "attn.out.weight"] += _outer_sum(c["ctx"], da)
        grads[p + "attn.out.bias"] += da.sum((0, 1))
        dctx = linear(da, W[p + "attn.out.weight"].T, 0.0).reshape(B, T, nh, dh).transpose(0, 2, 1, 3)
        probs, q, k, v = c["probs"], c["q"], c["k"], c["v"]
        dprobs = dctx @ v.transpose(0, 1, 3, 2)
        dv = probs.transpose(0, 1, 3, 2) @ dctx
        dscores = probs * (dprobs - (dprobs * probs).sum(-1, keepdims=True)) * scale
        dq = dscores @ k
        dk = dscores.transpose(0, 1, 3, 2) @ q
        dnorm = np.zeros_like(dx)
        h = c["h"]
        for name, dproj in (("q", dq), ("k", dk), ("v", dv)):
            dproj = merge(dproj)
            grads[p + f"attn.{name}.weight"] += _outer_sum(h, dproj)
            grads[p + f"attn.{name}.bias"] += dproj.sum((0, 1))
            dnorm += linear(dproj, W[p + f"attn.{name}.weight"].T, 0.0)
        dln, grads[p + "ln1.gamma"], grads[p + "ln1.beta"] = layer_norm_backward(dnorm, c["ln1"], W[p + "ln1.gamma"])
        dx = dx + dln

    if cache["drop0"] is not None:
        dx = dx * cache["drop0"]
    np.add.at(grads["embeddings.token"], ids, dx)
    grads["embeddings.position"][:T] += dx.sum(0)
    return loss, grads
