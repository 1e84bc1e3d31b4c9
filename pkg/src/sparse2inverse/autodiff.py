"""Minimal dense-tensor reverse-mode autodiff.

Only the operations the reconstruction networks and losses need are
implemented. A :class:`Tensor` wraps a numpy array; operations on
tensors record parent links and a backward closure, which together form
the tape. ``backward`` on a scalar tensor walks the tape in reverse
topological order and *accumulates* into ``grad`` (call
:func:`zero_grads` between steps).

A tape is single-threaded; tensors must not be shared across
concurrently running tapes.
"""

from __future__ import annotations

import itertools

import numpy as np

from .geometry import Geometry
from .projector import backproject_array, project_array

#: when True, every op asserts its result is finite (slow; for tests)
DEBUG_CHECK_FINITE = False

_node_ids = itertools.count()


class Tensor:
    """Array node on the autodiff tape."""

    __slots__ = ("data", "grad", "requires_grad", "node_id", "_parents", "_backward")

    def __init__(self, data, requires_grad: bool = False,
                 _parents=(), _backward=None):
        self.data = data if isinstance(data, np.ndarray) else np.asarray(
            data, dtype=np.float64)
        self.grad = None
        self.requires_grad = requires_grad
        self.node_id = next(_node_ids)
        self._parents = _parents
        self._backward = _backward
        if DEBUG_CHECK_FINITE and not np.all(np.isfinite(self.data)):
            raise FloatingPointError("non-finite tensor values")

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    def accumulate_grad(self, g: np.ndarray) -> None:
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
        self.grad += g

    # -- operator sugar ------------------------------------------------
    def __add__(self, other):
        return add(self, _as_tensor(other))

    def __radd__(self, other):
        return add(_as_tensor(other), self)

    def __sub__(self, other):
        return add(self, neg(_as_tensor(other)))

    def __rsub__(self, other):
        return add(_as_tensor(other), neg(self))

    def __mul__(self, other):
        return mul(self, _as_tensor(other))

    def __rmul__(self, other):
        return mul(_as_tensor(other), self)

    def __neg__(self):
        return neg(self)

    def __getitem__(self, index):
        return take(self, index)

    def sum(self):
        return tensor_sum(self)

    def mean(self):
        return tensor_mean(self)

    def __repr__(self):
        flag = ", grad" if self.requires_grad else ""
        return f"Tensor(shape={self.data.shape}{flag})"


def _as_tensor(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


def _make(data, parents, backward) -> Tensor:
    if any(p.requires_grad for p in parents):
        return Tensor(data, requires_grad=True, _parents=tuple(parents),
                      _backward=backward)
    return Tensor(data)


def _unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    """Sum ``grad`` down to ``shape`` (inverse of numpy broadcasting)."""
    extra = grad.ndim - len(shape)
    if extra:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad


# -- elementwise ops ---------------------------------------------------

def add(a: Tensor, b: Tensor) -> Tensor:
    def backward(grad):
        a.accumulate_grad(_unbroadcast(grad, a.shape))
        b.accumulate_grad(_unbroadcast(grad, b.shape))
    return _make(a.data + b.data, (a, b), backward)


def mul(a: Tensor, b: Tensor) -> Tensor:
    def backward(grad):
        a.accumulate_grad(_unbroadcast(grad * b.data, a.shape))
        b.accumulate_grad(_unbroadcast(grad * a.data, b.shape))
    return _make(a.data * b.data, (a, b), backward)


def neg(a: Tensor) -> Tensor:
    def backward(grad):
        a.accumulate_grad(-grad)
    return _make(-a.data, (a,), backward)


def leaky_relu(a: Tensor, negative_slope: float = 0.1) -> Tensor:
    positive = a.data > 0

    def backward(grad):
        a.accumulate_grad(grad * np.where(positive, 1.0, negative_slope))
    return _make(np.where(positive, a.data, negative_slope * a.data), (a,), backward)


def tensor_sum(a: Tensor) -> Tensor:
    def backward(grad):
        a.accumulate_grad(np.broadcast_to(grad, a.shape).copy())
    return _make(a.data.sum(), (a,), backward)


def tensor_mean(a: Tensor) -> Tensor:
    size = a.data.size

    def backward(grad):
        a.accumulate_grad(np.broadcast_to(grad / size, a.shape).copy())
    return _make(a.data.mean(), (a,), backward)


def take(a: Tensor, index) -> Tensor:
    def backward(grad):
        full = np.zeros_like(a.data)
        np.add.at(full, index, grad)
        a.accumulate_grad(full)
    return _make(a.data[index], (a,), backward)


# -- structured ops ----------------------------------------------------

def _pad_flat(x: np.ndarray, pad: int) -> np.ndarray:
    """Zero-pad spatially and flatten the padded plane: -> (B, C, Hp*Wp)."""
    b, c, h, w = x.shape
    if pad == 0:
        return x.reshape(b, c, h * w)
    padded = np.zeros((b, c, h + 2 * pad, w + 2 * pad), dtype=x.dtype)
    padded[:, :, pad:pad + h, pad:pad + w] = x
    return padded.reshape(b, c, -1)


def _conv_raw(x: np.ndarray, weight: np.ndarray, pad: int) -> np.ndarray:
    """Stride-1 same-size convolution via one GEMM per kernel tap.

    With zero padding, every tap's input positions form a *contiguous*
    run of the flattened padded plane (row-boundary "wrap" hits padding
    zeros only), so no patch matrix is ever materialized.
    """
    b, c, h, w = x.shape
    c_out, _, kh, kw = weight.shape
    wp = w + 2 * pad
    flat = _pad_flat(x, pad)
    length = flat.shape[2]
    out = np.zeros((b, c_out, length), dtype=x.dtype)
    for dy in range(kh):
        for dx in range(kw):
            off = dy * wp + dx
            span = length - off
            out[:, :, :span] += weight[:, :, dy, dx] @ flat[:, :, off:]
    out = out.reshape(b, c_out, h + 2 * pad, wp)
    return out[:, :, :h, :w].copy() if pad else out


def conv2d(x: Tensor, weight: Tensor, bias: Tensor | None = None) -> Tensor:
    """Stride-1 'same' convolution: x (B,Cin,H,W), weight (Cout,Cin,kh,kw).

    Kernel sides must be odd; zero padding of (k-1)/2 keeps the spatial
    size. All three gradients reduce to GEMMs on shifted views of the
    zero-padded planes.
    """
    c_out, c_in, kh, kw = weight.shape
    if kh % 2 == 0 or kw % 2 == 0:
        raise ValueError("conv2d expects odd kernel sides")
    if x.ndim != 4 or x.shape[1] != c_in:
        raise ValueError(
            f"input shape {x.shape} incompatible with weight {weight.shape}")
    pad = kh // 2
    out_data = _conv_raw(x.data, weight.data, pad)
    if bias is not None:
        out_data += bias.data[None, :, None, None]

    def backward(grad):
        b, _, h, w = x.shape
        wp = w + 2 * pad
        gy_flat = _pad_flat(grad, pad)  # grad embedded at valid positions
        length = gy_flat.shape[2]
        if weight.requires_grad:
            flat = _pad_flat(x.data, pad)
            gw = np.empty_like(weight.data)
            for dy in range(kh):
                for dx in range(kw):
                    off = dy * wp + dx
                    # (B,O,N) @ (B,N,C) summed over the batch
                    prod = np.matmul(gy_flat[:, :, :length - off],
                                     flat[:, :, off:].transpose(0, 2, 1))
                    gw[:, :, dy, dx] = prod.sum(axis=0)
            weight.accumulate_grad(gw)
        if bias is not None and bias.requires_grad:
            bias.accumulate_grad(grad.sum(axis=(0, 2, 3)))
        if x.requires_grad:
            gx = np.zeros((b, c_in, length), dtype=grad.dtype)
            for dy in range(kh):
                for dx in range(kw):
                    off = dy * wp + dx
                    gx[:, :, off:] += weight.data[:, :, dy, dx].T @ \
                        gy_flat[:, :, :length - off]
            gx = gx.reshape(b, c_in, h + 2 * pad, wp)
            x.accumulate_grad(gx[:, :, pad:pad + h, pad:pad + w].copy()
                              if pad else gx)
    parents = (x, weight) if bias is None else (x, weight, bias)
    return _make(out_data, parents, backward)


def avg_pool2(x: Tensor) -> Tensor:
    """2x2 average pooling; spatial dims must be even."""
    b, c, h, w = x.shape
    if h % 2 or w % 2:
        raise ValueError(f"avg_pool2 needs even spatial dims, got {h}x{w}")
    pooled = x.data.reshape(b, c, h // 2, 2, w // 2, 2).mean(axis=(3, 5))

    def backward(grad):
        up = np.repeat(np.repeat(grad, 2, axis=2), 2, axis=3)
        x.accumulate_grad(up * 0.25)
    return _make(pooled, (x,), backward)


def upsample_nearest2(x: Tensor) -> Tensor:
    """Nearest-neighbour 2x upsampling."""
    up = np.repeat(np.repeat(x.data, 2, axis=2), 2, axis=3)

    def backward(grad):
        b, c, h, w = grad.shape
        x.accumulate_grad(
            grad.reshape(b, c, h // 2, 2, w // 2, 2).sum(axis=(3, 5)))
    return _make(up, (x,), backward)


def concat_channels(a: Tensor, b: Tensor) -> Tensor:
    split = a.shape[1]

    def backward(grad):
        a.accumulate_grad(grad[:, :split])
        b.accumulate_grad(grad[:, split:])
    return _make(np.concatenate((a.data, b.data), axis=1), (a, b), backward)


def radon_op(image: Tensor, geom: Geometry, angle_ids: np.ndarray) -> Tensor:
    """Differentiable Radon transform of a 2D image tensor.

    The backward pass is the exact transpose (backprojection), so loss
    gradients through the projector are exact.
    """
    if image.ndim != 2:
        raise ValueError(f"radon_op expects a 2D tensor, got shape {image.shape}")
    ids = np.asarray(angle_ids, dtype=np.intp)

    def backward(grad):
        image.accumulate_grad(backproject_array(grad, geom, ids))
    return _make(project_array(image.data, geom, ids), (image,), backward)


# -- tape traversal ----------------------------------------------------

def backward(loss: Tensor) -> None:
    """Reverse-mode sweep from a scalar loss; accumulates into ``grad``."""
    if loss.ndim != 0:
        raise RuntimeError(f"backward needs a scalar, got shape {loss.shape}")
    if not loss.requires_grad:
        raise RuntimeError("backward on a tensor that is not on a tape")
    order: list[Tensor] = []
    seen: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(loss, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if node.node_id in seen or not node.requires_grad:
            continue
        seen.add(node.node_id)
        stack.append((node, True))
        for parent in node._parents:
            stack.append((parent, False))
    loss.accumulate_grad(np.ones_like(loss.data))
    for node in reversed(order):
        if node._backward is not None:
            node._backward(node.grad)


def zero_grads(params) -> None:
    """Reset gradients of an iterable (or dict) of tensors."""
    values = params.values() if isinstance(params, dict) else params
    for p in values:
        p.grad = None
