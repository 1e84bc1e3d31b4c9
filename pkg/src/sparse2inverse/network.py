"""Encoder-decoder convolutional network with skip connections.

The default model is a small U-shaped net: ``depth`` stages of two 3x3
convolutions + leaky ReLU with 2x average pooling between them, a
two-convolution bottleneck, then nearest-neighbour upsampling with skip
concatenations mirroring the encoder, and a final 1x1 convolution.
Everything runs through :mod:`sparse2inverse.autodiff`, in float64 by
default (float32 is an opt-in via ``dtype``).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .autodiff import (Tensor, avg_pool2, concat_channels, conv2d, leaky_relu,
                       upsample_nearest2)


@dataclass(frozen=True)
class NetworkSpec:
    """Architecture descriptor; fully determines parameter shapes."""

    depth: int = 3
    widths: tuple[int, ...] = (16, 32, 64)
    in_channels: int = 1
    out_channels: int = 1
    negative_slope: float = 0.1

    def __post_init__(self):
        object.__setattr__(self, "widths", tuple(self.widths))
        if self.depth < 1 or len(self.widths) != self.depth:
            raise ValueError(
                f"widths {self.widths} must list one channel count per depth "
                f"stage ({self.depth})")
        if min(self.widths) < 1 or self.in_channels < 1 or self.out_channels < 1:
            raise ValueError("channel counts must be positive")

    @property
    def tile(self) -> int:
        """Input sides must be divisible by this (2 ** depth)."""
        return 2 ** self.depth

    def parameter_shapes(self) -> dict[str, tuple[int, ...]]:
        shapes: dict[str, tuple[int, ...]] = {}

        def conv(name, c_in, c_out, k=3):
            shapes[f"{name}_w"] = (c_out, c_in, k, k)
            shapes[f"{name}_b"] = (c_out,)

        prev = self.in_channels
        for i, width in enumerate(self.widths):
            conv(f"enc{i}_conv1", prev, width)
            conv(f"enc{i}_conv2", width, width)
            prev = width
        conv("mid_conv1", prev, prev)
        conv("mid_conv2", prev, prev)
        for i in reversed(range(self.depth)):
            above = self.widths[i + 1] if i + 1 < self.depth else self.widths[-1]
            conv(f"dec{i}_conv1", above + self.widths[i], self.widths[i])
            conv(f"dec{i}_conv2", self.widths[i], self.widths[i])
        conv("out", self.widths[0], self.out_channels, k=1)
        return shapes

    def parameter_count(self) -> int:
        return sum(int(np.prod(s)) for s in self.parameter_shapes().values())


def init_params(spec: NetworkSpec, seed: int, dtype=np.float64) -> dict[str, Tensor]:
    """He-uniform weights (gain for the leaky slope), zero biases."""
    rng = np.random.default_rng(seed)
    gain = np.sqrt(2.0 / (1.0 + spec.negative_slope ** 2))
    params: dict[str, Tensor] = {}
    for name, shape in spec.parameter_shapes().items():
        if name.endswith("_b"):
            data = np.zeros(shape, dtype=dtype)
        else:
            fan_in = int(np.prod(shape[1:]))
            bound = gain * np.sqrt(3.0 / fan_in)
            data = rng.uniform(-bound, bound, size=shape).astype(dtype)
        params[name] = Tensor(data, requires_grad=True)
    return params


class ConvNet:
    """Bundles a :class:`NetworkSpec` with its parameter tensors."""

    def __init__(self, spec: NetworkSpec, params: dict[str, Tensor]):
        shapes = spec.parameter_shapes()
        if set(params) != set(shapes):
            raise ValueError("parameter names do not match the descriptor")
        for name, shape in shapes.items():
            if params[name].shape != shape:
                raise ValueError(
                    f"parameter {name} has shape {params[name].shape}, "
                    f"descriptor wants {shape}")
        self.spec = spec
        self.params = params

    @classmethod
    def create(cls, spec: NetworkSpec | None = None, seed: int = 0,
               dtype=np.float64) -> "ConvNet":
        spec = spec or NetworkSpec()
        return cls(spec, init_params(spec, seed, dtype))

    def __call__(self, x: Tensor) -> Tensor:
        """Forward a (B, in_channels, H, W) tensor; output has the same
        spatial size (inputs not divisible by ``2**depth`` are
        reflect-padded and the output cropped back)."""
        if x.ndim != 4 or x.shape[1] != self.spec.in_channels:
            raise ValueError(
                f"expected (B, {self.spec.in_channels}, H, W), got {x.shape}")
        h, w = x.shape[2], x.shape[3]
        tile = self.spec.tile
        pad_h = (-h) % tile
        pad_w = (-w) % tile
        if pad_h or pad_w:
            padded = np.pad(x.data, ((0, 0), (0, 0), (0, pad_h), (0, pad_w)),
                            mode="reflect")
            x = Tensor(padded, requires_grad=x.requires_grad) if not x.requires_grad \
                else _reflect_pad(x, pad_h, pad_w)
        out = self._body(x)
        if pad_h or pad_w:
            out = out[:, :, :h, :w]
        return out

    def _body(self, x: Tensor) -> Tensor:
        p = self.params
        slope = self.spec.negative_slope

        def block(t, name):
            t = leaky_relu(conv2d(t, p[f"{name}_conv1_w"], p[f"{name}_conv1_b"]), slope)
            return leaky_relu(conv2d(t, p[f"{name}_conv2_w"], p[f"{name}_conv2_b"]), slope)

        skips = []
        for i in range(self.spec.depth):
            x = block(x, f"enc{i}")
            skips.append(x)
            x = avg_pool2(x)
        x = block(x, "mid")
        for i in reversed(range(self.spec.depth)):
            x = upsample_nearest2(x)
            x = concat_channels(skips[i], x)
            x = block(x, f"dec{i}")
        return conv2d(x, p["out_w"], p["out_b"])

    def apply_image(self, image: np.ndarray) -> np.ndarray:
        """Run a single (H, W) image through the net (no tape)."""
        out = self(Tensor(image[None, None].astype(self.dtype)))
        return out.data[0, 0]

    @property
    def dtype(self):
        return self.params["out_w"].data.dtype

    def clone(self) -> "ConvNet":
        params = {name: Tensor(t.data.copy(), requires_grad=True)
                  for name, t in self.params.items()}
        return ConvNet(self.spec, params)


def _reflect_pad(x: Tensor, pad_h: int, pad_w: int) -> Tensor:
    # differentiable reflect pad is only needed when padding a tensor
    # that carries gradients; network inputs never do, so keep it simple
    raise NotImplementedError("padding a gradient-carrying input is unsupported")


def save_checkpoint(path, net: ConvNet) -> None:
    """Write descriptor + named parameter arrays; bit-exact round-trip."""
    header = json.dumps(asdict(net.spec))
    arrays = {name: t.data for name, t in net.params.items()}
    np.savez(path, __descriptor__=np.frombuffer(header.encode(), dtype=np.uint8),
             **arrays)


def load_checkpoint(path) -> ConvNet:
    with np.load(path) as archive:
        header = json.loads(bytes(archive["__descriptor__"]).decode())
        spec = NetworkSpec(depth=header["depth"], widths=tuple(header["widths"]),
                           in_channels=header["in_channels"],
                           out_channels=header["out_channels"],
                           negative_slope=header["negative_slope"])
        params = {name: Tensor(archive[name].copy(), requires_grad=True)
                  for name in archive.files if name != "__descriptor__"}
    return ConvNet(spec, params)
