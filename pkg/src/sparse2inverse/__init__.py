"""Self-supervised sparse-view CT reconstruction toolkit."""

from .geometry import Geometry, default_detector_count
from .metrics import psnr, ssim
from .noise import NoiseModel, apply_noise
from .phantoms import PhantomSpec, generate_phantoms, shepp_logan
from .projector import Sinogram, backproject, fbp, radon, restrict
from .splitting import (Partition, SubsetSelection, make_partition,
                        make_selection, network_input, target_data)

__version__ = "0.1.0"

__all__ = [
    "Geometry", "default_detector_count", "Sinogram", "radon", "backproject",
    "fbp", "restrict", "NoiseModel", "apply_noise", "Partition",
    "SubsetSelection", "make_partition", "make_selection", "network_input",
    "target_data", "psnr", "ssim", "PhantomSpec", "generate_phantoms",
    "shepp_logan",
]
