"""3x3 convolution engine and the high-boost preprocessing mask.

The default preprocessing mask is center-weighted with eight -1 neighbors and
a 1/9 scale factor. With the default center weight of 17.9 the mask has a DC
gain of (17.9 - 8) / 9 = 1.1, so it amplifies fine detail while keeping a
scaled copy of the smooth content: flat regions come out multiplied by 1.1.
"""

from dataclasses import dataclass

import numpy as np

from .image import pad, widen
from .validation import check_image_float

DEFAULT_CENTER_WEIGHT = 17.9


@dataclass
class Kernel3:
    """A 3x3 mask with a scalar factor applied after the weighted sum."""

    coeffs: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if self.coeffs.shape != (3, 3):
            raise ValueError(f"kernel must be 3x3, got {self.coeffs.shape}")
        if not (np.all(np.isfinite(self.coeffs)) and np.isfinite(self.scale)):
            raise ValueError("kernel coefficients and scale must be finite")

    def dc_gain(self) -> float:
        """Response to a constant image: coefficient sum times scale."""
        return float(self.coeffs.sum() * self.scale)


def high_boost_mask(center: float = DEFAULT_CENTER_WEIGHT) -> Kernel3:
    """The default fusion preprocessing mask: -1 neighbors around a boosted
    center, scaled by 1/9."""
    coeffs = np.full((3, 3), -1.0)
    coeffs[1, 1] = center
    return Kernel3(coeffs, scale=1.0 / 9.0)


def identity_kernel() -> Kernel3:
    """Kernel whose response equals its input exactly."""
    coeffs = np.zeros((3, 3))
    coeffs[1, 1] = 1.0
    return Kernel3(coeffs, scale=1.0)


def convolve3(img: np.ndarray, kernel: Kernel3, border: str = "replicate") -> np.ndarray:
    """Apply a 3x3 mask to a float raster under replicate padding.

    out(r, c) = scale * sum_{dr,dc in {-1,0,1}} coeffs(dr, dc) * padded(r+dr, c+dc)

    The mask is applied as written (correlation); output has the input's
    shape and is not clamped, so samples may be negative or exceed 255.
    """
    arr = check_image_float(img)
    h, w = arr.shape
    padded = pad(arr, 1, border)
    acc = np.zeros((h, w), dtype=np.float64)
    for dr in range(3):
        for dc in range(3):
            coeff = kernel.coeffs[dr, dc]
            if coeff != 0.0:
                acc += coeff * padded[dr:dr + h, dc:dc + w]
    return kernel.scale * acc


def preprocess(img: np.ndarray, center: float = DEFAULT_CENTER_WEIGHT) -> np.ndarray:
    """Widen an 8-bit source to float and apply the high-boost mask.

    The result is the unclamped filtered raster every downstream saliency
    computation works on.
    """
    return convolve3(widen(img), high_boost_mask(center))
