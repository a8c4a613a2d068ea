"""Raster primitives: border padding, widening and 8-bit quantization.

All fusion arithmetic runs in float64 and is only quantized once, when an
8-bit output raster is actually needed.
"""

import numpy as np

from .validation import check_border_mode, check_image_float, check_image_u8


def pad(img: np.ndarray, margin: int, mode: str = "replicate") -> np.ndarray:
    """Pad a raster by `margin` pixels on every side.

    Replicate mode repeats the nearest interior pixel, so no new intensity
    values are invented at the border.
    """
    check_border_mode(mode)
    if margin < 0:
        raise ValueError(f"margin must be >= 0, got {margin}")
    if margin == 0:
        return np.array(img, copy=True)
    return np.pad(img, margin, mode="edge")


def widen(img: np.ndarray) -> np.ndarray:
    """Promote an 8-bit raster to float64 for unclamped arithmetic."""
    return check_image_u8(img).astype(np.float64)


def quantize(img: np.ndarray) -> np.ndarray:
    """Clamp a float raster to [0, 255] and round half away from zero.

    Raises ValueError if any sample is NaN or infinite.
    """
    arr = check_image_float(img)
    clipped = np.clip(arr, 0.0, 255.0)
    # After clipping all values are >= 0, so half away from zero == floor(x + 0.5).
    return np.floor(clipped + 0.5).astype(np.uint8)
