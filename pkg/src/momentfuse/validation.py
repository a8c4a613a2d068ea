"""Input validation helpers shared by every module.

Images are plain numpy arrays: 8-bit rasters are 2-D ``uint8`` arrays,
floating intermediates are 2-D ``float64`` arrays (unbounded, but always
finite). The helpers below enforce those contracts at API boundaries so the
numeric kernels can assume clean input.
"""

import numpy as np


class ShapeMismatchError(ValueError):
    """Raised when two rasters that must be registered differ in shape."""


def check_image_u8(img, name: str = "image") -> np.ndarray:
    """Validate an 8-bit grayscale raster.

    Accepts any integer array with values in [0, 255] and returns it as a
    contiguous uint8 array of shape (height, width) with both dims >= 1.
    """
    arr = np.asarray(img)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D (height, width), got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} has a zero dimension: {arr.shape}")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"{name} must be an integer array, got dtype={arr.dtype}")
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError(f"{name} has samples outside [0, 255]")
        arr = arr.astype(np.uint8)
    return np.ascontiguousarray(arr)


def check_image_float(img, name: str = "image") -> np.ndarray:
    """Validate a floating-point raster: 2-D, nonempty, all samples finite."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D (height, width), got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} has a zero dimension: {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite samples")
    return arr


def check_same_shape(a: np.ndarray, b: np.ndarray,
                     name_a: str = "first image", name_b: str = "second image"):
    """Require two rasters to be pixel-registered (identical shape)."""
    if a.shape != b.shape:
        raise ShapeMismatchError(
            f"{name_a} {a.shape} and {name_b} {b.shape} must have identical dimensions"
        )


def check_border_mode(mode: str) -> str:
    """Validate a border handling mode. Only 'replicate' is supported."""
    if mode != "replicate":
        raise ValueError(f"unsupported border mode {mode!r}; expected 'replicate'")
    return mode
