"""8-bit raster container and lossless PNG/PGM/PPM I/O."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from chaostego.errors import DecodeError, ImageIOError, UnsupportedDepth, UnsupportedFormat

LOSSLESS_FORMATS = {"PNG", "PPM"}  # Pillow reports PGM/PPM both as "PPM"
_SAVE_FORMATS = {".png": "PNG", ".pgm": "PPM", ".ppm": "PPM", ".pnm": "PPM"}


@dataclass(frozen=True, eq=False)
class ImageBuffer:
    """Row-major, channel-interleaved 8-bit image."""

    width: int
    height: int
    channels: int
    samples: np.ndarray  # flat uint8, length width*height*channels

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"image must be at least 1x1, got {self.width}x{self.height}")
        if self.channels not in (1, 3):
            raise ValueError(f"channels must be 1 or 3, got {self.channels}")
        samples = np.ascontiguousarray(self.samples, dtype=np.uint8).reshape(-1)
        if samples.size != self.width * self.height * self.channels:
            raise ValueError(
                f"expected {self.width * self.height * self.channels} samples, got {samples.size}"
            )
        object.__setattr__(self, "samples", samples)

    @classmethod
    def from_array(cls, arr) -> ImageBuffer:
        """Build from an (H, W) or (H, W, C) uint8 array."""
        arr = np.asarray(arr)
        if arr.dtype != np.uint8:
            raise UnsupportedDepth(f"expected uint8 samples, got {arr.dtype}")
        if arr.ndim == 2:
            h, w = arr.shape
            c = 1
        elif arr.ndim == 3:
            h, w, c = arr.shape
        else:
            raise ValueError(f"bad array shape {arr.shape}")
        return cls(w, h, c, arr.reshape(-1))

    def to_array(self) -> np.ndarray:
        shape = (self.height, self.width) if self.channels == 1 else (self.height, self.width, self.channels)
        return self.samples.reshape(shape)

    @property
    def n_pixels(self) -> int:
        return self.width * self.height

    @property
    def shape(self):
        return (self.width, self.height, self.channels)

    def __eq__(self, other):
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.samples, other.samples)

    def __repr__(self):
        return f"ImageBuffer({self.width}x{self.height}x{self.channels})"


def flatten_bytes(img: ImageBuffer) -> np.ndarray:
    return img.samples.copy()


def _source_bit_depth(path, fmt):
    # Pillow silently narrows some 16-bit sources (e.g. 48-bit PNG) to 8-bit
    # RGB, so the depth is read from the header itself.
    with open(path, "rb") as fh:
        head = fh.read(64)
    if fmt == "PNG":
        return head[24] if len(head) > 24 else 8
    tokens = []
    for line in head.split(b"\n"):
        tokens += line.split(b"#", 1)[0].split()
        if len(tokens) >= 4:
            break
    try:
        maxval = int(tokens[3])
    except (IndexError, ValueError):
        return 8
    return 16 if maxval > 255 else 8


def load_image(path) -> ImageBuffer:
    """Decode a PNG, PGM or PPM file into an 8-bit buffer.

    Lossy formats are refused outright: LSB payloads do not survive them.
    """
    path = Path(path)
    try:
        with Image.open(path) as im:
            fmt = im.format
            if fmt not in LOSSLESS_FORMATS:
                raise UnsupportedFormat(f"{path}: {fmt} is not an accepted lossless format")
            mode = im.mode
            if _source_bit_depth(path, fmt) > 8 or mode in ("I", "I;16", "I;16B", "I;16L", "F") or mode.startswith("I;"):
                raise UnsupportedDepth(f"{path}: only 8-bit images are supported (mode {mode})")
            if mode == "P":
                im = im.convert("RGB")
            elif mode == "1":
                im = im.convert("L")
            elif mode not in ("L", "RGB"):
                raise UnsupportedFormat(f"{path}: unsupported pixel mode {mode}")
            arr = np.array(im, dtype=np.uint8)
    except FileNotFoundError as exc:
        raise ImageIOError(str(exc)) from exc
    except UnidentifiedImageError as exc:
        raise DecodeError(f"{path}: cannot decode image") from exc
    except (OSError, SyntaxError, ValueError) as exc:
        raise DecodeError(f"{path}: {exc}") from exc
    return ImageBuffer.from_array(arr)


def save_image(img: ImageBuffer, path) -> None:
    """Write losslessly; .png, .pgm or .ppm chosen by extension."""
    path = Path(path)
    fmt = _SAVE_FORMATS.get(path.suffix.lower())
    if fmt is None:
        raise UnsupportedFormat(f"{path}: cannot save to {path.suffix or 'no extension'}; use .png/.pgm/.ppm")
    pil = Image.fromarray(img.to_array())
    try:
        pil.save(path, format=fmt)
    except OSError as exc:
        raise ImageIOError(f"cannot write {path}: {exc}") from exc
