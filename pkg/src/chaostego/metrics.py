"""Image-quality and security measurements: MSE/PSNR, histograms, key space."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from chaostego.errors import ChannelMismatch, DimensionMismatch, ZeroVariance
from chaostego.imageio import ImageBuffer

PEAK = 255.0
IMPERCEPTIBLE_DB = 30.0
DEFAULT_PRECISION = 1e-15


def _diff(a: ImageBuffer, b: ImageBuffer) -> np.ndarray:
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a!r} vs {b!r}")
    return a.samples.astype(np.int64) - b.samples.astype(np.int64)


def mse(a: ImageBuffer, b: ImageBuffer) -> float:
    d = _diff(a, b)
    return float(np.mean(d * d))


def psnr_from_mse(value: float) -> float:
    """PSNR in dB; ``math.inf`` for a perfect match."""
    if value == 0:
        return math.inf
    return 10.0 * math.log10(PEAK * PEAK / value)


def psnr(a: ImageBuffer, b: ImageBuffer) -> float:
    return psnr_from_mse(mse(a, b))


def per_channel_psnr(a: ImageBuffer, b: ImageBuffer) -> list[float]:
    d = _diff(a, b).reshape(-1, a.channels)
    return [psnr_from_mse(float(np.mean(d[:, c] ** 2))) for c in range(a.channels)]


def max_abs_diff(a: ImageBuffer, b: ImageBuffer) -> int:
    return int(np.abs(_diff(a, b)).max())


def diff_image(a: ImageBuffer, b: ImageBuffer, gain: int = 64) -> ImageBuffer:
    """|a - b| amplified and clipped to 255, for eyeballing embedding traces."""
    amp = np.minimum(np.abs(_diff(a, b)) * gain, 255).astype(np.uint8)
    return ImageBuffer(a.width, a.height, a.channels, amp)


def histogram(img: ImageBuffer) -> np.ndarray:
    """Shape (channels, 256) counts."""
    px = img.samples.reshape(-1, img.channels)
    return np.stack([np.bincount(px[:, c], minlength=256) for c in range(img.channels)])


def histogram_correlation(h1, h2) -> float:
    h1 = np.asarray(h1, dtype=np.float64)
    h2 = np.asarray(h2, dtype=np.float64)
    if h1.shape != h2.shape:
        raise ChannelMismatch(f"histogram shapes differ: {h1.shape} vs {h2.shape}")
    u, v = h1.reshape(-1), h2.reshape(-1)
    du, dv = u - u.mean(), v - v.mean()
    denom = math.sqrt(float(du @ du) * float(dv @ dv))
    if denom == 0:
        raise ZeroVariance("histogram has no variance")
    return float(du @ dv) / denom


def key_space_bits(n_components: int, precision: float = DEFAULT_PRECISION) -> float:
    if n_components < 1:
        raise ValueError("need at least one key component")
    if not 0 < precision < 1:
        raise ValueError("precision must be in (0, 1)")
    return n_components * math.log2(1.0 / precision)


@dataclass
class QualityReport:
    mse: float
    psnr_db: float
    max_abs_diff: int
    per_channel_psnr: list[float] = field(default_factory=list)
    histogram_correlation: float | None = None

    @classmethod
    def compare(cls, a: ImageBuffer, b: ImageBuffer) -> QualityReport:
        m = mse(a, b)
        try:
            corr = histogram_correlation(histogram(a), histogram(b))
        except ZeroVariance:
            corr = None
        return cls(m, psnr_from_mse(m), max_abs_diff(a, b), per_channel_psnr(a, b), corr)

    @property
    def imperceptible(self) -> bool:
        return self.psnr_db > IMPERCEPTIBLE_DB

    def rows(self):
        yield "mse", f"{self.mse:.6f}"
        yield "psnr_db", format_db(self.psnr_db)
        yield "max_abs_diff", str(self.max_abs_diff)
        for c, val in enumerate(self.per_channel_psnr):
            yield f"psnr_db_ch{c}", format_db(val)
        if self.histogram_correlation is not None:
            yield "histogram_correlation", f"{self.histogram_correlation:.6f}"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["metric", "value"])
        w.writerows(self.rows())
        return buf.getvalue()

    def to_text(self) -> str:
        return "\n".join(f"{k:<24}{v}" for k, v in self.rows()) + "\n"


def format_db(v: float) -> str:
    return "inf" if math.isinf(v) else f"{v:.4f}"


def histogram_csv(hist: np.ndarray, channel: int) -> str:
    """256 ``bin,count`` lines for one channel."""
    return "".join(f"{i},{int(n)}\n" for i, n in enumerate(hist[channel]))


def chi_square_uniform(data, bins: int = 256) -> float:
    counts = np.bincount(np.asarray(data, dtype=np.uint8).reshape(-1), minlength=bins)
    expected = counts.sum() / bins
    return float(((counts - expected) ** 2).sum() / expected)


def bit_error_rate(a, b) -> float:
    """Fraction of differing bits between two equal-length byte arrays."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    if a.shape != b.shape:
        raise DimensionMismatch("byte arrays differ in length")
    return float(np.unpackbits(a ^ b).mean())


def expected_lsb_mse(k: int) -> float:
    """Mean squared change of one sample when its k low bits are replaced
    by uniform random bits, assuming independent uniform cover bits."""
    return (4**k - 1) / 6.0
