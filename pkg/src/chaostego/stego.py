"""k-LSB replacement embedding at a configurable bits-per-pixel plan."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from chaostego._kvfile import format_kv, parse_kv, read_text, write_text
from chaostego.errors import CapacityExceeded, ChannelMismatch, KeyFormatError
from chaostego.imageio import ImageBuffer

PRESETS = {3: (1, 1, 1), 6: (2, 2, 2), 8: (4, 2, 2)}


@dataclass(frozen=True)
class BitPlan:
    """Low bits replaced per channel; one entry per cover channel."""

    bits_per_channel: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(k) for k in self.bits_per_channel)
        if len(bits) not in (1, 3):
            raise ValueError(f"plan needs 1 or 3 entries, got {len(bits)}")
        if any(not 0 <= k <= 8 for k in bits):
            raise ValueError(f"each plan entry must be in 0..8, got {bits}")
        if sum(bits) < 1:
            raise ValueError("plan must carry at least one bit per pixel")
        object.__setattr__(self, "bits_per_channel", bits)

    @classmethod
    def preset(cls, bpp: int, channels: int = 3) -> BitPlan:
        if channels == 1:
            return cls((bpp,))
        try:
            return cls(PRESETS[bpp])
        except KeyError:
            raise ValueError(f"no preset for {bpp} bpp; choose from {sorted(PRESETS)}") from None

    @classmethod
    def parse(cls, text: str) -> BitPlan:
        """Parse ``"4,2,2"`` or ``"1"``."""
        try:
            return cls(tuple(int(p) for p in text.split(",")))
        except ValueError as exc:
            raise ValueError(f"bad plan {text!r}: {exc}") from None

    @property
    def bpp(self) -> int:
        return sum(self.bits_per_channel)

    @property
    def channels(self) -> int:
        return len(self.bits_per_channel)

    def __str__(self):
        return ",".join(map(str, self.bits_per_channel))


@dataclass(frozen=True)
class StegoManifest:
    secret_width: int
    secret_height: int
    secret_channels: int
    bit_plan: BitPlan
    block_size: int

    def __post_init__(self):
        for name in ("secret_width", "secret_height", "secret_channels", "block_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.secret_channels not in (1, 3):
            raise ValueError("secret_channels must be 1 or 3")

    @property
    def n_bytes(self) -> int:
        return self.secret_width * self.secret_height * self.secret_channels

    def to_text(self) -> str:
        bits = self.bit_plan.bits_per_channel
        pairs = [
            ("secret_width", self.secret_width),
            ("secret_height", self.secret_height),
            ("secret_channels", self.secret_channels),
        ]
        if len(bits) == 1:
            pairs.append(("plan_gray", bits[0]))
        else:
            pairs += [("plan_r", bits[0]), ("plan_g", bits[1]), ("plan_b", bits[2])]
        pairs.append(("block_size", self.block_size))
        return format_kv(pairs, header="stego manifest")

    @classmethod
    def from_text(cls, text: str) -> StegoManifest:
        raw = parse_kv(text, _MANIFEST_FIELDS)
        try:
            vals = {k: int(v) for k, v in raw.items()}
        except ValueError as exc:
            raise KeyFormatError(f"manifest: {exc}") from None
        if "plan_gray" in vals:
            bits = (vals.pop("plan_gray"),)
        else:
            bits = tuple(vals.pop(k, None) for k in ("plan_r", "plan_g", "plan_b"))
        required = ("secret_width", "secret_height", "secret_channels", "block_size")
        missing = [k for k in required if k not in vals]
        if missing or None in bits or set(vals) - set(required):
            raise KeyFormatError(f"manifest incomplete or inconsistent: missing {missing or 'plan'}")
        try:
            return cls(bit_plan=BitPlan(bits), **vals)
        except ValueError as exc:
            raise KeyFormatError(f"manifest: {exc}") from None


_MANIFEST_FIELDS = {
    "secret_width", "secret_height", "secret_channels",
    "plan_r", "plan_g", "plan_b", "plan_gray", "block_size",
}


def load_manifest(path) -> StegoManifest:
    return StegoManifest.from_text(read_text(path))


def save_manifest(manifest: StegoManifest, path) -> None:
    write_text(path, manifest.to_text())


def capacity_bits(cover: ImageBuffer, plan: BitPlan) -> int:
    if plan.channels != cover.channels:
        raise ChannelMismatch(f"plan has {plan.channels} entries, cover has {cover.channels} channels")
    return cover.n_pixels * plan.bpp


def embed_bits_in_byte(cover_byte: int, bits: int, k: int) -> int:
    """Replace the k low bits of ``cover_byte`` with the k-bit group ``bits``."""
    if k == 0:
        return cover_byte
    mask = (1 << k) - 1
    return (cover_byte & ~mask & 0xFF) | (bits & mask)


def _bit_layout(cover: ImageBuffer, plan: BitPlan, n_bits: int):
    """Sample index and bit position for each of the first n_bits payload bits.

    Samples are visited in buffer order, each taking its channel's k bits,
    first-consumed bit in the highest of the k positions. A final sample
    only partly covered keeps its remaining low bits from the cover.
    """
    ks = np.tile(np.array(plan.bits_per_channel, dtype=np.int64), cover.n_pixels)
    ends = np.cumsum(ks)
    n_samples = int(np.searchsorted(ends, n_bits, side="left")) + 1 if n_bits else 0
    ks, ends = ks[:n_samples], ends[:n_samples]
    bit_ix = np.arange(n_bits)
    sample = np.searchsorted(ends, bit_ix, side="right")
    starts = ends - ks
    pos = ks[sample] - 1 - (bit_ix - starts[sample])
    return sample, pos.astype(np.uint8)


def _check_capacity(img, n_bytes, plan):
    available = capacity_bits(img, plan)
    if 8 * n_bytes > available:
        raise CapacityExceeded(8 * n_bytes, available)


def embed(cover: ImageBuffer, payload, plan: BitPlan) -> ImageBuffer:
    payload = np.asarray(payload, dtype=np.uint8).reshape(-1)
    _check_capacity(cover, payload.size, plan)
    out = cover.samples.copy()
    if payload.size:
        bits = np.unpackbits(payload)  # MSB-first
        sample, pos = _bit_layout(cover, plan, bits.size)
        # bits of one sample are contiguous, so reduceat groups them
        group_starts = np.flatnonzero(np.r_[True, sample[1:] != sample[:-1]])
        touched = sample[group_starts]
        mask = np.bitwise_or.reduceat(np.left_shift(1, pos, dtype=np.uint8), group_starts)
        value = np.bitwise_or.reduceat(np.left_shift(bits, pos), group_starts)
        out[touched] = (out[touched] & ~mask) | value
    return ImageBuffer(cover.width, cover.height, cover.channels, out)


def extract(stego: ImageBuffer, n_bytes: int, plan: BitPlan) -> np.ndarray:
    _check_capacity(stego, n_bytes, plan)
    if n_bytes == 0:
        return np.zeros(0, dtype=np.uint8)
    sample, pos = _bit_layout(stego, plan, 8 * n_bytes)
    bits = (stego.samples[sample] >> pos) & 1
    return np.packbits(bits)
