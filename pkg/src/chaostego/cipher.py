"""Block scrambling + XOR keystream encryption of the secret image."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from chaostego.chaos import ChaoticKey, gen_key_material
from chaostego.errors import LengthMismatch, PermLengthMismatch
from chaostego.imageio import ImageBuffer, flatten_bytes


@dataclass(frozen=True)
class BlockGrid:
    rows: int
    cols: int
    block_size: int
    height: int
    width: int

    @classmethod
    def for_image(cls, img: ImageBuffer, m: int) -> BlockGrid:
        if m < 1:
            raise ValueError("block size must be >= 1")
        return cls(-(-img.height // m), -(-img.width // m), m, img.height, img.width)

    @property
    def n_blocks(self) -> int:
        return self.rows * self.cols

    def block_shape(self, j: int) -> tuple[int, int]:
        r, c = divmod(j, self.cols)
        m = self.block_size
        return min(m, self.height - r * m), min(m, self.width - c * m)

    def block_pixel_indices(self, blocks: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
        """Flat pixel indices of each listed block, shape (len(blocks), bh*bw)."""
        bh, bw = shape
        r, c = np.divmod(np.asarray(blocks), self.cols)
        origin = (r * self.block_size) * self.width + c * self.block_size
        offs = (np.arange(bh)[:, None] * self.width + np.arange(bw)[None, :]).reshape(-1)
        return origin[:, None] + offs[None, :]


def _source_pixel_map(grid: BlockGrid, perm) -> np.ndarray:
    """src[p] = input pixel that lands on output pixel p under scrambling.

    Blocks are bucketed by exact shape. Within a bucket, output slots (in
    grid order) are filled by that bucket's blocks in the order they appear
    in ``perm``; with no partial blocks this is simply out[j] = in[perm[j]].
    """
    perm = np.asarray(perm, dtype=np.int64).reshape(-1)
    if perm.size != grid.n_blocks:
        raise PermLengthMismatch(f"permutation has {perm.size} entries, grid has {grid.n_blocks} blocks")
    if not np.array_equal(np.sort(perm), np.arange(grid.n_blocks)):
        raise ValueError("not a permutation")

    shapes = [grid.block_shape(j) for j in range(grid.n_blocks)]
    src = np.empty(grid.height * grid.width, dtype=np.int64)
    perm_shapes = [shapes[p] for p in perm]
    for shape in set(shapes):
        slots = np.array([j for j in range(grid.n_blocks) if shapes[j] == shape])
        movers = perm[[i for i, s in enumerate(perm_shapes) if s == shape]]
        src[grid.block_pixel_indices(slots, shape)] = grid.block_pixel_indices(movers, shape)
    return src


def _regather(img: ImageBuffer, pixel_order: np.ndarray) -> ImageBuffer:
    pixels = img.samples.reshape(img.n_pixels, img.channels)
    return ImageBuffer(img.width, img.height, img.channels, pixels[pixel_order].reshape(-1))


def scramble(img: ImageBuffer, perm, m: int) -> ImageBuffer:
    """Move whole m×m blocks: output block j takes input block perm[j]."""
    src = _source_pixel_map(BlockGrid.for_image(img, m), perm)
    return _regather(img, src)


def unscramble(img: ImageBuffer, perm, m: int) -> ImageBuffer:
    src = _source_pixel_map(BlockGrid.for_image(img, m), perm)
    inverse = np.empty_like(src)
    inverse[src] = np.arange(src.size)
    return _regather(img, inverse)


def xor_bytes(data, keystream) -> np.ndarray:
    data = np.asarray(data, dtype=np.uint8)
    keystream = np.asarray(keystream, dtype=np.uint8)
    if data.shape != keystream.shape:
        raise LengthMismatch(f"data has {data.size} bytes, keystream {keystream.size}")
    return data ^ keystream


def _material(img: ImageBuffer, key: ChaoticKey):
    grid = BlockGrid.for_image(img, key.block_size)
    return gen_key_material(key, img.samples.size, grid.n_blocks)


def encrypt_secret(secret: ImageBuffer, key: ChaoticKey) -> ImageBuffer:
    km = _material(secret, key)
    scrambled = scramble(secret, km.block_perm, key.block_size)
    out = xor_bytes(flatten_bytes(scrambled), km.keystream)
    return ImageBuffer(secret.width, secret.height, secret.channels, out)


def decrypt_secret(cipher_img: ImageBuffer, key: ChaoticKey) -> ImageBuffer:
    km = _material(cipher_img, key)
    plain = xor_bytes(flatten_bytes(cipher_img), km.keystream)
    buf = ImageBuffer(cipher_img.width, cipher_img.height, cipher_img.channels, plain)
    return unscramble(buf, km.block_perm, key.block_size)
