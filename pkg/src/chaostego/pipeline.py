"""End-to-end hide/reveal: encrypt the secret, then embed it (and back)."""

from __future__ import annotations

from dataclasses import dataclass, replace

from chaostego.chaos import ChaoticKey
from chaostego.cipher import decrypt_secret, encrypt_secret
from chaostego.imageio import ImageBuffer
from chaostego.stego import BitPlan, StegoManifest, embed, extract


@dataclass
class HideResult:
    stego: ImageBuffer
    manifest: StegoManifest
    encrypted: ImageBuffer


def hide(cover: ImageBuffer, secret: ImageBuffer, key: ChaoticKey, plan: BitPlan) -> HideResult:
    encrypted = encrypt_secret(secret, key)
    stego = embed(cover, encrypted.samples, plan)
    manifest = StegoManifest(secret.width, secret.height, secret.channels, plan, key.block_size)
    return HideResult(stego, manifest, encrypted)


def reveal(stego: ImageBuffer, key: ChaoticKey, manifest: StegoManifest) -> ImageBuffer:
    """Recover the secret. A wrong key yields noise, not an error."""
    payload = extract(stego, manifest.n_bytes, manifest.bit_plan)
    cipher_img = ImageBuffer(
        manifest.secret_width, manifest.secret_height, manifest.secret_channels, payload
    )
    if key.block_size != manifest.block_size:
        key = replace(key, block_size=manifest.block_size)
    return decrypt_secret(cipher_img, key)
