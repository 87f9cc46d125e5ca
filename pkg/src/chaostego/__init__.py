"""Chaotic-cipher image steganography.

A secret image is block-scrambled and XOR-encrypted with a keystream built
from a logistic pair and a Duffing map, then hidden in the low bits of a
lossless cover image.
"""

from chaostego.chaos import ChaoticKey, KeyMaterial, gen_key_material, validate_key
from chaostego.cipher import decrypt_secret, encrypt_secret
from chaostego.imageio import ImageBuffer, load_image, save_image
from chaostego.pipeline import hide, reveal
from chaostego.stego import BitPlan, StegoManifest, embed, extract

__all__ = [
    "BitPlan",
    "ChaoticKey",
    "ImageBuffer",
    "KeyMaterial",
    "StegoManifest",
    "decrypt_secret",
    "embed",
    "encrypt_secret",
    "extract",
    "gen_key_material",
    "hide",
    "load_image",
    "reveal",
    "save_image",
    "validate_key",
]
