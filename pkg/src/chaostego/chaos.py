"""Chaotic sequence generation: logistic pair + Duffing map.

All map arithmetic is plain binary64 with a fixed evaluation order so the
keystream is reproducible on any IEEE-754 platform:

    x' = (mu * x) * (1 - x)
    y' = (lam * y) * (1 - y)
    z' = w
    w' = ((-b * z) + (a * w)) - (w * w) * w

CPython never contracts these into fused multiply-adds, and numpy's
elementwise ops are correctly rounded, so both agree bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from chaostego._kvfile import format_kv, parse_kv, read_text, write_text
from chaostego.errors import DegenerateOrbit, KeyFormatError, OutOfRange

MU_RANGE = (3.57, 4.0)
DUFFING_A = 2.75
DUFFING_B = 0.2
DUFFING_BOUND = 2.0
DIVERGENCE_LIMIT = 1e6
TRANSIENT = 1000
PROBE_LENGTH = 256
QUANT_SCALE = 1e5


@dataclass(frozen=True)
class ChaoticKey:
    """Shared secret for the cipher.

    ``lam`` is the second logistic control parameter (serialized as
    ``lambda`` in key files).
    """

    mu: float
    lam: float
    x0: float
    y0: float
    z0: float
    w0: float
    a: float = DUFFING_A
    b: float = DUFFING_B
    block_size: int = 16

    # six reals that make up the brute-force key space; a, b and the
    # block size are public-ish constants
    SECRET_COMPONENTS = ("mu", "lam", "x0", "y0", "z0", "w0")


@dataclass(frozen=True, eq=False)
class KeyMaterial:
    keystream: np.ndarray  # uint8
    block_perm: np.ndarray  # int64 permutation of range(n_blocks)

    def __eq__(self, other):
        if not isinstance(other, KeyMaterial):
            return NotImplemented
        return np.array_equal(self.keystream, other.keystream) and np.array_equal(
            self.block_perm, other.block_perm
        )


def logistic_step(x: float, mu: float) -> float:
    return mu * x * (1.0 - x)


def duffing_step(z: float, w: float, a: float, b: float) -> tuple[float, float]:
    return w, (-b * z + a * w) - w * w * w


def quantize(v: float) -> int:
    """Map a real orbit value to a byte via the fractional part of |v|*1e5."""
    t = abs(v) * QUANT_SCALE
    return int(math.floor((t - math.floor(t)) * 256.0))


def quantize_array(values) -> np.ndarray:
    t = np.abs(np.asarray(values, dtype=np.float64)) * QUANT_SCALE
    return np.floor((t - np.floor(t)) * 256.0).astype(np.uint8)


def permutation_from_stream(values, n: int) -> np.ndarray:
    """Stable ascending argsort of ``values``; ties keep index order."""
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (n,):
        raise ValueError(f"need exactly {n} values, got {values.size}")
    return np.argsort(values, kind="stable")


def _iterate(key: ChaoticKey, skip: int, n_xw: int, n_y: int):
    """Run all three maps jointly.

    Discards ``skip`` steps, then records x and w for the next ``n_xw``
    steps and y for the next ``n_y`` steps.
    """
    # inlined logistic_step / duffing_step; keep the operation order identical
    mu, lam, a, b = key.mu, key.lam, key.a, key.b
    x, y, z, w = key.x0, key.y0, key.z0, key.w0
    for _ in range(skip):
        x = mu * x * (1.0 - x)
        y = lam * y * (1.0 - y)
        z, w = w, (-b * z + a * w) - w * w * w
        if not -DIVERGENCE_LIMIT <= w <= DIVERGENCE_LIMIT:
            raise DegenerateOrbit("w", "divergent")

    n = max(n_xw, n_y)
    xs = [0.0] * n
    ys = [0.0] * n
    ws = [0.0] * n
    for i in range(n):
        x = mu * x * (1.0 - x)
        y = lam * y * (1.0 - y)
        z, w = w, (-b * z + a * w) - w * w * w
        xs[i] = x
        ys[i] = y
        ws[i] = w
    xs = np.array(xs[:n_xw])
    ws = np.array(ws[:n_xw])
    ys = np.array(ys[:n_y])
    if ws.size and not np.all(np.abs(ws) <= DIVERGENCE_LIMIT):
        raise DegenerateOrbit("w", "divergent")
    return xs, ys, ws


def _check_range(name, value, lo, hi, open_interval=False):
    ok = math.isfinite(value) and (lo < value < hi if open_interval else lo <= value <= hi)
    if not ok:
        raise OutOfRange(name, value)


def validate_key(key: ChaoticKey) -> None:
    """Raise OutOfRange or DegenerateOrbit if ``key`` is unusable."""
    _check_range("mu", key.mu, *MU_RANGE)
    _check_range("lambda", key.lam, *MU_RANGE)
    _check_range("x0", key.x0, 0.0, 1.0, open_interval=True)
    _check_range("y0", key.y0, 0.0, 1.0, open_interval=True)
    _check_range("z0", key.z0, -DUFFING_BOUND, DUFFING_BOUND)
    _check_range("w0", key.w0, -DUFFING_BOUND, DUFFING_BOUND)
    for name in ("a", "b"):
        if not math.isfinite(getattr(key, name)):
            raise OutOfRange(name, getattr(key, name))
    if isinstance(key.block_size, bool) or not isinstance(key.block_size, (int, np.integer)):
        raise OutOfRange("block_size", key.block_size)
    if key.block_size < 1:
        raise OutOfRange("block_size", key.block_size)

    xs, ys, ws = _iterate(key, TRANSIENT, PROBE_LENGTH, PROBE_LENGTH)
    for name, seq in (("x", xs), ("y", ys), ("w", ws)):
        if seq.min() == seq.max():
            raise DegenerateOrbit(name)


def gen_key_material(key: ChaoticKey, n_bytes: int, n_blocks: int) -> KeyMaterial:
    """Derive the XOR keystream and block permutation for one encryption.

    Byte i of the keystream is quantize(x_i) ^ quantize(w_i); the
    permutation ranks the first ``n_blocks`` post-transient y values.
    """
    if n_bytes < 0:
        raise ValueError("n_bytes must be >= 0")
    if n_blocks < 1:
        raise ValueError("n_blocks must be >= 1")
    validate_key(key)
    xs, ys, ws = _iterate(key, TRANSIENT, n_bytes, n_blocks)
    keystream = quantize_array(xs) ^ quantize_array(ws)
    return KeyMaterial(keystream, permutation_from_stream(ys, n_blocks))


def is_sensitive(key: ChaoticKey, delta: float = 1e-10, threshold: float = 1e-3) -> bool:
    """True if nudging each of x0, y0, w0 by ``delta`` changes its sequence.

    Control parameters inside a periodic window (e.g. mu near 3.83) pass
    validate_key but pull every start onto the same cycle, so that initial
    state stops mattering.
    """
    base = _iterate(key, TRANSIENT, PROBE_LENGTH, PROBE_LENGTH)
    for field_name, seq_ix in (("x0", 0), ("y0", 1), ("w0", 2)):
        value = getattr(key, field_name)
        nudged = replace(key, **{field_name: value + delta if value + delta < 1 else value - delta})
        try:
            other = _iterate(nudged, TRANSIENT, PROBE_LENGTH, PROBE_LENGTH)
        except DegenerateOrbit:
            return False
        if np.max(np.abs(other[seq_ix] - base[seq_ix])) < threshold:
            return False
    return True


def random_key(rng: np.random.Generator, block_size: int = 16) -> ChaoticKey:
    """Sample keys until one passes validation and is_sensitive."""
    while True:
        key = ChaoticKey(
            mu=float(rng.uniform(*MU_RANGE)),
            lam=float(rng.uniform(*MU_RANGE)),
            x0=float(rng.uniform(0.01, 0.99)),
            y0=float(rng.uniform(0.01, 0.99)),
            z0=float(rng.uniform(-0.5, 0.5)),
            w0=float(rng.uniform(-0.5, 0.5)),
            block_size=block_size,
        )
        try:
            validate_key(key)
        except (OutOfRange, DegenerateOrbit):
            continue
        if is_sensitive(key):
            return key


# -- key files ---------------------------------------------------------------

_FILE_NAMES = {"lam": "lambda"}
_REAL_FIELDS = ("mu", "lam", "x0", "y0", "z0", "w0", "a", "b")


def _parse_real(name, text):
    try:
        return float.fromhex(text) if "x" in text.lower() else float(text)
    except ValueError:
        raise KeyFormatError(f"bad real value for {name}: {text!r}") from None


def key_to_text(key: ChaoticKey) -> str:
    pairs = [(_FILE_NAMES.get(f, f), float(getattr(key, f)).hex()) for f in _REAL_FIELDS]
    pairs.append(("block_size", str(int(key.block_size))))
    return format_kv(pairs, header="chaotic key -- keep secret")


def key_from_text(text: str) -> ChaoticKey:
    names = {_FILE_NAMES.get(f.name, f.name): f.name for f in fields(ChaoticKey)}
    raw = parse_kv(text, set(names))
    missing = [n for n in names if n not in raw and n not in ("a", "b")]
    if missing:
        raise KeyFormatError(f"key file missing fields: {', '.join(missing)}")
    kwargs = {}
    for file_name, value in raw.items():
        attr = names[file_name]
        if attr == "block_size":
            try:
                kwargs[attr] = int(value)
            except ValueError:
                raise KeyFormatError(f"bad block_size: {value!r}") from None
        else:
            kwargs[attr] = _parse_real(file_name, value)
    return ChaoticKey(**kwargs)


def load_key(path) -> ChaoticKey:
    return key_from_text(read_text(path))


def save_key(key: ChaoticKey, path) -> None:
    write_text(path, key_to_text(key))
