"""Command-line front end: keygen, hide, reveal, analyze, keyspace.

Exit codes: 0 ok, 1 usage, 2 capacity, 3 key validation, 4 I/O or format.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from chaostego import metrics
from chaostego.chaos import ChaoticKey, load_key, random_key, save_key, validate_key
from chaostego.errors import (
    CapacityExceeded,
    ChannelMismatch,
    ChaostegoError,
    DimensionMismatch,
    ImageFormatError,
    KeyValidationError,
)
from chaostego.imageio import load_image, save_image
from chaostego.pipeline import hide, reveal
from chaostego.stego import BitPlan, load_manifest, save_manifest

EXIT_OK, EXIT_USAGE, EXIT_CAPACITY, EXIT_KEY, EXIT_IO = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _plan_for(args, channels: int) -> BitPlan:
    try:
        if args.plan:
            return BitPlan.parse(args.plan)
        return BitPlan.preset(args.bpp if args.bpp is not None else 3, channels)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_keygen(args) -> int:
    rng = np.random.default_rng(args.seed)
    key = random_key(rng, block_size=args.block_size)
    save_key(key, args.out)
    print(f"wrote key to {args.out}")
    return EXIT_OK


def cmd_hide(args) -> int:
    key = load_key(args.key)
    validate_key(key)
    cover = load_image(args.cover)
    secret = load_image(args.secret)
    plan = _plan_for(args, cover.channels)
    if plan.channels != cover.channels:
        raise UsageError(f"plan {plan} does not match a {cover.channels}-channel cover")
    result = hide(cover, secret, key, plan)
    save_image(result.stego, args.out)
    save_manifest(result.manifest, args.manifest)
    if args.emit_encrypted:
        save_image(result.encrypted, args.emit_encrypted)
    db = metrics.psnr(cover, result.stego)
    print(f"embedded {8 * secret.samples.size} bits at {plan.bpp} bpp (plan {plan})")
    print(f"PSNR(cover, stego) = {metrics.format_db(db)} dB")
    return EXIT_OK


def cmd_reveal(args) -> int:
    key = load_key(args.key)
    validate_key(key)
    manifest = load_manifest(args.manifest)
    stego = load_image(args.stego)
    if manifest.bit_plan.channels != stego.channels:
        raise ChannelMismatch("manifest plan does not match stego image channels")
    secret = reveal(stego, key, manifest)
    save_image(secret, args.out)
    print(f"recovered {secret.width}x{secret.height}x{secret.channels} secret to {args.out}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    a = load_image(args.image_a)
    b = load_image(args.image_b)
    report = metrics.QualityReport.compare(a, b)
    Path(args.out).write_text(report.to_csv(), encoding="utf-8")
    for path, img in ((args.hist_a, a), (args.hist_b, b)):
        if path:
            h = metrics.histogram(img)
            text = "".join(metrics.histogram_csv(h, c) for c in range(img.channels))
            Path(path).write_text(text, encoding="utf-8")
    if args.diff:
        save_image(metrics.diff_image(a, b), args.diff)
    print(report.to_text(), end="")
    return EXIT_OK


def cmd_keyspace(args) -> int:
    try:
        load_key(args.key)
    except KeyValidationError as exc:
        # unreadable key is an input-file problem here, not a validation one
        print(f"chaostego: error: {exc}", file=sys.stderr)
        return EXIT_IO
    n = len(ChaoticKey.SECRET_COMPONENTS)
    try:
        bits = metrics.key_space_bits(n, args.precision)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"components: {n} real values ({', '.join(ChaoticKey.SECRET_COMPONENTS)})")
    print(f"precision: {args.precision:g}")
    print(f"key space: {bits:.1f} bits (~10^{bits * np.log10(2):.0f})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="chaostego", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("keygen", help="write a random valid key file")
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--block-size", type=int, default=16)
    s.set_defaults(func=cmd_keygen)

    s = sub.add_parser("hide", help="encrypt a secret image and embed it in a cover")
    s.add_argument("--cover", required=True)
    s.add_argument("--secret", required=True)
    s.add_argument("--key", required=True)
    rate = s.add_mutually_exclusive_group()
    rate.add_argument("--bpp", type=int, choices=sorted({1, 2, 3, 4, 5, 6, 7, 8}))
    rate.add_argument("--plan", help="explicit per-channel bits, e.g. 4,2,2")
    s.add_argument("--out", required=True, help="stego image path")
    s.add_argument("--manifest", required=True)
    s.add_argument("--emit-encrypted", help="also save the encrypted secret image")
    s.set_defaults(func=cmd_hide)

    s = sub.add_parser("reveal", help="extract and decrypt a hidden secret image")
    s.add_argument("--stego", required=True)
    s.add_argument("--key", required=True)
    s.add_argument("--manifest", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_reveal)

    s = sub.add_parser("analyze", help="compare two images (MSE, PSNR, histograms)")
    s.add_argument("image_a")
    s.add_argument("image_b")
    s.add_argument("--out", required=True, help="CSV report path")
    s.add_argument("--hist-a")
    s.add_argument("--hist-b")
    s.add_argument("--diff", help="amplified |a-b| image path")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("keyspace", help="report brute-force key space size")
    s.add_argument("--key", required=True)
    s.add_argument("--precision", type=float, default=metrics.DEFAULT_PRECISION)
    s.set_defaults(func=cmd_keyspace)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        code, msg = EXIT_USAGE, exc
    except CapacityExceeded as exc:
        code, msg = EXIT_CAPACITY, exc
    except ChannelMismatch as exc:
        code, msg = EXIT_USAGE, exc
    except KeyValidationError as exc:
        code, msg = EXIT_KEY, exc
    except (ImageFormatError, DimensionMismatch, OSError) as exc:
        code, msg = EXIT_IO, exc
    except ChaostegoError as exc:
        code, msg = EXIT_IO, exc
    print(f"chaostego: error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
