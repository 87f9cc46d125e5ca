"""Reproduce the PSNR table, histogram comparison and key-space figure.

    python scripts/reproduce_psnr_table.py --out results/

Covers are the color photographs bundled with scikit-image, center-cropped
and resized to 512x512; the secret is the 256x256 (subsampled) cameraman.
Writes stego/encrypted/diff images, per-image histogram CSVs and a summary
CSV into --out.
"""

import argparse
import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from skimage import data, transform, util

from chaostego import metrics
from chaostego.chaos import ChaoticKey, save_key
from chaostego.imageio import ImageBuffer, save_image
from chaostego.pipeline import hide, reveal
from chaostego.stego import BitPlan

PUBLISHED = {3: (53.0, 53.6, 53.8, 53.6), 6: (48.2, 48.5, 48.2, 48.6), 8: (41.5, 41.8, 42.7, 41.5)}


@dataclass
class Config:
    out: Path = Path("results")
    covers: tuple = ("astronaut", "chelsea", "coffee", "rocket")
    rates: tuple = (3, 6, 8)
    key: ChaoticKey = field(
        default_factory=lambda: ChaoticKey(mu=3.99, lam=3.98, x0=0.3, y0=0.7, z0=0.1, w0=0.1, block_size=16)
    )


def square_512(arr):
    h, w = arr.shape[:2]
    s = min(h, w)
    arr = arr[(h - s) // 2:(h - s) // 2 + s, (w - s) // 2:(w - s) // 2 + s]
    if s != 512:
        arr = util.img_as_ubyte(transform.resize(arr, (512, 512), anti_aliasing=True))
    return ImageBuffer.from_array(np.ascontiguousarray(arr))


def analytic_psnr(plan, n_bits, n_pixels):
    per_pixel = sum(metrics.expected_lsb_mse(k) for k in plan.bits_per_channel if k)
    return metrics.psnr_from_mse(n_bits / plan.bpp * per_pixel / (n_pixels * plan.channels))


def run(cfg: Config):
    cfg.out.mkdir(parents=True, exist_ok=True)
    secret = ImageBuffer.from_array(np.ascontiguousarray(data.camera()[::2, ::2]))
    save_image(secret, cfg.out / "secret.png")
    save_key(cfg.key, cfg.out / "key.txt")
    n_bits = 8 * secret.samples.size

    rows = []
    for name in cfg.covers:
        cover = square_512(getattr(data, name)())
        save_image(cover, cfg.out / f"{name}_cover.png")
        h_cover = metrics.histogram(cover)
        (cfg.out / f"{name}_cover_hist.csv").write_text(
            "".join(metrics.histogram_csv(h_cover, c) for c in range(3)))
        for bpp in cfg.rates:
            plan = BitPlan.preset(bpp)
            result = hide(cover, secret, cfg.key, plan)
            assert reveal(result.stego, cfg.key, result.manifest) == secret
            report = metrics.QualityReport.compare(cover, result.stego)
            tag = f"{name}_{bpp}bpp"
            save_image(result.stego, cfg.out / f"{tag}_stego.png")
            save_image(metrics.diff_image(cover, result.stego), cfg.out / f"{tag}_diff.png")
            (cfg.out / f"{tag}_stego_hist.csv").write_text(
                "".join(metrics.histogram_csv(metrics.histogram(result.stego), c) for c in range(3)))
            if bpp == cfg.rates[0]:
                save_image(result.encrypted, cfg.out / "secret_encrypted.png")
            rows.append({
                "cover": name, "bpp": bpp, "plan": str(plan),
                "psnr_db": round(report.psnr_db, 3),
                "analytic_db": round(analytic_psnr(plan, n_bits, cover.n_pixels), 3),
                "published_band_db": f"{min(PUBLISHED[bpp])}-{max(PUBLISHED[bpp])}",
                "max_abs_diff": report.max_abs_diff,
                "hist_corr": round(report.histogram_correlation, 5),
            })

    with open(cfg.out / "summary.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)

    print(f"{'cover':<10}{'bpp':>4}  {'PSNR':>7}  {'analytic':>8}  {'published':>9}  {'maxdiff':>7}  {'hist r':>7}")
    for r in rows:
        print(f"{r['cover']:<10}{r['bpp']:>4}  {r['psnr_db']:>7.2f}  {r['analytic_db']:>8.2f}  "
              f"{r['published_band_db']:>9}  {r['max_abs_diff']:>7}  {r['hist_corr']:>7.4f}")
    bits = metrics.key_space_bits(len(ChaoticKey.SECRET_COMPONENTS))
    print(f"key space: {bits:.1f} bits (~10^{bits * np.log10(2):.0f})")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", type=Path, default=Config.out)
    p.add_argument("--rates", type=int, nargs="+", default=list(Config.rates))
    args = p.parse_args()
    run(Config(out=args.out, rates=tuple(args.rates)))


if __name__ == "__main__":
    main()
