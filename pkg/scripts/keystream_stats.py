"""Keystream statistics over random keys: chi-square uniformity and
x0-avalanche, plus how often uniformly drawn control parameters land in a
periodic window.

    python scripts/keystream_stats.py --keys 20 --bytes 1000000
"""

import argparse
from dataclasses import dataclass, replace

import numpy as np

from chaostego import chaos, metrics


@dataclass
class Config:
    keys: int = 20
    n_bytes: int = 1_000_000
    seed: int = 0


def run(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    print(f"{'mu':>8} {'lambda':>8} {'chi2':>8} {'avalanche':>9}")
    chi = []
    for _ in range(cfg.keys):
        key = chaos.random_key(rng)
        ks = chaos.gen_key_material(key, cfg.n_bytes, 1).keystream
        nudged = chaos.gen_key_material(replace(key, x0=key.x0 + 1e-10), min(cfg.n_bytes, 100_000), 1).keystream
        aval = metrics.bit_error_rate(ks[: nudged.size], nudged)
        chi.append(metrics.chi_square_uniform(ks))
        print(f"{key.mu:8.4f} {key.lam:8.4f} {chi[-1]:8.1f} {aval:9.4f}")
    print(f"chi-square: max {max(chi):.1f}, mean {np.mean(chi):.1f} (255 d.o.f., bar 350)")

    # how many valid-looking draws does keygen throw away as insensitive?
    draws, weak = 2000, 0
    for _ in range(draws):
        mu = float(rng.uniform(*chaos.MU_RANGE))
        key = chaos.ChaoticKey(mu, 3.99, float(rng.uniform(0.01, 0.99)), 0.7, 0.1, 0.1)
        try:
            chaos.validate_key(key)
        except chaos.DegenerateOrbit:
            weak += 1
            continue
        weak += not chaos.is_sensitive(key)
    print(f"uniform mu in [3.57, 4]: {weak / draws:.1%} of draws are insensitive to x0")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--keys", type=int, default=Config.keys)
    p.add_argument("--bytes", dest="n_bytes", type=int, default=Config.n_bytes)
    p.add_argument("--seed", type=int, default=Config.seed)
    run(Config(**vars(p.parse_args())))


if __name__ == "__main__":
    main()
