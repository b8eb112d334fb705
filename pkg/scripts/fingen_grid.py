"""Refute every pair of a seed list on a grid of scales and tabulate the witness intervals.

    python scripts/fingen_grid.py [--seeds :0 :1 1:0 ...] [--scales 1 2 4]
"""

import argparse
import itertools
import time

from coarse_subsets.adfamily import BinarySeed
from coarse_subsets.certificates import CertificateDocument, validate_certificate
from coarse_subsets.fingen import refute_fingen_pair

DEFAULT_SEEDS = [":0", ":1", ":01", ":10", ":001", "1:0", "0:1", "01:0"]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", nargs="+", default=DEFAULT_SEEDS)
    ap.add_argument("--scales", nargs="+", type=int, default=[1, 2, 4])
    args = ap.parse_args()
    seeds = [BinarySeed.parse(s) for s in args.seeds]
    start = time.perf_counter()
    print(f"{'seed A':>8} {'seed B':>8} {'r':>2} {'t':>2} {'m':>4} {'s':>4}  valid")
    total = 0
    for (a, b), r, t in itertools.product(itertools.combinations(seeds, 2), args.scales, args.scales):
        cert = refute_fingen_pair(a, b, r, t)
        ok = validate_certificate(CertificateDocument.from_payload(cert.to_payload())).status == "valid"
        print(f"{str(a):>8} {str(b):>8} {r:>2} {t:>2} {cert.m:>4} {cert.inverse.m:>4}  {ok}")
        total += 1
    print(f"{total} certificates in {time.perf_counter() - start:.2f}s")


if __name__ == "__main__":
    main()
