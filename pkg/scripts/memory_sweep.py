"""Packed vs one-byte-per-allele footprint as chromosome length grows."""

import argparse
import csv
import sys

from bitchrom import ALL_LAYOUTS, memory_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-exp", type=int, default=7, help="sweep L = 10^0 .. 10^max-exp")
    args = ap.parse_args()

    w = csv.writer(sys.stdout)
    w.writerow(["layout", "length", "naive_bytes", "packed_bytes", "utilization_packed", "ratio"])
    lengths = sorted({int(10 ** (e / 4)) for e in range(4 * args.max_exp + 1)})
    for layout in ALL_LAYOUTS:
        for L in lengths:
            if L > layout.metadata_cap:
                break
            r = memory_report(L, layout)
            w.writerow([layout.name, L, r.naive_bytes, r.packed_bytes,
                        f"{float(r.utilization_packed):.6f}", f"{float(r.ratio):.6f}"])


if __name__ == "__main__":
    main()
