"""OneMax convergence over many seeds.

Writes best-so-far fitness per generation for every seed as CSV (one column
per seed) and prints how many seeds reached the threshold.
"""

import argparse
import csv
import sys
import time

from bitchrom import GAConfig, LayoutSpec, run


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--length", type=int, default=128)
    ap.add_argument("--pop", type=int, default=100)
    ap.add_argument("--gens", type=int, default=300)
    ap.add_argument("--pc", type=float, default=0.9)
    ap.add_argument("--elitism", type=int, default=1)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--width", type=int, default=64)
    ap.add_argument("--signed", action="store_true")
    ap.add_argument("--threshold", type=float, default=0.95, help="fraction of L")
    ap.add_argument("--csv", help="write curves here")
    args = ap.parse_args()

    curves, hits = {}, 0
    t0 = time.perf_counter()
    for seed in range(args.seeds):
        cfg = GAConfig(population_size=args.pop, chromosome_length=args.length,
                       crossover_probability=args.pc, mutation_probability=1 / args.length,
                       layout=LayoutSpec(args.width, args.signed), elitism_count=args.elitism,
                       max_generations=args.gens, seed=seed)
        result = run(cfg)
        curves[seed] = result.best_so_far
        ok = result.best.fitness >= args.threshold * args.length
        hits += ok
        print(f"seed {seed:3d}  best {result.best.fitness:5.0f}  {'ok' if ok else '--'}",
              file=sys.stderr)
    elapsed = time.perf_counter() - t0
    print(f"{hits}/{args.seeds} seeds reached {args.threshold:.0%} of L={args.length} "
          f"({elapsed:.1f}s)", file=sys.stderr)

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["generation"] + [f"seed{s}" for s in curves])
            for g in range(args.gens + 1):
                w.writerow([g] + [c[g] if g < len(c) else c[-1] for c in curves.values()])


if __name__ == "__main__":
    main()
