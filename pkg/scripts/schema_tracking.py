"""Observed schema counts in a OneMax run next to the one-step growth
estimate computed from the previous generation."""

import argparse
import csv
import sys

from bitchrom import GAConfig, Schema, SchemaTheoremInputs, count_matching, expected_schema_count, run


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pattern", default="11" + "*" * 30)
    ap.add_argument("--pop", type=int, default=100)
    ap.add_argument("--gens", type=int, default=40)
    ap.add_argument("--pc", type=float, default=0.9)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    schema = Schema(args.pattern)
    L = len(schema)
    cfg = GAConfig(population_size=args.pop, chromosome_length=L, crossover_probability=args.pc,
                   max_generations=args.gens, seed=args.seed)
    rows = []
    prev = None

    def track(pop):
        nonlocal prev
        members = [m for m in pop if schema.matches(m.chromosome)]
        observed = len(members)
        f_pop = pop.mean_fitness()
        predicted = None
        if prev is not None and prev[0] > 0:
            count, f_schema, f_prev = prev
            predicted = expected_schema_count(
                schema, SchemaTheoremInputs(count, f_schema, f_prev, L, cfg.crossover_probability, cfg.pm)
            )
        f_schema = sum(m.fitness for m in members) / observed if observed else 0.0
        rows.append((pop.generation, observed, predicted, f_schema, f_pop))
        assert observed == count_matching(pop, schema)
        prev = (observed, f_schema, f_pop)

    run(cfg, on_generation=track)
    w = csv.writer(sys.stdout)
    w.writerow(["generation", "observed", "predicted", "schema_fitness", "population_fitness"])
    for g, obs, pred, fs, fp in rows:
        w.writerow([g, obs, "" if pred is None else f"{pred:.3f}", f"{fs:.3f}", f"{fp:.3f}"])


if __name__ == "__main__":
    main()
