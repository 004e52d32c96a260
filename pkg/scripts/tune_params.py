"""PSO-tune the solver parameters and compare iteration counts with the reference setting.

    python3 scripts/tune_params.py --instances 20 --runs 200 --population 10 --iters 30
"""

import argparse
import json
import time

import numpy as np

from hnnroute.experiments import build_tuning_suite
from hnnroute.hnn import REFERENCE_PARAMS, TUNED_PARAMS, solve
from hnnroute.pso import PsoConfig, hnn_fitness, tune


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--instances", type=int, default=20)
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--population", type=int, default=10)
    ap.add_argument("--iters", type=int, default=20)
    ap.add_argument("--max-euler", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="tuned_params.json")
    args = ap.parse_args()

    suite = build_tuning_suite(args.instances, runs_per_eval=args.runs, max_iters=args.max_euler)
    t0 = time.perf_counter()
    res = tune(suite, PsoConfig(population=args.population, max_iterations=args.iters,
                                seed=args.seed))
    print(f"tuned in {time.perf_counter() - t0:.0f}s over {res.iterations} PSO iterations")
    print(f"fitness tuned={res.fitness:.4f} reference={res.reference_fitness:.4f} "
          f"preset={hnn_fitness(TUNED_PARAMS, suite):.4f}")
    print("params:", json.dumps(res.params.to_dict()))
    with open(args.out, "w") as fh:
        json.dump({"params": res.params.to_dict(), "fitness": res.fitness,
                   "reference_fitness": res.reference_fitness, "trace": res.trace}, fh, indent=2)

    for name, p in [("reference", REFERENCE_PARAMS), ("preset", TUNED_PARAMS),
                    ("found", res.params)]:
        its = [solve(inst, p, seed=k).iterations for k, inst in enumerate(suite.instances)]
        print(f"mean Euler iterations {name:>9}: {np.mean(its):.0f}")


if __name__ == "__main__":
    main()
