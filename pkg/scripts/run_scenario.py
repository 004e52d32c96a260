"""Run a scenario config and write raw rows plus a per-sweep-point summary.

    python3 scripts/run_scenario.py scripts/configs/scenario1_link.json --outdir results
"""

import argparse
import pathlib
import time

from hnnroute.experiments import ScenarioConfig, rows_to_csv, run_scenario, summary_to_csv


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("config", nargs="+")
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--replications", type=int)
    args = ap.parse_args()
    out = pathlib.Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for path in args.config:
        cfg = ScenarioConfig.load(path)
        if args.replications:
            cfg.replications = args.replications
        t0 = time.perf_counter()
        rows = run_scenario(cfg)
        (out / f"{cfg.scenario_id}_rows.csv").write_text(rows_to_csv(rows, cfg))
        (out / f"{cfg.scenario_id}_summary.csv").write_text(summary_to_csv(rows, cfg))
        print(f"{cfg.scenario_id}: {len(rows)} rows in {time.perf_counter() - t0:.1f}s")
        sweep_nodes = len(cfg.node_counts) > 1
        for sel in (s.value for s in cfg.selectors):
            acc = {}
            for row in rows:
                if row.selector == sel:
                    acc.setdefault(row.node_count if sweep_nodes else row.R, []).append(row)
            cells = "  ".join(
                f"{k:g}: rel={sum(r.set_reliability for r in v) / len(v):.3f} "
                f"paths={sum(r.num_paths for r in v) / len(v):.2f}"
                for k, v in sorted(acc.items()))
            print(f"  {sel:<12} {cells}")


if __name__ == "__main__":
    main()
