#!/usr/bin/env python3
"""Mini run of the experiment pipeline (a desk-scale run takes ~4 minutes;
this one takes seconds and shows the same moving parts).

Random 5-agent instances, the three mechanisms sampled over random item
orders, welfare ratios against the exact offline optima, CSV at the end.
The real configurations live in configs/desk.json and configs/paper.json.
"""

import io

from fairdiv import ExperimentConfig, run_experiment, write_csv


def main():
    config = ExperimentConfig(
        num_agents=5,
        item_counts=(6, 10),
        instance_count=5,
        sample_count=300,
        master_seed=99,
    )
    rows = run_experiment(config)
    print(f"{'mechanism':10s} {'m':>3s} {'gini':>8s} {'envy':>8s} {'util':>8s} {'egal':>8s}")
    for row in rows:
        print(f"{row.mechanism:10s} {row.m:3d} {row.gini:8.4f} {row.envy:8.4f} "
              f"{row.util_ratio:8.4f} {row.egal_ratio:8.4f}")

    buf = io.StringIO()
    write_csv(rows, buf)
    print("\nCSV output:")
    print(buf.getvalue())


if __name__ == "__main__":
    main()
