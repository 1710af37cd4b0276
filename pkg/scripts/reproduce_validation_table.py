"""Recompute the k_eff validation table (PDE vs effective-damping boundedness angles).

    python3 scripts/reproduce_validation_table.py --out results/table.csv --jobs 4
"""

import argparse
import os

from selfrecovery.experiments import (APPENDIX_ROWS, emit_table_csv, ensure_parent, parse_config,
                                      render_config, run_validation_table)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="results/validation_table.csv")
    parser.add_argument("--grid-points", type=int, default=200)
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    args = parser.parse_args()

    base = parse_config(f"preset = table-3\ngrid_points = {args.grid_points}\n")
    rows = run_validation_table(base, [(ri, ro) for ri, ro, *_ in APPENDIX_ROWS], args.jobs)
    ensure_parent(args.out)
    emit_table_csv(rows, args.out)
    with open(os.path.splitext(args.out)[0] + ".cfg", "w", encoding="utf-8") as handle:
        handle.write(render_config(base))

    print(f"{'R_i':>5} {'R_o':>6} {'gap%':>7} {'PDE':>9} {'ref':>8} {'k_eff':>9} "
          f"{'ref':>8} {'err%':>6} {'ref':>7}")
    for row, (_, _, pde, keff, err) in zip(rows, APPENDIX_ROWS):
        sim = f"{row.angle_pde:9.2f}" if row.settled else f"{'unsettled':>9}"
        e = f"{row.percent_error:6.2f}" if row.settled else f"{'-':>6}"
        print(f"{row.inner_cm:5g} {row.outer_cm:6g} {row.gap_percent:7.2f} {sim} {pde:8g} "
              f"{row.angle_keff:9.2f} {keff:8g} {e} {err:7.2f}")


if __name__ == "__main__":
    main()
