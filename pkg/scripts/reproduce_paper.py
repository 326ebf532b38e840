#!/usr/bin/env python3
"""Write the 29 GHz design progression (1x1 .. 8x8) as data files.

    python scripts/reproduce_paper.py --outdir results/
"""

import argparse
import json
from pathlib import Path

from patcharray import (
    AngularGrid,
    ArrayLayout,
    array_metrics,
    default_geometry,
    edge_feed,
    match_feed,
    s11_sweep,
    total_pattern,
)
from patcharray.array import paper_progression, progression_table
from patcharray.radiation import cut_to_csv, pattern_to_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", type=Path, default=Path("results"))
    ap.add_argument("--step", type=float, default=0.5)
    ap.add_argument("--full-grid", action="store_true", help="also write full-grid pattern CSVs")
    args = ap.parse_args()
    out = args.outdir
    out.mkdir(parents=True, exist_ok=True)

    geo = default_geometry()
    grid = AngularGrid(args.step, args.step)
    (out / "geometry.json").write_text(geo.to_json() + "\n")

    feed = match_feed(geo)
    (out / "feed.json").write_text(feed.to_json() + "\n")
    f0 = geo.f0_hz
    (out / "s11_matched.s1p").write_text(s11_sweep(feed, geo, 27e9, 31e9, 401).to_touchstone())
    (out / "s11_edge.s1p").write_text(s11_sweep(edge_feed(geo), geo, 27e9, 31e9, 401).to_touchstone())

    metrics = {}
    for n in (1, 2, 4, 8):
        layout = ArrayLayout(n, n)
        p = total_pattern(geo, layout, grid)
        tag = f"{n}x{n}"
        for plane in ("E", "H"):
            (out / f"pattern_{tag}_{plane}.csv").write_text(cut_to_csv(p, plane))
        if args.full_grid:
            (out / f"pattern_{tag}.csv").write_text(pattern_to_csv(p))
        metrics[tag] = array_metrics(geo, layout, grid).to_dict()
    (out / "metrics.json").write_text(json.dumps(metrics, indent=2) + "\n")

    rows = paper_progression(geo, grid=grid)
    (out / "progression.json").write_text(json.dumps(rows, indent=2) + "\n")
    table = progression_table(rows)
    (out / "progression.txt").write_text(table)
    print(f"design at {f0 / 1e9:g} GHz: W={geo.width_mm:.4f} mm L={geo.length_mm:.4f} mm, "
          f"inset y0={feed.inset_depth_mm:.4f} mm")
    print(table, end="")


if __name__ == "__main__":
    main()
