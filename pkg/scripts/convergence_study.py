#!/usr/bin/env python3
"""Radiated power and directivity versus angular step for the element and 8x8 array."""

from patcharray import AngularGrid, ArrayLayout, default_geometry, directivity_dbi, total_pattern

STEPS = (2.0, 1.0, 0.5, 0.25, 0.125)


def main():
    geo = default_geometry()
    for n in (1, 8):
        ref = total_pattern(geo, ArrayLayout(n, n), AngularGrid(STEPS[-1], STEPS[-1]))
        print(f"{n}x{n}: reference step {STEPS[-1]} deg, prad {ref.prad:.12g}")
        print(f"  {'step':>6} {'prad rel err':>14} {'D (dBi)':>10} {'dD (dB)':>10}")
        for step in STEPS[:-1]:
            p = total_pattern(geo, ArrayLayout(n, n), AngularGrid(step, step))
            print(f"  {step:>6} {abs(p.prad - ref.prad) / ref.prad:>14.2e} "
                  f"{directivity_dbi(p):>10.5f} {directivity_dbi(p) - directivity_dbi(ref):>+10.2e}")


if __name__ == "__main__":
    main()
