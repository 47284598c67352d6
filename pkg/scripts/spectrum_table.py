#!/usr/bin/env python3
"""Tabulate second eigenvalues of the expander families against the
Ramanujan bound 2*sqrt(s-1). Writes CSV to stdout."""

import math
import sys

sys.path.insert(0, "src")

from bpcodes.graphs import (
    complete_graph,
    cycle_labeled_graph,
    klein_quartic_graph,
    lps_graph,
    second_eigenvalue,
)


def main():
    rows = []
    for ell in (5, 9, 17, 33):
        g = cycle_labeled_graph(ell)
        rows.append((f"cycle:{ell}", g))
    rows.append(("complete:12", complete_graph(12)))
    rows.append(("klein", klein_quartic_graph()[0]))
    for p, q in ((5, 13), (5, 17), (13, 17)):
        rows.append((f"lps:{p},{q}", lps_graph(p, q)[0]))

    print("graph,n,s,lambda2,ramanujan_bound,is_ramanujan")
    for name, g in rows:
        lam2 = second_eigenvalue(g)
        bound = 2 * math.sqrt(g.s - 1)
        print(f"{name},{g.n},{g.s},{lam2:.6f},{bound:.6f},{lam2 <= bound}")


if __name__ == "__main__":
    main()
