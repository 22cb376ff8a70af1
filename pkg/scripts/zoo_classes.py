"""Tabulate local modular representatives and exactness verdicts over the zoo.

    python3 scripts/zoo_classes.py [--bound 4] [--json]
"""

from __future__ import annotations

import argparse
import json
import time

from qmodular import modular, zoo
from qmodular.render import render_elem


def run(bound: int):
    rows = []
    for name, Q in zoo.homological_zoo():
        start = time.perf_counter()
        rep = modular.local_rep(Q)
        verdict = modular.solve_exactness(rep, Q, bound)
        rows.append({"field": name, "chart": " ".join(Q.chart.names), "rep": render_elem(rep),
                     **verdict.to_record(), "seconds": round(time.perf_counter() - start, 4)})
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bound", type=int, default=4, help="degree bound for the exactness search")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    rows = run(args.bound)
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    width = max(len(r["field"]) for r in rows)
    for r in rows:
        status = r["status"] if r["complete"] else r["status"] + " (incomplete)"
        witness = f"  witness {r['witness']}" if r["witness"] is not None else ""
        print(f"{r['field']:<{width}}  phi = {r['rep']:<28} {status}{witness}")


if __name__ == "__main__":
    main()
