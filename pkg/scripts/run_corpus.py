"""Invariance verdicts for the shipped corpus, and validity verdicts for its order-free part."""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass

from oinv2.corpus import CORPUS, ORDER_FREE
from oinv2.formula import parse
from oinv2.invariance import check_order_invariance, reduce_validity


@dataclass
class Config:
    cap: int = 3
    jobs: int = 1
    json: bool = False


def main(cfg: Config):
    rows = []
    for text in CORPUS:
        t = time.perf_counter()
        v = check_order_invariance(parse(text), cfg.cap, jobs=cfg.jobs)
        row = {"formula": text, "invariant": v.invariant, "seconds": round(time.perf_counter() - t, 4)}
        if not v.invariant:
            row["counterexample_size"] = v.counterexample.n
        if text in ORDER_FREE:
            r = reduce_validity(parse(text), cfg.cap, jobs=cfg.jobs)
            row["valid"] = r.valid
            row["single_element_case"] = r.corner_case
        rows.append(row)
    if cfg.json:
        print(json.dumps({"config": asdict(cfg), "rows": rows}, indent=2))
        return
    for row in rows:
        verdict = "invariant" if row["invariant"] else f"NOT invariant (size {row['counterexample_size']})"
        extra = ""
        if "valid" in row:
            extra = "  valid" if row["valid"] else "  not valid" + (" [1-element]" if row["single_element_case"] else "")
        print(f"{row['seconds']:7.3f}s  {verdict:28} {row['formula']}{extra}")
    print(f"{sum(not r['invariant'] for r in rows)}/{len(rows)} not invariant up to size {cfg.cap}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--cap", type=int, default=Config.cap)
    p.add_argument("--jobs", type=int, default=Config.jobs)
    p.add_argument("--json", action="store_true")
    main(Config(**vars(p.parse_args())))
