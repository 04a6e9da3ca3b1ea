"""Shrink generated models of the hand-built normal forms and print the size accounting."""

from __future__ import annotations

import argparse
import json
from dataclasses import dataclass, field

import numpy as np

from oinv2.generators import FAMILIES
from oinv2.shrinker import shrink


@dataclass
class Config:
    sizes: list[int] = field(default_factory=lambda: [50, 250, 1000])
    seed: int = 0
    force: bool = True  # run the construction even when n is already below the bound
    out: str | None = None  # write every report as JSON lines


def main(cfg: Config):
    sink = open(cfg.out, "w") if cfg.out else None
    print(f"{'family':12} {'n':>5} {'M':>2} {'|a|':>4} {'bound':>6} {'out':>5}  W0 W1 W2 W3  rewired  verified")
    for fam in FAMILIES:
        for n in cfg.sizes:
            nf = fam.nf()
            s = fam.model(n, np.random.default_rng(cfg.seed + n))
            r = shrink(s, nf, force=cfg.force, strict=False)
            ws = " ".join(str(len(w)) for w in r.W)
            print(f"{fam.name:12} {n:5} {r.M:2} {r.alpha:4} {r.bound:6} {r.output_size:5}  {ws}  "
                  f"{len(r.rewired):7}  {r.verified}")
            if sink:
                sink.write(json.dumps({"family": fam.name, **r.to_dict()}) + "\n")
    if sink:
        sink.close()


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", type=int, nargs="+", default=Config().sizes)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-force", dest="force", action="store_false")
    p.add_argument("--out")
    main(Config(**vars(p.parse_args())))
