#!/usr/bin/env python3
"""Compute the packet group of every bundled config and print a table."""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from packetgroup.datum import validate
from packetgroup.residue import packet_group
from packetgroup.sharp import y_gamma_sharp, y_sharp

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def main() -> None:
    header = f"{'config':<24} {'r':>2} {'q':>3} {'n':>3} {'e':>3} {'S':<12} levels"
    print(header)
    print("-" * len(header))
    for path in sorted(CONFIG_DIR.glob("*.json")):
        cfg = json.loads(path.read_text())
        d = validate(cfg)
        group, trace = packet_group(d)
        label = str(group)
        levels = ",".join(str(m) for m, _ in trace)
        print(f"{path.stem:<24} {d.rank:>2} {d.q:>3} {d.n:>3} {d.e:>3} "
              f"{label:<12} {levels}")
        sharp_idx = y_sharp(d).index_in_ambient()
        gamma_idx = y_gamma_sharp(d).index_in_ambient()
        print(f"{'':<24} [Z^r : Y#] = {sharp_idx}, [Z^r : YG#] = {gamma_idx}")


if __name__ == "__main__":
    main()
