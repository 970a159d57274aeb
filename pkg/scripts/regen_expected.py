#!/usr/bin/env python3
"""Recompute the brute-force reference values frozen in the test suite.

Prints the stabilized packet group of each bundled config and the
per-level values of the two small data, all recomputed by elementwise
enumeration, so the constants in tests/conftest.py can be audited.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from packetgroup import oracle
from packetgroup.datum import validate
from packetgroup.residue import packet_group
from packetgroup.sharp import y_gamma_sharp, y_sharp

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"
CAP = 10 ** 6


def brute_level(d, m):
    amb = oracle.brute_iota_image(d, y_gamma_sharp(d), m, cap=CAP)
    sub = oracle.brute_iota_image(d, y_sharp(d), m, cap=CAP)
    return oracle.brute_quotient(d.q ** m - 1, amb, sub, cap=CAP)


def main() -> None:
    print("BUNDLED_EXPECTED_S = {")
    for path in sorted(CONFIG_DIR.glob("*.json")):
        d = validate(json.loads(path.read_text()))
        group, _ = packet_group(d)
        # confirm the stabilized value by enumeration where feasible
        confirmations = []
        for m in [lv for lv, _ in packet_group(d)[1]]:
            if (d.q ** m - 1) ** d.rank <= CAP:
                confirmations.append((m, brute_level(d, m).invariant_factors))
        print(f"    {path.stem!r}: {group.invariant_factors!r},"
              f"  # enumeration: {confirmations}")
    print("}")

    for name in ("swap_q3_n2", "ramified_r1_q7_n3"):
        d = validate(json.loads((CONFIG_DIR / f"{name}.json").read_text()))
        table = {m: brute_level(d, m).invariant_factors for m in (1, 2, 3, 4)}
        print(f"{name} per-level: {table}")


if __name__ == "__main__":
    main()
