import json
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
CONFIG_DIR = REPO_ROOT / "configs"

# Stabilized packet groups of the bundled data, derived by brute-force
# enumeration (see scripts/regen_expected.py).
BUNDLED_EXPECTED_S = {
    "split_r2_q5_n4": (),
    "swap_q3_n2": (),
    "ramified_r1_q7_n3": (),
    "minus_one_r2_q5_n4": (2, 2),
    "rot4_r2_q5_n4": (2,),
    "s3_ramified_q7_n2": (),
}

# Per-level values for the two small bundled data, derived by enumerating
# (Z/N)^r elementwise; note the odd/even oscillation for the swap datum.
SWAP_LEVEL_S = {1: (2,), 2: (), 3: (2,), 4: ()}
RAMIFIED_R1_LEVEL_S = {1: (), 2: (), 3: (), 4: ()}


def load_config(name: str) -> dict:
    return json.loads((CONFIG_DIR / f"{name}.json").read_text())


@pytest.fixture(scope="session")
def bundled_configs() -> dict:
    return {p.stem: json.loads(p.read_text())
            for p in sorted(CONFIG_DIR.glob("*.json"))}
