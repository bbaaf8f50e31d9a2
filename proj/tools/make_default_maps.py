#!/usr/bin/env python3
#
# Copyright (C) 2026 The ecohev Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License. You may obtain a copy of
# the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations under
# the License.

"""Regenerate the bundled engine and emission maps in data/.

Fuel follows a Willans line, fuel power = (P + friction(omega)) / eta_indicated,
with a quadratic enrichment penalty above part load.
Emission maps are engine-out indices (g per kg fuel) times the fuel rate.
"""

import argparse
import json
import math
import pathlib

RPM = math.pi / 30.0
LHV = 43000.0  # J/g
ETA_IND = 0.42
P_MAX = 72000.0

OOL_KW = [0, 5, 10, 20, 30, 40, 50, 60, 72]
OOL_RPM = [1000, 1100, 1250, 1600, 2000, 2500, 3200, 4000, 5200]

OMEGA = [round(r * RPM, 6) for r in [1000 + i * (4200 / 11) for i in range(12)]]
POWER = [round(i * P_MAX / 11, 6) for i in range(12)]


P_ENRICH = 45000.0  # W, onset of full-load enrichment
K_ENRICH = 0.5


def fuel_rate(omega, p):
    friction = 17.03 * omega + 0.01926 * omega * omega
    enrich = 1.0 + K_ENRICH * max(0.0, (p - P_ENRICH) / (P_MAX - P_ENRICH)) ** 2
    return (p + friction) / (ETA_IND * LHV) * enrich


def hc_index(omega, p):
    # quench layers and cool light-load combustion raise HC at low load
    return 5.0 + 5.0 * math.exp(-p / 8000.0) + 1.5 * (omega / (1000 * RPM) - 1.0)


def co_index(omega, p):
    # enrichment at high load
    return 15.0 + 60.0 * max(0.0, (p - 45000.0) / 27000.0) ** 2


def nox_index(omega, p):
    # peak combustion temperature rises with load
    return 8.0 + 6.0 * p / P_MAX + 10.0 * (p / P_MAX) ** 2


def grid(fn):
    return [[round(fn(w, p), 9) for p in POWER] for w in OMEGA]


def dump(obj):
    # one map row per line keeps the tables readable in diffs
    text = json.dumps(obj, indent=2)
    out, buf, depth = [], [], 0
    for line in text.splitlines():
        s = line.strip()
        if depth:
            buf.append(s)
            depth += s.count("[") - s.count("]")
            if depth == 0:
                out.append(indent + " ".join(buf))
                buf = []
            continue
        if s.endswith("[") and not s.startswith('"values"'):
            indent = line[: len(line) - len(line.lstrip())]
            buf, depth = [s], 1
            continue
        out.append(line)
    return "\n".join(out) + "\n"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    args = ap.parse_args()
    out = pathlib.Path(args.out)

    engine = {
        "schema": "ecohev.engine_maps",
        "schema_version": 1,
        "p_max": P_MAX,
        "ool": {"power": [k * 1000.0 for k in OOL_KW], "omega": [round(r * RPM, 6) for r in OOL_RPM]},
        "fuel": {"omega": OMEGA, "power": POWER, "values": grid(fuel_rate)},
    }

    def em(index):
        return lambda w, p: index(w, p) * fuel_rate(w, p) / 1000.0

    emissions = {
        "schema": "ecohev.emission_maps",
        "schema_version": 1,
        "omega": OMEGA,
        "power": POWER,
        "hc": grid(em(hc_index)),
        "co": grid(em(co_index)),
        "nox": grid(em(nox_index)),
    }
    (out / "engine_maps_default.json").write_text(dump(engine))
    (out / "emission_maps_default.json").write_text(dump(emissions))


if __name__ == "__main__":
    main()
