#!/usr/bin/env python3
# Copyright 2026 The stcorridor Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the scenario fixtures under fixtures/."""

import argparse
import json
import pathlib

ROAD = {"s_min": 0.0, "s_max": 150.0, "l_min": -1.75, "l_max": 5.25,
        "speed_limit": 15.0}


def ego(s=10.0, l=0.0, vs=0.0, vl=0.0, as_=0.0, al=0.0):
    return {"s": s, "l": l, "vs": vs, "vl": vl, "as": as_, "al": al}


def obstacle(kind, length, width, s, l, vs=0.0, vl=0.0):
    return {"kind": kind, "length": length, "width": width, "s": s, "l": l,
            "vs": vs, "vl": vl}


def merging(vs=7.0, as_=0.0, vl=0.0, al=0.0):
    # Ego merges left between a blocked lane end and a faster car behind.
    return {
        "ego": ego(vs=vs, vl=vl, as_=as_, al=al),
        "road": ROAD,
        "obstacles": [
            obstacle("static", 10.0, 3.4, 80.0, 0.2),
            obstacle("longitudinal_lateral", 4.5, 2.0, 24.35, 0.0, 8.0, 0.5),
            obstacle("longitudinal", 4.4, 2.2, -2.0, 3.4, 8.0),
        ],
        "horizon": 7.0, "dt": 0.1,
        "goal": {"s_min": 40.0, "s_max": 70.0, "l_min": 2.2, "l_max": 3.8},
    }


def overtaking():
    return {
        "ego": ego(vs=7.0),
        "road": ROAD,
        "obstacles": [obstacle("longitudinal", 4.5, 2.0, 25.0, 0.0, 5.0)],
        "horizon": 7.0, "dt": 0.1,
        "goal": {"s_min": 70.0, "s_max": 85.0, "l_min": -0.8, "l_max": 0.8},
    }


def left_turn():
    # Crossing traffic sweeps the ego lane ahead; the ego creeps up and waits.
    return {
        "ego": ego(vs=1.0, as_=0.5),
        "road": {"s_min": 0.0, "s_max": 60.0, "l_min": -1.75, "l_max": 1.75,
                 "speed_limit": 10.0,
                 "curvature": [{"s_from": 20.0, "s_to": 45.0, "kappa": 0.1}]},
        "obstacles": [
            obstacle("longitudinal_lateral", 2.0, 4.5, 30.0, -12.0, 0.0, 6.0),
            obstacle("longitudinal_lateral", 2.0, 4.5, 34.0, 14.0, 0.0, -5.0),
        ],
        "horizon": 7.0, "dt": 0.1,
        "goal": {"s_min": 18.0, "s_max": 24.0, "l_min": -0.8, "l_max": 0.8},
    }


FIXTURES = {
    "merging": merging(),
    "merging_extreme": merging(vs=10.5, as_=2.0, vl=2.0, al=1.2),
    "merging_vs9": merging(vs=9.0, as_=2.0, vl=2.0, al=1.2),
    "overtaking": overtaking(),
    "left_turn": left_turn(),
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=pathlib.Path,
                        default=pathlib.Path(__file__).parent.parent / "fixtures")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, doc in FIXTURES.items():
        (args.out / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
