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

import json
import math
import os
import pathlib

import numpy as np
import pytest

import stcorridor

FIXTURES = pathlib.Path(
    os.environ.get(
        "STCORRIDOR_FIXTURES_DIR",
        pathlib.Path(__file__).resolve().parents[2] / "fixtures",
    )
)


def fixture(name):
    return str(FIXTURES / f"{name}.json")


def test_plan_both_modes_on_merging():
    result = stcorridor.plan(fixture("merging"))
    assert set(result) == {"trapezoidal", "cuboidal"}
    trap, cub = result["trapezoidal"], result["cuboidal"]
    assert trap["status"] == "optimal"
    assert cub["status"] == "optimal"
    assert trap["objective"] <= cub["objective"] * (1 + 1e-6) + 1e-6
    samples = trap["samples"]
    assert samples.shape[1] == len(stcorridor.SAMPLE_COLUMNS)
    assert samples[0, 0] == 0.0
    assert np.all(np.diff(samples[:, 0]) > 0)
    assert trap["max_abs_as"] == pytest.approx(np.abs(samples[:, 5]).max())


def test_samples_start_at_the_ego_state():
    with open(fixture("overtaking")) as f:
        scenario = json.load(f)
    out = stcorridor.plan(fixture("overtaking"), mode="trap", rate_hz=20.0)
    row = out["trapezoidal"]["samples"][0]
    ego = scenario["ego"]
    assert row[1] == pytest.approx(ego["s"], abs=1e-6)
    assert row[2] == pytest.approx(ego["l"], abs=1e-6)


def test_extreme_start_is_infeasible_only_with_cuboids():
    out = stcorridor.plan(fixture("merging_extreme"))
    assert out["trapezoidal"]["status"] == "optimal"
    assert out["cuboidal"]["status"] == "infeasible"
    assert out["cuboidal"]["objective"] is None
    assert out["cuboidal"]["samples"].shape == (0, 9)


def test_plan_json_matches_plan():
    text = pathlib.Path(fixture("left_turn")).read_text()
    a = stcorridor.plan_json(text, mode="trap")["trapezoidal"]["objective"]
    b = stcorridor.plan(fixture("left_turn"), mode="trap")["trapezoidal"][
        "objective"
    ]
    assert a == b


def test_overrides_change_the_optimum():
    base = stcorridor.plan(fixture("overtaking"), mode="trap")
    heavy = stcorridor.plan(fixture("overtaking"), mode="trap", weights="w3=10")
    assert heavy["trapezoidal"]["objective"] > base["trapezoidal"]["objective"]


def test_corridors_tile_the_horizon():
    for mode in ("trapezoidal", "cuboidal"):
        regions = stcorridor.corridors(fixture("overtaking"), mode)
        assert regions[0]["t_start"] == 0.0
        for a, b in zip(regions, regions[1:]):
            assert b["t_start"] == pytest.approx(a["t_end"])
        if mode == "cuboidal":
            assert all(r["lskew"] == 0.0 and r["uskew"] == 0.0 for r in regions)


def test_convexify_reproduces_a_piecewise_linear_profile():
    dt = 0.1
    lb = [0.0, 1.0, 2.0, 3.0, 3.0, 3.0]
    ub = [10.0] * 6
    regions = stcorridor.convexify(lb, ub, -1.0, 1.0, dt)
    assert len(regions) == 2
    for i, value in enumerate(lb):
        t = i * dt
        hits = [r for r in regions if r["t_start"] - 1e-12 <= t <= r["t_end"] + 1e-12]
        assert any(
            abs(r["lbias"] + r["lskew"] * (t - r["t_start"]) - value) < 1e-9
            for r in hits
        )


def test_bernstein_partition_of_unity():
    for t in (0.0, 0.3, 1.0):
        total = sum(stcorridor.bernstein(5, i, t) for i in range(6))
        assert total == pytest.approx(1.0)
    assert stcorridor.bernstein(5, 2, 0.5) == pytest.approx(
        math.comb(5, 2) / 32
    )


def test_errors_carry_kind_and_field():
    text = pathlib.Path(fixture("merging")).read_text()
    scenario = json.loads(text)
    scenario["horizon"] = -1.0
    with pytest.raises(stcorridor.PlannerError) as err:
        stcorridor.validate_scenario(json.dumps(scenario))
    assert err.value.field == "horizon"
    with pytest.raises(stcorridor.PlannerError) as err:
        stcorridor.plan(fixture("merging"), mode="all")
    assert err.value.field == "mode"


def test_compare_needs_no_arguments_beyond_the_file():
    table = stcorridor.compare(fixture("left_turn"))
    assert "trapezoidal" in table and "cuboidal" in table
