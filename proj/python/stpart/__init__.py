# Copyright 2026 The stpart Authors
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


"""Space-time partitioning of on-road free space and maneuver planning."""

from ._stpart import (
    Graph,
    OracleCapExceeded,
    ParseError,
    Scenario,
    ScenarioError,
    build_graph,
    enumerate_oracle,
    is_feasible,
    load_scenario,
    margin_sweep,
    parse_scenario,
    partition,
    plan,
    solve_qp,
)

__all__ = [
    "Graph",
    "OracleCapExceeded",
    "ParseError",
    "Scenario",
    "ScenarioError",
    "build_graph",
    "enumerate_oracle",
    "is_feasible",
    "load_scenario",
    "margin_sweep",
    "parse_scenario",
    "partition",
    "plan",
    "solve_qp",
]
