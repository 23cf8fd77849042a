# Copyright 2026 The ladri Authors
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

"""Python access to the ladri simulator, labeling oracle and risk model."""

from ._ladri import (
    FEATURE_NAMES,
    LadriError,
    Model,
    classify,
    compute_headway,
    compute_required_decel,
    compute_ttc,
    generate_dataset,
    run_cli,
    scenario_config,
    simulate,
    train,
)

STAGES = ("Safe", "Warning", "Hazardous", "Critical")

__all__ = [
    "FEATURE_NAMES",
    "STAGES",
    "LadriError",
    "Model",
    "classify",
    "compute_headway",
    "compute_required_decel",
    "compute_ttc",
    "generate_dataset",
    "run_cli",
    "scenario_config",
    "simulate",
    "train",
]
