# SPDX-FileCopyrightText: Copyright (c) 2025 NVIDIA CORPORATION & AFFILIATES. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import enum
import json
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional


@enum.unique
class RunStatus(enum.Enum):
    TARGET_REACHED = "target_reached"
    CONVERGED = "converged"
    MAX_EPOCHS = "max_epochs"


@dataclass
class EpochRecord:
    epoch: int
    loss: float
    train_acc: float
    val_acc: float
    makespan: float
    virtual_time: float
    lambdas: int
    invocations: int
    staleness_histogram: Dict[str, int] = field(default_factory=dict)
    breakdown: Dict[str, float] = field(default_factory=dict)


@dataclass
class RunSummary:
    status: RunStatus
    epochs: int
    test_acc: float
    virtual_time: float
    lambda_cost: float
    server_cost: float
    total_cost: float
    value: Optional[float]

    def as_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["status"] = self.status.value
        return out


@dataclass
class TrainingReport:
    """Per-epoch records followed by a summary; rendered as JSON lines."""

    epochs: List[EpochRecord] = field(default_factory=list)
    summary: Optional[RunSummary] = None

    def to_jsonl(self) -> str:
        lines = [json.dumps(asdict(record), sort_keys=True) for record in self.epochs]
        if self.summary is not None:
            lines.append(json.dumps({"summary": self.summary.as_dict()}, sort_keys=True))
        return "".join(line + "\n" for line in lines)

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.to_jsonl())

    @property
    def final_train_acc(self) -> float:
        return self.epochs[-1].train_acc if self.epochs else 0.0


def epochs_to_accuracy(report: TrainingReport, target: float) -> Optional[int]:
    """Number of epochs until training accuracy first reached ``target``; None if never."""
    for record in report.epochs:
        if record.train_acc >= target:
            return record.epoch + 1
    return None
