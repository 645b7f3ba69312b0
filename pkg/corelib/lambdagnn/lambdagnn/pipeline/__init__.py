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

from .engine import Engine, run_epochs
from .history import ValueHistory
from .report import EpochRecord, RunStatus, RunSummary, TrainingReport, epochs_to_accuracy
from .scheduler import IntervalProgress, Scheduler
from .staleness import StalenessAudit, check_gather_admissible
from .tasks import Direction, StagePlan, Task, TaskKind

__all__ = [
    "Direction",
    "Engine",
    "EpochRecord",
    "IntervalProgress",
    "RunStatus",
    "RunSummary",
    "Scheduler",
    "StagePlan",
    "StalenessAudit",
    "Task",
    "TaskKind",
    "TrainingReport",
    "ValueHistory",
    "check_gather_admissible",
    "epochs_to_accuracy",
    "run_epochs",
]
