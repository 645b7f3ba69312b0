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

"""
Train the same synthetic graph synchronously, asynchronously and on the
server-only backend, then compare epochs, virtual time, cost and value.
"""

import argparse
import logging

from lambdagnn import (
    PipelineMode,
    RunConfig,
    TensorBackend,
    epochs_to_accuracy,
    run_epochs,
    value_ratio,
)

parser = argparse.ArgumentParser(description="pipe vs async vs server backend")
parser.add_argument("--synth", type=str, default="sbm:4x100")
parser.add_argument("--target_acc", type=float, default=0.9)
parser.add_argument("--staleness", type=int, default=0)
parser.add_argument("--intervals", type=int, default=4)
parser.add_argument("--partitions", type=int, default=2)
parser.add_argument("--seed", type=int, default=0)
args = parser.parse_args()

logging.basicConfig(level=logging.INFO, format="%(name)s %(levelname)s: %(message)s")


def config(mode: PipelineMode, backend: TensorBackend = TensorBackend.SERVERLESS) -> RunConfig:
    return RunConfig(
        synth=args.synth,
        mode=mode,
        staleness=args.staleness if mode == PipelineMode.ASYNC else None,
        intervals=args.intervals,
        partitions=args.partitions,
        seed=args.seed,
        target_accuracy=args.target_acc,
        max_epochs=200,
        tensor_backend=backend,
    )


runs = {
    "pipe": run_epochs(config(PipelineMode.PIPE)),
    "async": run_epochs(config(PipelineMode.ASYNC)),
    "server": run_epochs(config(PipelineMode.PIPE, TensorBackend.SERVER)),
}

for name, report in runs.items():
    s = report.summary
    print(
        f"{name:>6}: {s.status.value:<15} epochs to {args.target_acc}: "
        f"{epochs_to_accuracy(report, args.target_acc)}  time {s.virtual_time:.3f}s  "
        f"cost ${s.total_cost:.6f}  test acc {s.test_acc:.3f}"
    )

pipe, server = runs["pipe"].summary, runs["server"].summary
print(
    "serverless/server value: "
    f"{value_ratio(pipe.virtual_time, pipe.total_cost, server.virtual_time, server.total_cost):.3f}"
)
