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

from .costmodel import PriceTable, UsageLedger, lambda_cost, server_cost, total_cost, value, value_ratio
from .dataset import Dataset, load_dataset, parse_synth_spec, split_masks
from .exceptions import (
    ConfigError,
    DatasetIOError,
    DuplicateContributionError,
    GraphFormatError,
    LambdaGNNError,
    LambdaTimeoutError,
    MissingGhostError,
    NonFiniteError,
    ProtocolError,
    ShapeError,
    StalenessViolation,
    StashError,
)
from .graph import Graph, build_graph, expand_undirected
from .lambdagnn_config import (
    InitScheme,
    PipelineMode,
    Precision,
    RunConfig,
    TensorBackend,
    TransportKind,
    string_to_mode,
    validate_run_config,
)
from .optimizer import OptimizerArgs, OptimType
from .partition import Partition, VertexInterval, partition_graph, split_intervals
from .pipeline import Engine, RunStatus, TrainingReport, epochs_to_accuracy, run_epochs
from .synthetic import DATASET_METADATA, synth_sbm

__all__ = [
    "ConfigError",
    "DATASET_METADATA",
    "Dataset",
    "DatasetIOError",
    "DuplicateContributionError",
    "Engine",
    "Graph",
    "GraphFormatError",
    "InitScheme",
    "LambdaGNNError",
    "LambdaTimeoutError",
    "MissingGhostError",
    "NonFiniteError",
    "OptimType",
    "OptimizerArgs",
    "Partition",
    "PipelineMode",
    "Precision",
    "PriceTable",
    "ProtocolError",
    "RunConfig",
    "RunStatus",
    "ShapeError",
    "StalenessViolation",
    "StashError",
    "TensorBackend",
    "TrainingReport",
    "TransportKind",
    "UsageLedger",
    "VertexInterval",
    "build_graph",
    "epochs_to_accuracy",
    "expand_undirected",
    "lambda_cost",
    "load_dataset",
    "parse_synth_spec",
    "partition_graph",
    "run_epochs",
    "server_cost",
    "split_intervals",
    "split_masks",
    "string_to_mode",
    "synth_sbm",
    "total_cost",
    "validate_run_config",
    "value",
    "value_ratio",
]
