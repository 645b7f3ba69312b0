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

import argparse
import logging
import sys
from typing import List, Optional

from .dataset import resolve_dataset
from .exceptions import ConfigError, DatasetIOError, GraphFormatError
from .lambdagnn_config import (
    RunConfig,
    string_to_backend,
    string_to_init_scheme,
    string_to_mode,
    string_to_precision,
    string_to_transport,
    validate_run_config,
)
from .optimizer import string_to_opt_type
from .pipeline import run_epochs
from .synthetic import DATASET_METADATA

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2


def str2bool(v):
    if isinstance(v, bool):
        return v
    if v.lower() in ("yes", "true", "t", "y", "1"):
        return True
    elif v.lower() in ("no", "false", "f", "n", "0"):
        return False
    else:
        raise argparse.ArgumentTypeError("Boolean value expected.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lambdagnn", description="Train a GCN on a simulated serverless pipeline"
    )
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--dataset", type=str, help="directory with graph/features/labels.bsnap")
    source.add_argument("--synth", type=str, help="synthetic graph, sbm:CxN[:p_in:p_out]")
    parser.add_argument("--parts", type=str, default=None, help="vertex-to-partition file")
    parser.add_argument("--layers", type=int, default=2)
    parser.add_argument("--hidden", type=int, default=16)
    parser.add_argument("--mode", type=str, default="pipe", help="pipe or async")
    parser.add_argument("--s", type=int, default=None, help="degree of staleness (async only)")
    parser.add_argument("--l", type=int, default=None, help="initial #lambdas per graph server")
    parser.add_argument("--max-lambdas", type=int, default=100)
    parser.add_argument("--lr", type=float, default=0.01)
    parser.add_argument("--optimizer", type=str, default="adam", help="sgd or adam")
    parser.add_argument("--init", type=str, default="xavier", help="xavier or he")
    parser.add_argument("--intervals", type=int, default=4, help="intervals per partition")
    parser.add_argument("--partitions", type=int, default=1)
    parser.add_argument("--gs-threads", type=int, default=4)
    parser.add_argument("--param-servers", type=int, default=2)
    parser.add_argument("--broadcast-every", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-epochs", type=int, default=100)
    parser.add_argument("--min-epochs", type=int, default=10)
    parser.add_argument("--target-acc", type=float, default=None)
    parser.add_argument("--fuse", type=str2bool, nargs="?", const=True, default=False)
    parser.add_argument("--remat", type=str2bool, nargs="?", const=True, default=False)
    parser.add_argument("--stream", type=str2bool, nargs="?", const=True, default=False)
    parser.add_argument("--ae-stage", type=str2bool, default=True)
    parser.add_argument("--transport", type=str, default="inprocess", help="inprocess or tcp")
    parser.add_argument("--backend", type=str, default="serverless", help="serverless or server")
    parser.add_argument("--precision", type=str, default="single", help="single or double")
    parser.add_argument("--straggler-fraction", type=float, default=0.0)
    parser.add_argument("--straggler-factor", type=float, default=1.0)
    parser.add_argument("--audit-rows", type=str2bool, nargs="?", const=True, default=False)
    parser.add_argument("--report", type=str, default=None, help="JSON-lines report path")
    parser.add_argument("--log-level", type=str, default="WARNING")
    parser.add_argument(
        "--describe", action="store_true", help="print the reference dataset table and exit"
    )
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    try:
        config = RunConfig(
            dataset=args.dataset,
            synth=args.synth,
            parts_file=args.parts,
            num_layers=args.layers,
            hidden=args.hidden,
            mode=string_to_mode(args.mode),
            staleness=args.s,
            initial_lambdas=args.l,
            max_lambdas=args.max_lambdas,
            learning_rate=args.lr,
            optimizer=string_to_opt_type(args.optimizer),
            init_scheme=string_to_init_scheme(args.init),
            intervals=args.intervals,
            partitions=args.partitions,
            gs_threads=args.gs_threads,
            param_servers=args.param_servers,
            broadcast_every=args.broadcast_every,
            transport=string_to_transport(args.transport),
            seed=args.seed,
            max_epochs=args.max_epochs,
            target_accuracy=args.target_acc,
            min_epochs=args.min_epochs,
            fuse=args.fuse,
            remat=args.remat,
            stream=args.stream,
            ae_stage=args.ae_stage,
            tensor_backend=string_to_backend(args.backend),
            straggler_fraction=args.straggler_fraction,
            straggler_factor=args.straggler_factor,
            audit_rows=args.audit_rows,
            precision=string_to_precision(args.precision),
        )
    except ValueError as e:
        raise ConfigError(str(e)) from e
    return validate_run_config(config)


def describe() -> None:
    print(f"{'dataset':<14}{'vertices':>14}{'edges':>16}{'features':>10}{'labels':>8}")
    for name, meta in DATASET_METADATA.items():
        print(f"{name:<14}{meta.vertices:>14,}{meta.edges:>16,}{meta.features:>10}{meta.labels:>8}")


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse already printed the usage error
        return EXIT_OK if e.code in (0, None) else EXIT_CONFIG
    logging.basicConfig(
        level=getattr(logging, args.log_level.upper(), logging.WARNING),
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
    )
    if args.describe:
        describe()
        return EXIT_OK
    try:
        config = config_from_args(args)
        dataset = resolve_dataset(config)
        report = run_epochs(config, dataset)
    except ConfigError as e:
        logger.error("%s", e)
        return EXIT_CONFIG
    except (DatasetIOError, GraphFormatError) as e:
        logger.error("%s", e)
        return EXIT_IO

    if args.report is not None:
        try:
            report.write(args.report)
        except OSError as e:
            logger.error("LambdaGNN ERROR: cannot write report %s: %s", args.report, e)
            return EXIT_IO
    else:
        sys.stdout.write(report.to_jsonl())
    summary = report.summary
    print(
        f"status={summary.status.value} epochs={summary.epochs} test_acc={summary.test_acc:.4f} "
        f"time={summary.virtual_time:.3f}s cost=${summary.total_cost:.6f} "
        f"(lambda ${summary.lambda_cost:.6f}, servers ${summary.server_cost:.6f})",
        file=sys.stderr,
    )
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
