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


class LambdaGNNError(Exception):
    """Base class of every error raised by lambdagnn."""


class ShapeError(LambdaGNNError, ValueError):
    pass


class NonFiniteError(LambdaGNNError, FloatingPointError):
    pass


class GraphFormatError(LambdaGNNError, ValueError):
    pass


class ConfigError(LambdaGNNError, ValueError):
    pass


class DatasetIOError(LambdaGNNError, OSError):
    pass


class ProtocolError(LambdaGNNError, ValueError):
    pass


class MissingGhostError(LambdaGNNError, RuntimeError):
    """A gather needed a neighbor row that was never delivered."""


class StalenessViolation(LambdaGNNError, RuntimeError):
    pass


class StashError(LambdaGNNError, RuntimeError):
    """Weight stash missing, evicted early, or read with the wrong version."""


class DuplicateContributionError(LambdaGNNError, ValueError):
    pass


class LambdaTimeoutError(LambdaGNNError, RuntimeError):
    """A relaunched invocation timed out a second time."""
