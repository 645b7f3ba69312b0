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

import os

from setuptools import find_packages, setup

library_name = "lambdagnn"

package = find_packages(exclude=("*test",))

with open(os.path.join(os.path.dirname(__file__), "README.md"), encoding="utf8") as f:
    readme = f.read()

setup(
    name=library_name,
    version="0.0.1",
    description="GCN training on a simulated serverless pipeline with bounded asynchrony",
    long_description=readme,
    long_description_content_type="text/markdown",
    packages=package,
    license="Apache-2.0",
    keywords=[
        "pytorch",
        "graph neural networks",
        "serverless",
        "asynchronous training",
    ],
    python_requires=">=3.9",
    install_requires=["torch", "numpy"],
    extras_require={"test": ["pytest"]},
    entry_points={"console_scripts": ["lambdagnn=lambdagnn.cli:main"]},
)
