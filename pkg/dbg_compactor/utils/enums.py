# Copyright 2024 Google LLC. All Rights Reserved.
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

"""Creates enums for strand handling, output formats and process exit codes."""

# pylint: disable=C0103
# pylint: disable=line-too-long

from enum import Enum


class StrandMode(Enum):
    """Enum representing how the two strands of the input are treated."""

    DOUBLE = 'double'
    SINGLE = 'single'


class OutputFormat(Enum):
    """Enum representing the available graph serializations."""

    GFA1 = 'gfa1'
    JUNCTIONS = 'junctions'
    # GFA2 = 'gfa2'   # not supported


class ExitCode(Enum):
    """Enum representing the process exit status of the command line tool."""

    SUCCESS = 0
    USAGE = 1
    INPUT = 2
    RESOURCE = 3
