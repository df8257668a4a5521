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

"""Domain exceptions raised across the package."""

# pylint: disable=C0103
# pylint: disable=line-too-long

from typing import Optional


class FastaFormatError(ValueError):
    """Raised when a FASTA file cannot be parsed."""

    def __init__(self, message: str, path: Optional[str] = None, line_number: Optional[int] = None):
        location = ''
        if path is not None:
            location += f'{path}:'
        if line_number is not None:
            location += f'{line_number}:'
        super().__init__(f'{location} {message}' if location else message)
        self.path = path
        self.line_number = line_number


class TableCapacityError(MemoryError):
    """Raised when the exact edge table grows beyond its configured capacity."""

    def __init__(self, cardinality: int, capacity: int, round_index: Optional[int] = None, load_estimate: Optional[float] = None):
        message = f'Exact edge table reached {cardinality} keys (capacity {capacity})'
        if round_index is not None:
            message += f' in round {round_index + 1}'
        if load_estimate is not None:
            message += f', estimated round load {load_estimate:.0f}'
        message += '. Increase the number of rounds to lower the per-round table size.'
        super().__init__(message)
        self.cardinality = cardinality
        self.capacity = capacity
        self.round_index = round_index
        self.load_estimate = load_estimate
