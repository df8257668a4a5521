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

"""Creates the run configuration object."""

# pylint: disable=C0103
# pylint: disable=line-too-long
# pylint: disable=no-self-argument

import os
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from dbg_compactor.utils.constants import (
    DEFAULT_BUCKETS,
    DEFAULT_CHUNK_SIZE,
    DEFAULT_FILTER_LOG2_BITS,
    DEFAULT_HASH_COUNT,
    DEFAULT_K,
    DEFAULT_OUTPUT,
    DEFAULT_ROUNDS,
    DEFAULT_SEED,
    K_MAX,
    MIN_FILTER_LOG2_BITS
)
from dbg_compactor.utils.enums import OutputFormat, StrandMode
from dbg_compactor.utils.utils import read_yaml_file


class RunConfig(BaseModel):
    """Every parameter of a construct run.

    Attributes:
        k (int): The k-mer length.
        filter_log2_bits (int): Bloom filter size exponent, b = 2 ** filter_log2_bits.
        hash_count (int): Bloom filter hash functions h.
        rounds (int): Number of partitioning rounds.
        workers (int): Worker threads.
        strand_mode (StrandMode): DOUBLE merges reverse complements.
        output_format (OutputFormat): Serialization of the result.
        input_paths (List[str]): FASTA files.
        seed (int): Seed of every hash function.
        chunk_size (int): Bases per worker chunk.
        buckets (int): Number of buckets used to balance rounds.
        partial (bool): Skip the exact pass and build a partially compacted graph.
        output_path (str): Output file, '-' for standard output.
        report_prefix (Optional[str]): Prefix of the report files, None to skip them.
        max_table_keys (Optional[int]): Capacity of the exact table per round.
        validate_closure (bool): Check candidate-set closure after every pass.
    """
    model_config = {'extra': 'forbid', 'use_enum_values': False}

    k: int = Field(default=DEFAULT_K, ge=1, le=K_MAX)
    filter_log2_bits: int = Field(default=DEFAULT_FILTER_LOG2_BITS, ge=MIN_FILTER_LOG2_BITS, le=40)
    hash_count: int = Field(default=DEFAULT_HASH_COUNT, ge=1)
    rounds: int = Field(default=DEFAULT_ROUNDS, ge=1)
    workers: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    strand_mode: StrandMode = StrandMode.DOUBLE
    output_format: OutputFormat = OutputFormat.GFA1
    input_paths: List[str] = Field(default_factory=list)
    seed: int = DEFAULT_SEED
    chunk_size: int = Field(default=DEFAULT_CHUNK_SIZE, ge=2)
    buckets: int = Field(default=DEFAULT_BUCKETS, ge=1)
    partial: bool = False
    output_path: str = DEFAULT_OUTPUT
    report_prefix: Optional[str] = None
    max_table_keys: Optional[int] = Field(default=None, ge=1)
    validate_closure: bool = False

    @field_validator('strand_mode', mode='before')
    def _parse_strand_mode(cls, value):
        return StrandMode(value) if isinstance(value, str) else value

    @field_validator('output_format', mode='before')
    def _parse_output_format(cls, value):
        if isinstance(value, str):
            try:
                return OutputFormat(value)
            except ValueError as err:
                raise ValueError(f'Unsupported output format: {value}. Supported formats: {", ".join(f.value for f in OutputFormat)}') from err
        return value

    @model_validator(mode='after')
    def _check_sizes(self):
        if self.chunk_size < 2 * self.k:
            raise ValueError(f'chunk_size must be at least 2k = {2 * self.k}, got {self.chunk_size}.')
        if self.buckets < self.rounds:
            raise ValueError(f'buckets ({self.buckets}) must be at least the number of rounds ({self.rounds}).')
        return self

    @property
    def filter_bits(self) -> int:
        """Bloom filter size b."""
        return 1 << self.filter_log2_bits

    @classmethod
    def from_yaml(cls, filepath: str, **overrides) -> 'RunConfig':
        """Loads defaults from a yaml file; keyword overrides that are not None win.

        Raises:
            ValueError: A value is invalid or a key is unknown.
        """
        values = read_yaml_file(filepath)
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    def to_yaml_dict(self) -> dict:
        """Plain values suitable for yaml.safe_dump."""
        return self.model_dump(mode='json')
