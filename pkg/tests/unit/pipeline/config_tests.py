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

"""Unit tests for the config module."""

# pylint: disable=line-too-long
# pylint: disable=missing-function-docstring

from contextlib import nullcontext as does_not_raise

import pydantic
import pytest
import yaml

from dbg_compactor.pipeline.config import RunConfig
from dbg_compactor.utils.enums import OutputFormat, StrandMode


def test_defaults():
    """Tests RunConfig defaults."""
    config = RunConfig()
    assert config.k == 25
    assert config.filter_bits == 1 << 24
    assert config.hash_count == 4
    assert config.rounds == 1
    assert config.workers >= 1
    assert config.strand_mode is StrandMode.DOUBLE
    assert config.output_format is OutputFormat.GFA1
    assert config.output_path == '-'
    assert config.report_prefix is None
    assert not config.partial


@pytest.mark.parametrize(
    'values, expectation',
    [
        ({'k': 31, 'strand_mode': 'single', 'output_format': 'junctions'}, does_not_raise()),
        ({'k': 0}, pytest.raises(pydantic.ValidationError)),
        ({'k': 129}, pytest.raises(pydantic.ValidationError)),
        ({'filter_log2_bits': 5}, pytest.raises(pydantic.ValidationError)),
        ({'hash_count': 0}, pytest.raises(pydantic.ValidationError)),
        ({'workers': 0}, pytest.raises(pydantic.ValidationError)),
        ({'k': 25, 'chunk_size': 49}, pytest.raises(ValueError)),
        ({'rounds': 9, 'buckets': 8}, pytest.raises(ValueError)),
        ({'output_format': 'fasta'}, pytest.raises(ValueError)),
        ({'strand_mode': 'both'}, pytest.raises(ValueError)),
        ({'kmer': 25}, pytest.raises(pydantic.ValidationError))
    ]
)
def test_validation(values: dict, expectation):
    """Tests RunConfig validation. There are eleven test cases for this function:
        1. Valid values given as strings are parsed into enums.
        2. k of zero.
        3. k above the limit.
        4. Filter smaller than 64 bits.
        5. No hash function.
        6. No worker.
        7. Chunks shorter than 2k.
        8. More rounds than buckets.
        9. Unknown output format.
        10. Unknown strand mode.
        11. Unknown key.

    Args:
        values (dict): RunConfig fields.
        expectation: Any corresponding expected errors for each set of parameters.
    """
    with expectation:
        config = RunConfig(**values)
        assert config.strand_mode is StrandMode.SINGLE
        assert config.output_format is OutputFormat.JUNCTIONS


def test_validation_errors_are_value_errors():
    """Tests RunConfig, whose validation errors can be caught as ValueError."""
    with pytest.raises(ValueError):
        RunConfig(k=0)


def test_from_yaml(tmp_path):
    """Tests RunConfig.from_yaml, where explicit overrides that are not None win."""
    filepath = tmp_path / 'run.yaml'
    filepath.write_text('k: 31\nrounds: 4\nstrand_mode: single\n', encoding='utf-8')
    config = RunConfig.from_yaml(str(filepath), rounds=2, hash_count=None)
    assert (config.k, config.rounds, config.hash_count) == (31, 2, 4)
    assert config.strand_mode is StrandMode.SINGLE


def test_from_yaml_unknown_key(tmp_path):
    """Tests RunConfig.from_yaml, which rejects unknown keys."""
    filepath = tmp_path / 'run.yaml'
    filepath.write_text('kmer_size: 31\n', encoding='utf-8')
    with pytest.raises(ValueError):
        RunConfig.from_yaml(str(filepath))


def test_to_yaml_dict():
    """Tests RunConfig.to_yaml_dict, which gives plain values that load back."""
    config = RunConfig(k=21, strand_mode=StrandMode.SINGLE, input_paths=['a.fa'], workers=2)
    values = config.to_yaml_dict()
    assert values['strand_mode'] == 'single'
    assert values['output_format'] == 'gfa1'
    assert RunConfig(**yaml.safe_load(yaml.safe_dump(values))) == config
