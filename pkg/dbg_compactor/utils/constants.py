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

"""Sets global constants."""

# pylint: disable=C0103
# pylint: disable=line-too-long

# Apache license
GENERATED_LICENSE = (
    '# Licensed under the Apache License, Version 2.0 (the "License");\n'
    '# you may not use this file except in compliance with the License.\n'
    '# You may obtain a copy of the License at\n'
    '#\n'
    '#     http://www.apache.org/licenses/LICENSE-2.0\n'
    '#\n'
    '# Unless required by applicable law or agreed to in writing, software\n'
    '# distributed under the License is distributed on an "AS IS" BASIS,\n'
    '# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.\n'
    '# See the License for the specific language governing permissions and\n'
    '# limitations under the License.\n'
    '#\n'
    '# DISCLAIMER: This file is generated as part of a dbg-compactor run.\n'
)

## Nucleotide alphabet
NUCLEOTIDES = 'ACGT'
# 2-bit codes, ordered so that integer order equals lexicographic order
NUCLEOTIDE_CODES = {'A': 0, 'C': 1, 'G': 2, 'T': 3}
COMPLEMENT = str.maketrans('ACGT', 'TGCA')
# Translation table from ASCII bases to 2-bit code bytes
ASCII_TO_CODE = bytes.maketrans(b'ACGT', bytes([0, 1, 2, 3]))

## Limits
# Largest supported k-mer length (edges span K_MAX + 1 bases)
K_MAX = 128
# Smallest supported filter, b = 2 ** MIN_FILTER_LOG2_BITS
MIN_FILTER_LOG2_BITS = 6
MIN_FILTER_BITS = 2 ** MIN_FILTER_LOG2_BITS
# The naive oracle refuses inputs larger than this many bases
ORACLE_MAX_BASES = 10 ** 7
# Mersenne prime modulus of the polynomial rolling hash
ROLLING_HASH_MODULUS = (1 << 61) - 1
# Filter fill ratio above which a saturation warning is logged
SATURATION_WARNING_RATIO = 0.9

## Default values
# Default number of Bloom filter hash functions
DEFAULT_HASH_COUNT = 4
# Default Bloom filter size, b = 2 ** DEFAULT_FILTER_LOG2_BITS
DEFAULT_FILTER_LOG2_BITS = 24
# Default number of partitioning rounds
DEFAULT_ROUNDS = 1
# Default number of hash buckets used to balance rounds
DEFAULT_BUCKETS = 8192
# Default number of bases handed to a worker at once
DEFAULT_CHUNK_SIZE = 1 << 20
# Default seed of the hash functions, fixed for reproducible runs
DEFAULT_SEED = 20160117
# Default k
DEFAULT_K = 25
# Default output path ('-' is standard output)
DEFAULT_OUTPUT = '-'

## Output formats
GFA_VERSION = '1.0'
JUNCTIONS_TSV_HEADER = ('seq_id', 'segment_index', 'offset', 'junction_id', 'strand')
MARKS_TSV_HEADER = ('round', 'pass', 'marks')
PARTITION_TSV_HEADER = ('class', 'bucket_start', 'bucket_stop', 'load')

## Templates
TEMPLATES_PATH = 'dbg_compactor.utils.templates'
RUN_REPORT_TEMPLATE = 'run_report.tsv.j2'
ESTIMATE_TEMPLATE = 'estimate.tsv.j2'
# Header for the resolved run config yaml
CONFIG_HEADER = (
    GENERATED_LICENSE +
    '# These values are descriptive only - do not change.\n'
    '# Rerun dbg-compactor construct to change these values.\n')
