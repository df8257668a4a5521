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
"""
dbg-compactor

dbg-compactor builds the compacted de Bruijn graph directly from complete
genome sequences. Junction k-mers are found with a two-pass filter: a Bloom
filter pass discards most non-branching positions cheaply, then an exact
hash-table pass removes the remaining false junctions. The k-mer universe can
be split into several rounds to bound the memory used by the exact pass.
"""
# pylint: disable=invalid-name
__version__ = '0.1.0'
__author__ = 'dbg-compactor developers'
__credits__ = 'Google'
