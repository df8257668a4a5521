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

"""Filters junction candidates with an edge membership structure, in one pass or
as a probabilistic pass followed by an exact one."""

# pylint: disable=C0103
# pylint: disable=line-too-long
# pylint: disable=logging-fstring-interpolation
# pylint: disable=too-many-positional-arguments

import dataclasses
import logging
import time
from typing import Iterator, Optional, Sequence, Set, Tuple

from dbg_compactor.filtering.marks import MarkArray, check_closure, sentinel_keys
from dbg_compactor.kmers.model import HashFamily, RollingHashState, iter_kmer_values
from dbg_compactor.membership.base import EdgeMembership
from dbg_compactor.membership.bloom import BloomFilter
from dbg_compactor.membership.exact import ExactEdgeTable
from dbg_compactor.pipeline.workers import Chunk, WorkerPool, chunk_producer
from dbg_compactor.sequences.fasta import SequenceRecord
from dbg_compactor.utils.constants import (
    DEFAULT_CHUNK_SIZE,
    DEFAULT_HASH_COUNT,
    DEFAULT_SEED,
    SATURATION_WARNING_RATIO
)
from dbg_compactor.utils.enums import StrandMode

BASE_CODES = (0, 1, 2, 3)


@dataclasses.dataclass
class TwoPassResult:
    """Marks and diagnostics of one run of the two-pass filter.

    Attributes:
        marks (MarkArray): Final marks.
        first_pass_marks (MarkArray): Marks surviving the probabilistic pass.
        initial (int): Marked positions on input.
        first_pass (int): Marked positions after the probabilistic pass.
        second_pass (Optional[int]): Marked positions after the exact pass, None when it was skipped.
        fill_ratio (float): Fraction of Bloom filter bits set.
        table_cardinality (int): Distinct keys of the exact table, 0 when skipped.
        seconds (float): Wall time of both passes.
    """
    marks: MarkArray
    first_pass_marks: MarkArray
    initial: int
    first_pass: int
    second_pass: Optional[int]
    fill_ratio: float
    table_cardinality: int
    seconds: float


class JunctionFilter:
    """Runs the insert loop and the degree-counting loop over chunks of the input.

    Both loops shard the segments into chunks handled by a WorkerPool; the pool
    returning is the barrier between them. In the second loop a worker only writes
    the mark bits of k-mers owned by its chunk.
    """

    def __init__(self,
                 records: Sequence[SequenceRecord],
                 k: int,
                 strand_mode: StrandMode = StrandMode.DOUBLE,
                 hash_count: int = DEFAULT_HASH_COUNT,
                 seed: int = DEFAULT_SEED,
                 workers: int = 1,
                 chunk_size: int = DEFAULT_CHUNK_SIZE,
                 sentinels: Optional[Set[int]] = None,
                 validate: bool = False):
        """Creates the filter.

        Args:
            records (Sequence[SequenceRecord]): The input S.
            k (int): The k-mer length.
            strand_mode (StrandMode): DOUBLE keys every structure on canonical forms.
            hash_count (int): Number of Bloom filter hash functions h.
            seed (int): Seed of the hash family.
            workers (int): Number of consumer threads.
            chunk_size (int): Bases per chunk, at least 2k.
            sentinels (Optional[Set[int]]): Keys of terminal k-mers; computed when None.
            validate (bool): Check candidate-set closure of inputs and outputs.
        """
        self.records = records
        self.k = k
        self.strand_mode = strand_mode
        self.family = HashFamily(hash_count, k, seed)
        self.pool = WorkerPool(workers)
        self.chunk_size = chunk_size
        self.sentinels = sentinel_keys(records, k, strand_mode) if sentinels is None else sentinels
        self.validate = validate

    @property
    def canonical(self) -> bool:
        return self.strand_mode is StrandMode.DOUBLE

    def _chunks(self) -> Iterator[Chunk]:
        return chunk_producer(self.records, self.chunk_size, self.k)

    def _windows(self, codes: bytes, stop: int, with_fingerprints: bool) -> Iterator[Tuple[int, RollingHashState]]:
        if with_fingerprints:
            yield from self.family.scan(codes, 0, stop)
            return
        for offset, value, rc_value in iter_kmer_values(codes, self.k, 0, stop):
            yield offset, RollingHashState(self.k, value, rc_value, (), ())

    def insert_edges(self, marks: MarkArray, membership: EdgeMembership):
        """First loop: inserts every (k+1)-mer with a marked prefix or suffix k-mer."""
        k = self.k
        canonical = self.canonical
        with_fingerprints = membership.uses_fingerprints

        def handle(chunk: Chunk) -> int:
            segment_marks = marks.segment(chunk.record_index, chunk.segment_index)
            codes = chunk.codes
            start = chunk.start
            edges = []
            for offset, state in self._windows(codes, len(codes) - k, with_fingerprints):
                if segment_marks[start + offset] or segment_marks[start + offset + 1]:
                    edges.append(self.family.out_edge(state, codes[offset + k], canonical, with_fingerprints))
            membership.insert_many(edges)
            return len(edges)

        inserted = sum(self.pool.run(self._chunks(), handle))
        logging.debug(f'Inserted {inserted} (k+1)-mer occurrence(s)')

    def count_degrees(self, marks: MarkArray, membership: EdgeMembership) -> MarkArray:
        """Second loop: unmarks non-sentinel positions with one in-edge and one out-edge."""
        k = self.k
        canonical = self.canonical
        with_fingerprints = membership.uses_fingerprints
        sentinels = self.sentinels
        family = self.family
        result = marks.copy()

        def handle(chunk: Chunk) -> int:
            segment_marks = marks.segment(chunk.record_index, chunk.segment_index)
            output = result.segment(chunk.record_index, chunk.segment_index)
            start = chunk.start
            owned = len(chunk.kmer_starts(k))
            unmarked = 0
            for offset, state in self._windows(chunk.codes, owned, with_fingerprints):
                if not segment_marks[start + offset]:
                    continue
                key = min(state.value, state.rc_value) if canonical else state.value
                if key in sentinels:
                    continue
                out_degree = sum(membership.query_many(family.out_edge(state, c, canonical, with_fingerprints) for c in BASE_CODES))
                if out_degree != 1:
                    continue
                in_degree = sum(membership.query_many(family.in_edge(state, c, canonical, with_fingerprints) for c in BASE_CODES))
                if in_degree == 1:
                    output[start + offset] = 0
                    unmarked += 1
            return unmarked

        unmarked = sum(self.pool.run(self._chunks(), handle))
        logging.debug(f'Unmarked {unmarked} position(s)')
        return result

    def filter(self, marks: MarkArray, membership: EdgeMembership) -> MarkArray:
        """Runs both loops with one membership structure.

        Args:
            marks (MarkArray): Candidate set obeying closure.
            membership (EdgeMembership): An empty membership structure.

        Returns:
            MarkArray: A new candidate set; marks is left unchanged.

        Raises:
            ValueError: validate is set and marks violates closure.
        """
        if self.validate:
            check_closure(self.records, marks, self.strand_mode)
        self.insert_edges(marks, membership)
        result = self.count_degrees(marks, membership)
        if self.validate:
            check_closure(self.records, result, self.strand_mode)
        return result

    def first_pass(self, marks: MarkArray, filter_bits: int) -> Tuple[MarkArray, BloomFilter]:
        """Filters with a fresh Bloom filter of filter_bits bits."""
        bloom = BloomFilter(filter_bits, self.family)
        result = self.filter(marks, bloom)
        fill_ratio = bloom.fill_ratio()
        if fill_ratio > SATURATION_WARNING_RATIO:
            logging.warning(f'Bloom filter is saturated ({fill_ratio:.1%} of {filter_bits} bits set); consider a larger filter or more rounds.')
        return result, bloom

    def two_pass(self, marks: MarkArray, filter_bits: int, max_table_keys: Optional[int] = None, exact: bool = True) -> TwoPassResult:
        """Runs the probabilistic pass, then optionally the exact pass.

        Args:
            marks (MarkArray): Candidate set obeying closure.
            filter_bits (int): Bloom filter size b, a power of two.
            max_table_keys (Optional[int]): Capacity of the exact table.
            exact (bool): Run the exact pass; False yields partial compaction marks.

        Returns:
            TwoPassResult: Final marks and diagnostics.

        Raises:
            TableCapacityError: The exact table outgrew max_table_keys.
        """
        started = time.perf_counter()
        initial = marks.count()
        first, bloom = self.first_pass(marks, filter_bits)
        first_count = first.count()
        logging.info(f'First pass: {initial} -> {first_count} marks (filter fill {bloom.fill_ratio():.3f})')
        final = first
        second_count = None
        cardinality = 0
        if exact:
            table = ExactEdgeTable(max_keys=max_table_keys)
            final = self.filter(first, table)
            second_count = final.count()
            cardinality = table.cardinality
            logging.info(f'Second pass: {first_count} -> {second_count} marks ({cardinality} table keys)')
        return TwoPassResult(
            marks=final,
            first_pass_marks=first,
            initial=initial,
            first_pass=first_count,
            second_pass=second_count,
            fill_ratio=bloom.fill_ratio(),
            table_cardinality=cardinality,
            seconds=time.perf_counter() - started)


def filter_junctions(records: Sequence[SequenceRecord],
                     k: int,
                     membership: EdgeMembership,
                     marks: MarkArray,
                     strand_mode: StrandMode = StrandMode.DOUBLE,
                     **options) -> MarkArray:
    """Runs one filtering pass with the given membership structure.

    Args:
        records (Sequence[SequenceRecord]): The input S.
        k (int): The k-mer length.
        membership (EdgeMembership): An empty structure; a BloomFilter must share k with its family.
        marks (MarkArray): Candidate set obeying closure.
        strand_mode (StrandMode): Strand handling.
        **options: Further JunctionFilter arguments (workers, chunk_size, seed, validate, ...).

    Returns:
        MarkArray: The filtered candidate set. With an exact structure it is exactly
            the marked positions holding junction k-mers.
    """
    if isinstance(membership, BloomFilter):
        options.setdefault('hash_count', membership.family.count)
        options.setdefault('seed', membership.family.seed)
    junction_filter = JunctionFilter(records, k, strand_mode=strand_mode, **options)
    if isinstance(membership, BloomFilter):
        junction_filter.family = membership.family
    return junction_filter.filter(marks, membership)


def filter_junctions_two_pass(records: Sequence[SequenceRecord],
                              k: int,
                              marks: MarkArray,
                              filter_bits: int,
                              strand_mode: StrandMode = StrandMode.DOUBLE,
                              max_table_keys: Optional[int] = None,
                              **options) -> MarkArray:
    """Runs a Bloom filter pass followed by an exact pass.

    Args:
        records (Sequence[SequenceRecord]): The input S.
        k (int): The k-mer length.
        marks (MarkArray): Candidate set obeying closure.
        filter_bits (int): Bloom filter size b, a power of two.
        strand_mode (StrandMode): Strand handling.
        max_table_keys (Optional[int]): Capacity of the exact table.
        **options: Further JunctionFilter arguments.

    Returns:
        MarkArray: marks restricted to junction positions.
    """
    junction_filter = JunctionFilter(records, k, strand_mode=strand_mode, **options)
    return junction_filter.two_pass(marks, filter_bits, max_table_keys=max_table_keys).marks


def partial_compaction_marks(records: Sequence[SequenceRecord],
                             k: int,
                             marks: MarkArray,
                             filter_bits: int,
                             strand_mode: StrandMode = StrandMode.DOUBLE,
                             **options) -> MarkArray:
    """Runs the Bloom filter pass only.

    The result is a superset of the junction positions; the graph built from it is
    a valid partially compacted graph.
    """
    junction_filter = JunctionFilter(records, k, strand_mode=strand_mode, **options)
    return junction_filter.two_pass(marks, filter_bits, exact=False).marks
