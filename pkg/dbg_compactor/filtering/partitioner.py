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

"""Balances the k-mer universe into rounds and runs the two-pass filter once per round."""

# pylint: disable=C0103
# pylint: disable=line-too-long
# pylint: disable=logging-fstring-interpolation
# pylint: disable=too-many-positional-arguments

import dataclasses
import logging
import threading
from typing import List, Optional, Sequence, Tuple

import mmh3
import numpy as np

from dbg_compactor.filtering.junctions import JunctionFilter, TwoPassResult
from dbg_compactor.filtering.marks import MarkArray, kmer_key, sentinel_keys
from dbg_compactor.kmers.model import HashFamily, iter_kmer_values
from dbg_compactor.membership.bloom import BloomFilter
from dbg_compactor.pipeline.workers import Chunk, WorkerPool, chunk_producer
from dbg_compactor.sequences.fasta import SequenceRecord
from dbg_compactor.utils.constants import (
    DEFAULT_BUCKETS,
    DEFAULT_CHUNK_SIZE,
    DEFAULT_HASH_COUNT,
    DEFAULT_SEED
)
from dbg_compactor.utils.enums import StrandMode
from dbg_compactor.utils.exceptions import TableCapacityError


def bucket_of(key: int, k: int, buckets: int, seed: int) -> int:
    """The bucket hash f of a k-mer key, in [0, buckets)."""
    return mmh3.hash(key.to_bytes((2 * k + 7) // 8, 'big'), seed, signed=False) % buckets


@dataclasses.dataclass
class BucketCounters:
    """Approximate number of distinct incident (k+1)-mers per bucket.

    Attributes:
        counts (np.ndarray): One non-negative counter per bucket.
        seed (int): Seed of the bucket hash f.
    """
    counts: np.ndarray
    seed: int

    @property
    def size(self) -> int:
        """Number of buckets Q."""
        return len(self.counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclasses.dataclass
class PartitionPlan:
    """Contiguous bucket ranges, one per round.

    Attributes:
        ranges (List[Tuple[int, int]]): [start, stop) bucket range per class, ordered and covering [0, Q).
        loads (List[Optional[int]]): Estimated exact-table load per class, None when counting was skipped.
    """
    ranges: List[Tuple[int, int]]
    loads: List[Optional[int]]

    @property
    def rounds(self) -> int:
        return len(self.ranges)


def count_buckets(records: Sequence[SequenceRecord],
                  k: int,
                  buckets: int = DEFAULT_BUCKETS,
                  filter_bits: int = 1 << 20,
                  strand_mode: StrandMode = StrandMode.DOUBLE,
                  hash_count: int = DEFAULT_HASH_COUNT,
                  seed: int = DEFAULT_SEED,
                  workers: int = 1,
                  chunk_size: int = DEFAULT_CHUNK_SIZE) -> BucketCounters:
    """Counts distinct (k+1)-mers per bucket of their endpoint k-mers.

    A (k+1)-mer is counted on its first sighting only, as decided by a scratch Bloom
    filter, and credits the buckets of both its prefix and suffix k-mers. Bloom filter
    false positives make the counts an underestimate.

    Args:
        records (Sequence[SequenceRecord]): The input S.
        k (int): The k-mer length.
        buckets (int): Number of buckets Q.
        filter_bits (int): Size of the scratch Bloom filter, a power of two.
        strand_mode (StrandMode): DOUBLE counts canonical (k+1)-mers and k-mers.
        hash_count (int): Hash functions of the scratch filter.
        seed (int): Seed of the scratch filter and of the bucket hash.
        workers (int): Number of consumer threads.
        chunk_size (int): Bases per chunk.

    Returns:
        BucketCounters: The counters.
    """
    family = HashFamily(hash_count, k, seed)
    scratch = BloomFilter(filter_bits, family)
    canonical = strand_mode is StrandMode.DOUBLE
    counts = np.zeros(buckets, dtype=np.int64)
    lock = threading.Lock()

    def handle(chunk: Chunk) -> int:
        codes = chunk.codes
        keys = [kmer_key(value, rc_value, strand_mode) for _, value, rc_value in iter_kmer_values(codes, k)]
        edges = [family.out_edge(state, codes[offset + k], canonical) for offset, state in family.scan(codes, 0, len(codes) - k)]
        credited = []
        for offset, added in enumerate(scratch.add_many_if_absent(edges)):
            if added:
                credited.append(bucket_of(keys[offset], k, buckets, seed))
                credited.append(bucket_of(keys[offset + 1], k, buckets, seed))
        local = np.bincount(np.asarray(credited, dtype=np.int64), minlength=buckets)
        with lock:
            counts[:] += local
        return len(credited) // 2

    distinct = sum(WorkerPool(workers).run(chunk_producer(records, chunk_size, k), handle))
    logging.info(f'Counted about {distinct} distinct (k+1)-mers into {buckets} buckets')
    return BucketCounters(counts=counts, seed=seed)


def greedy_partition(counters: BucketCounters, rounds: int) -> PartitionPlan:
    """Splits [0, Q) into contiguous classes of balanced load with one linear scan.

    Each class but the last takes the longest run of buckets whose load stays within
    ceil(total / rounds), always at least one bucket and never so many that a later
    class would be left without one. The last class takes the remaining buckets.

    Args:
        counters (BucketCounters): Per-bucket loads.
        rounds (int): Number of classes.

    Returns:
        PartitionPlan: The classes and their loads.

    Raises:
        ValueError: rounds < 1 or rounds > Q.
    """
    counts = counters.counts
    size = len(counts)
    if rounds < 1:
        raise ValueError(f'Number of rounds must be at least 1, got {rounds}.')
    if rounds > size:
        raise ValueError(f'Number of rounds ({rounds}) exceeds the number of buckets ({size}).')
    cumulative = np.cumsum(counts)
    target = -(-int(cumulative[-1]) // rounds)
    ranges = []
    start = 0
    for class_index in range(rounds - 1):
        base = int(cumulative[start - 1]) if start else 0
        stop = int(np.searchsorted(cumulative, base + target, side='right'))
        stop = max(stop, start + 1)
        stop = min(stop, size - (rounds - 1 - class_index))
        ranges.append((start, stop))
        start = stop
    ranges.append((start, size))
    loads = [int(counts[a:b].sum()) for a, b in ranges]
    return PartitionPlan(ranges=ranges, loads=loads)


def round_marks(records: Sequence[SequenceRecord],
                k: int,
                bucket_range: Tuple[int, int],
                buckets: int = DEFAULT_BUCKETS,
                seed: int = DEFAULT_SEED,
                strand_mode: StrandMode = StrandMode.DOUBLE,
                pool: Optional[WorkerPool] = None,
                chunk_size: int = DEFAULT_CHUNK_SIZE) -> MarkArray:
    """Marks the positions whose k-mer falls into the given bucket range.

    Buckets are hashed per position as the chunks stream past; no bucket table is kept.

    Args:
        records (Sequence[SequenceRecord]): The input S.
        k (int): The k-mer length.
        bucket_range (Tuple[int, int]): [start, stop) buckets of the round's class.
        buckets (int): Number of buckets Q.
        seed (int): Seed of the bucket hash.
        strand_mode (StrandMode): DOUBLE buckets canonical k-mers.
        pool (Optional[WorkerPool]): Pool running the scan, a single worker when None.
        chunk_size (int): Bases per chunk.

    Returns:
        MarkArray: The round's initial candidate set.
    """
    start, stop = bucket_range
    marks = MarkArray.empty(records, k)
    pool = pool or WorkerPool(1)

    def handle(chunk: Chunk) -> int:
        output = marks.segment(chunk.record_index, chunk.segment_index)
        owned = len(chunk.kmer_starts(k))
        marked = 0
        for offset, value, rc_value in iter_kmer_values(chunk.codes, k, 0, owned):
            if start <= bucket_of(kmer_key(value, rc_value, strand_mode), k, buckets, seed) < stop:
                output[chunk.start + offset] = 1
                marked += 1
        return marked

    pool.run(chunk_producer(records, chunk_size, k), handle)
    return marks


@dataclasses.dataclass
class RoundReport:
    """Diagnostics of one round.

    Attributes:
        index (int): 0-based round index.
        bucket_range (Tuple[int, int]): Buckets of the round's class.
        load (Optional[int]): Estimated class load, None when counting was skipped.
        result (TwoPassResult): Marks and pass statistics.
    """
    index: int
    bucket_range: Tuple[int, int]
    load: Optional[int]
    result: TwoPassResult


@dataclasses.dataclass
class RoundsResult:
    """Union of the per-round marks plus diagnostics."""
    marks: MarkArray
    rounds: List[RoundReport]
    plan: PartitionPlan
    peak_buffered_bytes: int = 0


def run_rounds(records: Sequence[SequenceRecord],
               k: int,
               rounds: int,
               filter_bits: int,
               strand_mode: StrandMode = StrandMode.DOUBLE,
               hash_count: int = DEFAULT_HASH_COUNT,
               seed: int = DEFAULT_SEED,
               workers: int = 1,
               chunk_size: int = DEFAULT_CHUNK_SIZE,
               buckets: int = DEFAULT_BUCKETS,
               max_table_keys: Optional[int] = None,
               exact: bool = True,
               validate: bool = False) -> RoundsResult:
    """Runs one two-pass filter per partition class and unions the surviving marks.

    Every position is initially marked in exactly one round, chosen by the bucket of
    its k-mer key, so each round's candidate set obeys closure. The result does not
    depend on the number of rounds.

    Args:
        records (Sequence[SequenceRecord]): The input S.
        k (int): The k-mer length.
        rounds (int): Number of rounds.
        filter_bits (int): Bloom filter size b, a power of two.
        strand_mode (StrandMode): Strand handling.
        hash_count (int): Bloom filter hash functions h.
        seed (int): Seed of every hash function.
        workers (int): Number of consumer threads.
        chunk_size (int): Bases per chunk.
        buckets (int): Number of buckets Q used for balancing.
        max_table_keys (Optional[int]): Capacity of each round's exact table.
        exact (bool): Run the exact pass; False gives partial compaction marks.
        validate (bool): Check closure of every candidate set.

    Returns:
        RoundsResult: Final marks and per-round diagnostics.

    Raises:
        ValueError: rounds is out of range.
        TableCapacityError: A round's exact table outgrew max_table_keys; names the round and its load.
    """
    if rounds < 1:
        raise ValueError(f'Number of rounds must be at least 1, got {rounds}.')
    if rounds == 1:
        plan = PartitionPlan(ranges=[(0, buckets)], loads=[None])
    else:
        counters = count_buckets(records, k, buckets, filter_bits, strand_mode, hash_count, seed, workers, chunk_size)
        plan = greedy_partition(counters, rounds)
    junction_filter = JunctionFilter(
        records, k,
        strand_mode=strand_mode,
        hash_count=hash_count,
        seed=seed,
        workers=workers,
        chunk_size=chunk_size,
        sentinels=sentinel_keys(records, k, strand_mode),
        validate=validate)

    final = MarkArray.empty(records, k)
    reports = []
    for index, (bucket_range, load) in enumerate(zip(plan.ranges, plan.loads)):
        if plan.rounds == 1:
            initial = MarkArray.full(records, k)
        else:
            initial = round_marks(records, k, bucket_range, buckets, seed, strand_mode, junction_filter.pool, chunk_size)
        logging.info(f'Round {index + 1}/{plan.rounds}: {initial.count()} initial marks, buckets [{bucket_range[0]}, {bucket_range[1]})')
        try:
            result = junction_filter.two_pass(initial, filter_bits, max_table_keys=max_table_keys, exact=exact)
        except TableCapacityError as err:
            raise TableCapacityError(err.cardinality, err.capacity, round_index=index, load_estimate=load) from err
        reports.append(RoundReport(index=index, bucket_range=bucket_range, load=load, result=result))
        final = final.union(result.marks)
    return RoundsResult(marks=final, rounds=reports, plan=plan, peak_buffered_bytes=junction_filter.pool.account.peak)
