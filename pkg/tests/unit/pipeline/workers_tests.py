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

"""Unit tests for the workers module."""

# pylint: disable=line-too-long
# pylint: disable=missing-function-docstring

from contextlib import nullcontext as does_not_raise
import threading
import time
from typing import List, Tuple

from hypothesis import given
from hypothesis import strategies as st
import pytest

from dbg_compactor.pipeline.workers import (
    Chunk,
    WorkerPool,
    chunk_bounds,
    chunk_producer
)
from dbg_compactor.sequences.fasta import SequenceRecord


@pytest.mark.parametrize(
    'length, chunk_size, k, expected, expectation',
    [
        (100, 40, 5, [(0, 40), (35, 75), (70, 100)], does_not_raise()),
        (40, 40, 5, [(0, 40)], does_not_raise()),
        (5, 10, 5, [(0, 5)], does_not_raise()),
        (76, 40, 5, [(0, 40), (35, 75), (70, 76)], does_not_raise()),
        (100, 9, 5, None, pytest.raises(ValueError))
    ]
)
def test_chunk_bounds(length: int, chunk_size: int, k: int, expected: List[Tuple[int, int]], expectation):
    """Tests chunk_bounds, which splits a segment into chunks overlapping by k
    bases. There are five test cases for this function:
        1. Three chunks, the last one shorter.
        2. A segment of exactly one chunk.
        3. A segment of exactly k bases.
        4. A last chunk holding a single k-mer.
        5. Chunk size below 2k, expecting a ValueError.

    Args:
        length (int): Segment length.
        chunk_size (int): Bases per chunk.
        k (int): The k-mer length.
        expected (List[Tuple[int, int]]): Expected chunk bounds.
        expectation: Any corresponding expected errors for each set of parameters.
    """
    with expectation:
        assert chunk_bounds(length, chunk_size, k) == expected


@given(st.integers(min_value=1, max_value=20), st.integers(min_value=0, max_value=300), st.integers(min_value=0, max_value=30))
def test_chunks_own_every_start_once(k: int, extra: int, slack: int):
    """Tests Chunk.kmer_starts, which splits the k-mer starts of a segment among
    its chunks without gaps or overlaps."""
    length = k + extra
    chunk_size = 2 * k + slack
    sequence = ('ACGT' * (length // 4 + 1))[:length]
    record = SequenceRecord.from_sequence('r', sequence, k=k)
    chunks = list(chunk_producer([record], chunk_size, k))
    kmer_starts = [p for chunk in chunks for p in chunk.kmer_starts(k)]
    assert kmer_starts == list(range(length - k + 1))
    assert chunks[-1].last and not any(chunk.last for chunk in chunks[:-1])
    for chunk in chunks:
        assert chunk.codes == record.segments[0].codes[chunk.start:chunk.stop]


def test_chunk_producer_order():
    """Tests chunk_producer, which walks records and segments in input order."""
    records = [SequenceRecord.from_sequence('a', 'ACGTNNTTGCA', k=3), SequenceRecord.from_sequence('b', 'GGGG', k=3)]
    chunks = list(chunk_producer(records, 6, 3))
    assert [(c.record_index, c.segment_index, c.start, c.stop, c.last) for c in chunks] == [
        (0, 0, 0, 4, True),
        (0, 1, 0, 5, True),
        (1, 0, 0, 4, True)
    ]
    assert chunks[1].codes == bytes([3, 3, 2, 1, 0])


def make_chunks(n: int, size: int = 10) -> List[Chunk]:
    return [Chunk(0, 0, i, i + size, i == n - 1, bytes(size)) for i in range(n)]


@pytest.mark.parametrize('workers', [1, 2, 8])
def test_worker_pool_keeps_order(workers: int):
    """Tests WorkerPool.run, which returns results in chunk order.

    Args:
        workers (int): Number of consumer threads.
    """
    def handler(chunk: Chunk) -> int:
        time.sleep(0.001 * (chunk.start % 3))
        return chunk.start

    pool = WorkerPool(workers)
    assert pool.run(make_chunks(50), handler) == list(range(50))
    assert pool.account.resident == 0


def test_worker_pool_bounds_resident_chunks():
    """Tests WorkerPool, which holds at most queue_depth + workers + 1 chunks."""
    pool = WorkerPool(2, queue_depth=3)
    pool.run(make_chunks(40), lambda chunk: time.sleep(0.001))
    assert 0 < pool.account.peak <= (3 + 2 + 1) * 10


def test_worker_pool_runs_on_several_threads():
    """Tests WorkerPool, whose handlers run on worker threads."""
    names = set()
    lock = threading.Lock()

    def handler(chunk: Chunk):
        with lock:
            names.add(threading.current_thread().name)
        time.sleep(0.002)
        return chunk.start

    WorkerPool(4).run(make_chunks(20), handler)
    assert threading.current_thread().name not in names


def test_worker_pool_reraises():
    """Tests WorkerPool.run, which re-raises the first handler error."""
    def handler(chunk: Chunk):
        if chunk.start == 7:
            raise MemoryError('table full')
        return chunk.start

    with pytest.raises(MemoryError, match='table full'):
        WorkerPool(3).run(make_chunks(30), handler)


def test_worker_pool_reraises_producer_error():
    """Tests WorkerPool.run, which re-raises an error of the chunk iterator."""
    def chunks():
        yield from make_chunks(3)
        raise ValueError('bad input')

    with pytest.raises(ValueError, match='bad input'):
        WorkerPool(2).run(chunks(), lambda chunk: chunk.start)


def test_worker_pool_invalid():
    """Tests WorkerPool, which needs at least one worker."""
    with pytest.raises(ValueError):
        WorkerPool(0)
