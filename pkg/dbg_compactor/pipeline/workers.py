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

"""Splits segments into overlapping chunks and runs them through a bounded
single producer, multiple consumer worker pool."""

# pylint: disable=C0103
# pylint: disable=line-too-long
# pylint: disable=logging-fstring-interpolation
# pylint: disable=broad-exception-caught

import logging
import queue
import threading
from typing import Callable, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, TypeVar

from dbg_compactor.sequences.fasta import SequenceRecord

T = TypeVar('T')

_STOP = object()


class Chunk(NamedTuple):
    """A window of one segment handed to a worker.

    Attributes:
        record_index (int): Index of the record in the input list.
        segment_index (int): Index of the segment within the record.
        start (int): Offset of the first base of the chunk within the segment.
        stop (int): One past the last base.
        last (bool): Whether the chunk ends the segment.
        codes (bytes): Bases start..stop-1 as 2-bit codes.
    """
    record_index: int
    segment_index: int
    start: int
    stop: int
    last: bool
    codes: bytes

    def kmer_starts(self, k: int) -> range:
        """Start offsets of the k-mers owned by this chunk."""
        return range(self.start, self.stop - k + 1 if self.last else self.stop - k)


def chunk_bounds(length: int, chunk_size: int, k: int) -> List[Tuple[int, int]]:
    """Splits [0, length) into chunks that overlap by exactly k bases.

    Chunk i covers [i * (chunk_size - k), min(i * (chunk_size - k) + chunk_size, length)).
    A (k+1)-mer is owned by the chunk holding all of its bases whose start is smallest,
    so every (k+1)-mer start belongs to exactly one chunk.

    Args:
        length (int): Segment length.
        chunk_size (int): Bases per chunk, at least 2k.
        k (int): The k-mer length.

    Returns:
        List[Tuple[int, int]]: (start, stop) per chunk.

    Raises:
        ValueError: chunk_size < 2k.
    """
    if chunk_size < 2 * k:
        raise ValueError(f'Chunk size must be at least 2k = {2 * k}, got {chunk_size}.')
    bounds = []
    start = 0
    while True:
        stop = min(start + chunk_size, length)
        bounds.append((start, stop))
        if stop >= length:
            return bounds
        start += chunk_size - k


def chunk_producer(records: Sequence[SequenceRecord], chunk_size: int, k: int) -> Iterator[Chunk]:
    """Yields the chunks of every segment, records and segments in input order.

    Args:
        records (Sequence[SequenceRecord]): Parsed input.
        chunk_size (int): Bases per chunk, at least 2k.
        k (int): The k-mer length.

    Yields:
        Chunk: Overlapping windows of the segments.
    """
    for record_index, record in enumerate(records):
        for segment_index, segment in enumerate(record.segments):
            bounds = chunk_bounds(segment.length, chunk_size, k)
            for i, (start, stop) in enumerate(bounds):
                yield Chunk(record_index, segment_index, start, stop, i == len(bounds) - 1, segment.codes_range(start, stop))


class BufferAccount:
    """Tracks the input bytes held by queued or in-flight chunks."""

    def __init__(self):
        self._lock = threading.Lock()
        self.resident = 0
        self.peak = 0

    def acquire(self, size: int):
        with self._lock:
            self.resident += size
            self.peak = max(self.peak, self.resident)

    def release(self, size: int):
        with self._lock:
            self.resident -= size


class WorkerPool:
    """Runs a handler over a stream of chunks with one producer and many consumers.

    The queue between them is bounded, so at most (queue_depth + workers + 1) chunks
    are resident at once. Results come back in chunk order whatever the number of
    workers.
    """

    def __init__(self, workers: int, queue_depth: Optional[int] = None):
        """Creates the pool.

        Args:
            workers (int): Number of consumer threads.
            queue_depth (Optional[int]): Capacity of the chunk queue, defaults to workers.

        Raises:
            ValueError: workers < 1.
        """
        if workers < 1:
            raise ValueError(f'Worker count must be at least 1, got {workers}.')
        self.workers = workers
        self.queue_depth = queue_depth or workers
        self.account = BufferAccount()

    def run(self, chunks: Iterable[Chunk], handler: Callable[[Chunk], T]) -> List[T]:
        """Processes every chunk and waits for all workers to finish.

        Returning from run() is the barrier between two loops over the input.

        Args:
            chunks (Iterable[Chunk]): Chunks to process; consumed by the producer thread.
            handler (Callable[[Chunk], T]): Work done per chunk.

        Returns:
            List[T]: Handler results in chunk order.

        Raises:
            Exception: The first exception raised by a handler or by the producer.
        """
        tasks = queue.Queue(maxsize=self.queue_depth)
        results = {}
        errors = []
        failed = threading.Event()

        def produce():
            try:
                for index, chunk in enumerate(chunks):
                    if failed.is_set():
                        break
                    self.account.acquire(len(chunk.codes))
                    tasks.put((index, chunk))
            except Exception as err:
                errors.append(err)
                failed.set()
            finally:
                for _ in range(self.workers):
                    tasks.put(_STOP)

        def consume():
            while True:
                item = tasks.get()
                if item is _STOP:
                    return
                index, chunk = item
                try:
                    if not failed.is_set():
                        results[index] = handler(chunk)
                except Exception as err:
                    errors.append(err)
                    failed.set()
                finally:
                    self.account.release(len(chunk.codes))

        threads = [threading.Thread(target=consume, daemon=True) for _ in range(self.workers)]
        for thread in threads:
            thread.start()
        produce()
        for thread in threads:
            thread.join()
        if errors:
            raise errors[0]
        logging.debug(f'Processed {len(results)} chunk(s) on {self.workers} worker(s)')
        return [results[index] for index in sorted(results)]
