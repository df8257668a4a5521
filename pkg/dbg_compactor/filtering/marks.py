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

"""Per-segment junction candidate marks."""

# pylint: disable=C0103
# pylint: disable=line-too-long

from typing import Dict, Iterable, Iterator, List, Sequence, Set, Tuple

from bitarray import bitarray
import numpy as np

from dbg_compactor.kmers.model import iter_kmer_values
from dbg_compactor.sequences.fasta import SequenceRecord
from dbg_compactor.utils.enums import StrandMode

# (record index, segment index, offset)
Position = Tuple[int, int, int]


def kmer_key(value: int, rc_value: int, strand_mode: StrandMode) -> int:
    """The value identifying a k-mer occurrence: canonical in double-strand mode, raw otherwise."""
    if strand_mode is StrandMode.DOUBLE:
        return min(value, rc_value)
    return value


def iter_keys(records: Sequence[SequenceRecord], k: int, strand_mode: StrandMode) -> Iterator[Tuple[Position, int]]:
    """Yields ((record, segment, offset), key) for every k-mer of the input."""
    for record_index, record in enumerate(records):
        for segment_index, segment in enumerate(record.segments):
            for offset, value, rc_value in iter_kmer_values(segment.codes, k):
                yield (record_index, segment_index, offset), kmer_key(value, rc_value, strand_mode)


def sentinel_keys(records: Sequence[SequenceRecord], k: int, strand_mode: StrandMode) -> Set[int]:
    """Keys of the k-mers that start or end some segment.

    In double-strand mode the keys are canonical, which makes a k-mer terminal on
    either strand of a segment a sentinel.
    """
    keys = set()
    for record in records:
        for segment in record.segments:
            if segment.length < k:
                continue
            for _, value, rc_value in iter_kmer_values(segment.codes_range(0, k), k):
                keys.add(kmer_key(value, rc_value, strand_mode))
            for _, value, rc_value in iter_kmer_values(segment.codes_range(segment.length - k), k):
                keys.add(kmer_key(value, rc_value, strand_mode))
    return keys


class MarkArray:
    """One bit per k-mer start of every segment, set for junction candidates."""

    def __init__(self, k: int, bits: List[List[bitarray]]):
        """Wraps per-record, per-segment bit arrays.

        Args:
            k (int): The k-mer length.
            bits (List[List[bitarray]]): bits[record][segment] has length - k + 1 bits.
        """
        self.k = k
        self.bits = bits

    @classmethod
    def _filled(cls, records: Sequence[SequenceRecord], k: int, value: int) -> 'MarkArray':
        bits = []
        for record in records:
            per_segment = []
            for segment in record.segments:
                marks = bitarray(max(segment.length - k + 1, 0))
                marks.setall(value)
                per_segment.append(marks)
            bits.append(per_segment)
        return cls(k, bits)

    @classmethod
    def full(cls, records: Sequence[SequenceRecord], k: int) -> 'MarkArray':
        """Every position marked."""
        return cls._filled(records, k, 1)

    @classmethod
    def empty(cls, records: Sequence[SequenceRecord], k: int) -> 'MarkArray':
        """No position marked."""
        return cls._filled(records, k, 0)

    @classmethod
    def from_positions(cls, records: Sequence[SequenceRecord], k: int, positions: Iterable[Position]) -> 'MarkArray':
        """Marks exactly the given positions."""
        marks = cls.empty(records, k)
        for record_index, segment_index, offset in positions:
            marks.bits[record_index][segment_index][offset] = 1
        return marks

    def copy(self) -> 'MarkArray':
        return MarkArray(self.k, [[bitarray(marks) for marks in record] for record in self.bits])

    def count(self) -> int:
        """Number of marked positions."""
        return sum(marks.count(1) for record in self.bits for marks in record)

    def size(self) -> int:
        """Number of positions."""
        return sum(len(marks) for record in self.bits for marks in record)

    def segment(self, record_index: int, segment_index: int) -> bitarray:
        return self.bits[record_index][segment_index]

    def offsets(self, record_index: int, segment_index: int) -> np.ndarray:
        """Marked offsets of one segment, ascending."""
        marks = self.bits[record_index][segment_index]
        return np.flatnonzero(np.frombuffer(marks.unpack(), dtype=np.uint8))

    def positions(self) -> Iterator[Position]:
        """Marked positions in scan order."""
        for record_index, record in enumerate(self.bits):
            for segment_index in range(len(record)):
                for offset in self.offsets(record_index, segment_index):
                    yield record_index, segment_index, int(offset)

    def union(self, other: 'MarkArray') -> 'MarkArray':
        return MarkArray(self.k, [[a | b for a, b in zip(mine, theirs)] for mine, theirs in zip(self.bits, other.bits)])

    def intersection(self, other: 'MarkArray') -> 'MarkArray':
        return MarkArray(self.k, [[a & b for a, b in zip(mine, theirs)] for mine, theirs in zip(self.bits, other.bits)])

    def issuperset(self, other: 'MarkArray') -> bool:
        """Whether every position marked in other is marked here."""
        return all((b & ~a).count(1) == 0 for mine, theirs in zip(self.bits, other.bits) for a, b in zip(mine, theirs))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MarkArray):
            return NotImplemented
        return self.k == other.k and self.bits == other.bits

    def __repr__(self) -> str:
        return f'MarkArray(k={self.k}, marked={self.count()}/{self.size()})'


def check_closure(records: Sequence[SequenceRecord], marks: MarkArray, strand_mode: StrandMode):
    """Verifies that positions holding the same k-mer are either all marked or all unmarked.

    Args:
        records (Sequence[SequenceRecord]): The input.
        marks (MarkArray): Marks to check.
        strand_mode (StrandMode): Whether k-mers are compared by canonical form.

    Raises:
        ValueError: Two occurrences of one k-mer disagree.
    """
    seen: Dict[int, Tuple[Position, bool]] = {}
    for position, key in iter_keys(records, marks.k, strand_mode):
        record_index, segment_index, offset = position
        marked = bool(marks.bits[record_index][segment_index][offset])
        first = seen.setdefault(key, (position, marked))
        if first[1] != marked:
            raise ValueError(f'Mark array violates closure: positions {first[0]} and {position} hold the same k-mer but are marked differently.')
