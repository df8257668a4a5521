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

"""Reads FASTA genomes into records of 2-bit packed, N-free segments."""

# pylint: disable=C0103
# pylint: disable=line-too-long
# pylint: disable=logging-fstring-interpolation

from concurrent.futures import ThreadPoolExecutor
import dataclasses
import functools
import logging
import os
import re
from typing import BinaryIO, Iterable, List, Optional, TextIO, Tuple, Union

from bitarray import bitarray, frozenbitarray

from dbg_compactor.utils.constants import (
    ASCII_TO_CODE,
    COMPLEMENT,
    NUCLEOTIDE_CODES
)
from dbg_compactor.utils.exceptions import FastaFormatError

# Prefix code used by bitarray.encode/decode, two bits per base
BITARRAY_CODE = {base: bitarray(format(code, '02b')) for base, code in NUCLEOTIDE_CODES.items()}
# IUPAC nucleotide codes plus gap symbols; everything except ACGT separates segments
IUPAC_CHARACTERS = frozenset('ACGTURYKMSWBDHVN-.')
ACGT_RUN = re.compile(r'[ACGT]+')


@dataclasses.dataclass(frozen=True)
class Segment:
    """A maximal run of unambiguous bases of a record.

    Attributes:
        data (frozenbitarray): Bases packed two bits each (A=00, C=01, G=10, T=11).
        origin_offset (int): 0-based offset of the first base in the source record.
        length (int): Number of bases.
    """
    data: frozenbitarray
    origin_offset: int
    length: int

    @classmethod
    def from_sequence(cls, sequence: str, origin_offset: int = 0) -> 'Segment':
        """Packs an ACGT string into a Segment.

        Args:
            sequence (str): Bases over {A,C,G,T}, uppercase.
            origin_offset (int): Offset of the first base in the source record.

        Returns:
            Segment: The packed segment.

        Raises:
            ValueError: The sequence contains a character outside {A,C,G,T}.
        """
        packed = bitarray(endian='big')
        try:
            packed.encode(BITARRAY_CODE, sequence)
        except ValueError as err:
            raise ValueError(f'Segment sequences must only contain A, C, G, T: {err}') from err
        return cls(data=frozenbitarray(packed), origin_offset=origin_offset, length=len(sequence))

    def decode(self, start: int = 0, stop: Optional[int] = None) -> str:
        """Unpacks bases start..stop-1 into a string; nothing is cached."""
        stop = self.length if stop is None else min(stop, self.length)
        return ''.join(self.data[2 * start:2 * stop].decode(BITARRAY_CODE))

    def codes_range(self, start: int = 0, stop: Optional[int] = None) -> bytes:
        """Bases start..stop-1 as 2-bit codes, one byte per base."""
        return self.decode(start, stop).encode('ascii').translate(ASCII_TO_CODE)

    @property
    def sequence(self) -> str:
        """The decoded bases as a string."""
        return self.decode()

    @property
    def codes(self) -> bytes:
        """The bases as 2-bit codes, one byte per base."""
        return self.codes_range()

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return self.sequence


@dataclasses.dataclass(frozen=True)
class SequenceRecord:
    """One FASTA record split on undetermined bases.

    Attributes:
        id (str): First whitespace delimited token of the header.
        segments (Tuple[Segment, ...]): Kept segments in coordinate order.
        length (int): Length of the uppercased source sequence.
        gaps (Tuple[Tuple[int, str], ...]): (offset, text) of every stretch not covered by a
            kept segment: separator characters and runs too short to keep.
        dropped_segments (int): Number of ACGT runs discarded for being shorter than k.
    """
    id: str
    segments: Tuple[Segment, ...]
    length: int = 0
    gaps: Tuple[Tuple[int, str], ...] = ()
    dropped_segments: int = 0

    @classmethod
    def from_sequence(cls, record_id: str, sequence: str, k: int = 1) -> 'SequenceRecord':
        """Splits a sequence into segments of unambiguous bases.

        Args:
            record_id (str): The record identifier.
            sequence (str): The raw sequence; it is uppercased first.
            k (int): Runs shorter than k bases are discarded.

        Returns:
            SequenceRecord: The split record.
        """
        sequence = sequence.upper()
        segments = []
        gaps = []
        dropped = 0
        cursor = 0
        for match in ACGT_RUN.finditer(sequence):
            start, stop = match.span()
            if stop - start < k:
                dropped += 1
                continue
            if start > cursor:
                gaps.append((cursor, sequence[cursor:start]))
            segments.append(Segment.from_sequence(match.group(), origin_offset=start))
            cursor = stop
        if cursor < len(sequence):
            gaps.append((cursor, sequence[cursor:]))
        return cls(id=record_id, segments=tuple(segments), length=len(sequence), gaps=tuple(gaps), dropped_segments=dropped)

    def reassemble(self) -> str:
        """Rebuilds the uppercased source sequence from segments and gaps."""
        pieces = [(segment.origin_offset, segment.sequence) for segment in self.segments]
        pieces.extend(self.gaps)
        return ''.join(text for _, text in sorted(pieces))

    @property
    def bases(self) -> int:
        """Number of bases held in kept segments."""
        return sum(segment.length for segment in self.segments)


@functools.singledispatch
def reverse_complement(segment):
    """Returns the Watson-Crick reverse complement of a segment or an ACGT string.

    Args:
        segment (Union[Segment, str]): Sequence over {A,C,G,T}.

    Returns:
        Union[Segment, str]: Same type as the input. A Segment keeps its origin offset.
    """
    raise TypeError(f'Unsupported sequence type: {type(segment).__name__}.')


@reverse_complement.register
def _(segment: str) -> str:
    return segment.translate(COMPLEMENT)[::-1]


@reverse_complement.register
def _(segment: Segment) -> Segment:
    return Segment.from_sequence(reverse_complement(segment.sequence), origin_offset=segment.origin_offset)


def _text_lines(stream: Union[BinaryIO, TextIO], path: Optional[str]) -> Iterable[Tuple[int, str]]:
    """Yields (line number, line) with line endings removed."""
    for line_number, line in enumerate(stream, start=1):
        if isinstance(line, bytes):
            try:
                line = line.decode('ascii')
            except UnicodeDecodeError as err:
                raise FastaFormatError('Non-ASCII byte in FASTA input.', path, line_number) from err
        yield line_number, line.rstrip('\r\n')


def parse_fasta(stream: Union[BinaryIO, TextIO], k: int = 1, path: Optional[str] = None) -> List[SequenceRecord]:
    """Parses FASTA records and splits them on every non-ACGT character.

    Multi-line records and CRLF line endings are accepted. Sequence characters are
    case-insensitive IUPAC codes; lowercase bases are uppercased and kept.

    Args:
        stream (Union[BinaryIO, TextIO]): The FASTA input.
        k (int): Segments shorter than k are dropped and counted on the record.
        path (Optional[str]): Source name used in error messages.

    Returns:
        List[SequenceRecord]: Records in input order; empty for an empty stream.

    Raises:
        FastaFormatError: A header has an empty id, sequence data precedes the first
            header, or a line holds a character that is not an IUPAC code.
    """
    records = []
    record_id = None
    chunks = []

    def flush():
        if record_id is not None:
            record = SequenceRecord.from_sequence(record_id, ''.join(chunks), k=k)
            if record.dropped_segments:
                logging.warning(f'Record {record_id}: dropped {record.dropped_segments} segment(s) shorter than k={k}.')
            records.append(record)

    for line_number, line in _text_lines(stream, path):
        if line.startswith('>'):
            flush()
            tokens = line[1:].split()
            if not tokens:
                raise FastaFormatError('Header line has an empty record id.', path, line_number)
            record_id = tokens[0]
            chunks = []
            continue
        stripped = line.strip()
        if not stripped or stripped.startswith(';'):
            continue
        if record_id is None:
            raise FastaFormatError('Sequence data found before the first header line.', path, line_number)
        invalid = set(stripped.upper()) - IUPAC_CHARACTERS
        if invalid:
            raise FastaFormatError(f'Invalid sequence character(s): {"".join(sorted(invalid))}.', path, line_number)
        chunks.append(stripped)
    flush()
    return records


def parse_fasta_file(path: str, k: int = 1) -> List[SequenceRecord]:
    """Parses a FASTA file from disk.

    Args:
        path (str): Path to the file.
        k (int): Segments shorter than k are dropped.

    Returns:
        List[SequenceRecord]: Records of the file.
    """
    with open(path, 'rb') as stream:
        return parse_fasta(stream, k=k, path=path)


def parse_fasta_files(paths: Iterable[str], k: int = 1, workers: int = 1) -> List[SequenceRecord]:
    """Parses several FASTA files, one file per worker.

    Args:
        paths (Iterable[str]): Paths of the files.
        k (int): Segments shorter than k are dropped.
        workers (int): Maximum number of files parsed at once.

    Returns:
        List[SequenceRecord]: Records of all files, in path order.
    """
    paths = list(paths)
    logging.info(f'Parsing {len(paths)} FASTA file(s)')
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        per_file = list(executor.map(lambda p: parse_fasta_file(p, k=k), paths))
    records = [record for file_records in per_file for record in file_records]
    dropped = sum(record.dropped_segments for record in records)
    segments = sum(len(record.segments) for record in records)
    logging.info(f'Read {len(records)} record(s), {segments} segment(s), {dropped} dropped')
    return records


def read_manifest(path: str) -> List[str]:
    """Reads a manifest listing one FASTA path per line.

    Blank lines and lines starting with '#' are ignored. Relative paths are
    resolved against the directory of the manifest.

    Args:
        path (str): Path to the manifest.

    Returns:
        List[str]: The listed paths.
    """
    base = os.path.dirname(os.path.abspath(path))
    paths = []
    with open(path, 'r', encoding='utf-8') as file:
        for line in file:
            entry = line.strip()
            if not entry or entry.startswith('#'):
                continue
            paths.append(entry if os.path.isabs(entry) else os.path.join(base, entry))
    return paths
