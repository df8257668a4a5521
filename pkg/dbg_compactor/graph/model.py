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

"""Junction records and the compacted de Bruijn multigraph."""

# pylint: disable=C0103
# pylint: disable=line-too-long

from typing import Dict, Iterator, NamedTuple, Optional, Tuple

from dbg_compactor.sequences.fasta import reverse_complement
from dbg_compactor.utils.enums import StrandMode


class JunctionRecord(NamedTuple):
    """One occurrence of a junction k-mer in the input.

    Attributes:
        seq_id (str): Id of the source record.
        segment_index (int): Index of the segment within the record.
        offset (int): 0-based offset of the k-mer within the segment.
        junction_id (int): Dense id of the (canonical) k-mer.
        strand (str): '+' when the occurrence equals the stored k-mer, '-' otherwise.
        record_index (int): Index of the source record in the input.
    """
    seq_id: str
    segment_index: int
    offset: int
    junction_id: int
    strand: str
    record_index: int = 0


class EdgeKey(NamedTuple):
    """Endpoints and label of a compacted edge."""
    from_id: int
    from_strand: str
    to_id: int
    to_strand: str
    label: str


class SourceCoordinate(NamedTuple):
    """Where a label was first seen."""
    seq_id: str
    segment_index: int
    offset: int


# (label, orientation) pairs of two consecutive edges of one segment
Link = Tuple[str, str, str, str]

FLIP = {'+': '-', '-': '+'}


class CompactedGraph:
    """Multigraph whose vertices are junction k-mers and whose edges are labelled by
    the input substrings spelled between consecutive junctions.

    In double-strand mode vertices are canonical k-mers and each label is stored in
    its canonical orientation; strand flags tell how the label's first and last
    k-mers relate to the stored vertices.
    """

    def __init__(self, k: int, strand_mode: StrandMode = StrandMode.DOUBLE):
        self.k = k
        self.strand_mode = strand_mode
        self.vertices: Dict[int, str] = {}
        self.edges: Dict[EdgeKey, int] = {}
        self.sources: Dict[str, SourceCoordinate] = {}
        self.links: Dict[Link, None] = {}
        self._ids: Dict[str, int] = {}

    @property
    def double_strand(self) -> bool:
        return self.strand_mode is StrandMode.DOUBLE

    def canonical(self, sequence: str) -> str:
        """The stored representative of a k-mer or label."""
        if not self.double_strand:
            return sequence
        return min(sequence, reverse_complement(sequence))

    def orient(self, sequence: str) -> Tuple[str, str]:
        """Returns (stored form, '+' or '-') of a k-mer or label."""
        stored = self.canonical(sequence)
        return stored, '+' if stored == sequence else '-'

    def add_vertex(self, kmer: str, vertex_id: Optional[int] = None) -> Tuple[int, str]:
        """Registers a junction k-mer.

        Args:
            kmer (str): The k-mer in any orientation.
            vertex_id (Optional[int]): Id to use for a new vertex; defaults to the next free id.

        Returns:
            Tuple[int, str]: Vertex id and the strand of kmer relative to the stored k-mer.
        """
        stored, strand = self.orient(kmer)
        existing = self._ids.get(stored)
        if existing is None:
            existing = len(self.vertices) if vertex_id is None else vertex_id
            self._ids[stored] = existing
            self.vertices[existing] = stored
        return existing, strand

    def vertex_id(self, kmer: str) -> int:
        """Id of a registered k-mer in any orientation."""
        return self._ids[self.canonical(kmer)]

    def add_edge(self, label: str, source: Optional[SourceCoordinate] = None, multiplicity: int = 1) -> Tuple[EdgeKey, str]:
        """Adds occurrences of a label, registering its endpoints if needed.

        Args:
            label (str): Substring spelled between two consecutive junctions, length >= k + 1.
            source (Optional[SourceCoordinate]): Position of this occurrence.
            multiplicity (int): Number of occurrences to add.

        Returns:
            Tuple[EdgeKey, str]: The edge and the orientation of label relative to it.

        Raises:
            ValueError: The label is shorter than k + 1.
        """
        if len(label) <= self.k:
            raise ValueError(f'Edge labels need at least k + 1 = {self.k + 1} bases, got {label!r}.')
        stored, orientation = self.orient(label)
        from_id, from_strand = self.add_vertex(stored[:self.k])
        to_id, to_strand = self.add_vertex(stored[-self.k:])
        key = EdgeKey(from_id, from_strand, to_id, to_strand, stored)
        self.edges[key] = self.edges.get(key, 0) + multiplicity
        if source is not None:
            self.sources.setdefault(stored, source)
        return key, orientation

    def add_link(self, first: Tuple[str, str], second: Tuple[str, str]):
        """Records that two (label, orientation) edges follow each other in a segment."""
        link = (first[0], first[1], second[0], second[1])
        if self.double_strand:
            link = min(link, (second[0], FLIP[second[1]], first[0], FLIP[first[1]]))
        self.links.setdefault(link, None)

    def labels(self) -> Dict[str, int]:
        """Multiplicity per stored label."""
        return {key.label: multiplicity for key, multiplicity in self.edges.items()}

    @property
    def edge_count(self) -> int:
        """Number of edges of the multigraph, parallel edges counted."""
        return sum(self.edges.values())

    def iter_edges(self) -> Iterator[Tuple[EdgeKey, int]]:
        yield from self.edges.items()

    def canonical_form(self) -> Tuple[Tuple[str, ...], Tuple[Tuple[str, str, str, str, str, int], ...]]:
        """Id-free structural form used to compare graphs.

        Returns:
            Sorted vertex k-mers, and sorted (from k-mer, from strand, to k-mer, to strand,
            label, multiplicity) tuples.
        """
        vertices = tuple(sorted(self.vertices.values()))
        edges = tuple(sorted(
            (self.vertices[key.from_id], key.from_strand, self.vertices[key.to_id], key.to_strand, key.label, multiplicity)
            for key, multiplicity in self.edges.items()))
        return vertices, edges

    def __repr__(self) -> str:
        return f'CompactedGraph(k={self.k}, vertices={len(self.vertices)}, edges={self.edge_count})'
