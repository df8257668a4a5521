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

"""Reference compaction: builds the ordinary de Bruijn graph explicitly and walks
its maximal non-branching paths. Single threaded and meant for small inputs."""

# pylint: disable=C0103
# pylint: disable=line-too-long

import collections
from typing import Counter, Dict, Iterator, List, Sequence, Set

from dbg_compactor.filtering.marks import MarkArray
from dbg_compactor.graph.model import CompactedGraph
from dbg_compactor.sequences.fasta import SequenceRecord, reverse_complement
from dbg_compactor.utils.constants import ORACLE_MAX_BASES
from dbg_compactor.utils.enums import StrandMode


class ExplicitGraph:
    """The de Bruijn graph G(S, k), or G(S, k) united with the graph of the reverse
    complements in double-strand mode, stored as neighbor sets."""

    def __init__(self, k: int, strand_mode: StrandMode):
        self.k = k
        self.strand_mode = strand_mode
        self.successors: Dict[str, Set[str]] = collections.defaultdict(set)
        self.predecessors: Dict[str, Set[str]] = collections.defaultdict(set)
        self.occurrences: Counter[str] = collections.Counter()
        # (k+1)-mer occurrences on the input strand only
        self.edge_occurrences: Counter[str] = collections.Counter()
        self.sentinels: Set[str] = set()

    @classmethod
    def from_records(cls, records: Sequence[SequenceRecord], k: int, strand_mode: StrandMode = StrandMode.DOUBLE) -> 'ExplicitGraph':
        """Builds the graph of every segment.

        Raises:
            ValueError: The input holds more than ORACLE_MAX_BASES bases.
        """
        total = sum(record.bases for record in records)
        if total > ORACLE_MAX_BASES:
            raise ValueError(f'The naive oracle is limited to {ORACLE_MAX_BASES} bases, got {total}.')
        graph = cls(k, strand_mode)
        for record in records:
            for segment in record.segments:
                sequence = segment.sequence
                if len(sequence) < k:
                    continue
                graph.sentinels.add(graph.key(sequence[:k]))
                graph.sentinels.add(graph.key(sequence[-k:]))
                for i in range(len(sequence) - k):
                    graph.edge_occurrences[sequence[i:i + k + 1]] += 1
                strands = [sequence]
                if strand_mode is StrandMode.DOUBLE:
                    strands.append(reverse_complement(sequence))
                for strand in strands:
                    graph.add_string(strand)
        return graph

    def key(self, kmer: str) -> str:
        if self.strand_mode is StrandMode.DOUBLE:
            return min(kmer, reverse_complement(kmer))
        return kmer

    def add_string(self, sequence: str):
        k = self.k
        for i in range(len(sequence) - k + 1):
            self.occurrences[sequence[i:i + k]] += 1
        for i in range(len(sequence) - k):
            u, v = sequence[i:i + k], sequence[i + 1:i + k + 1]
            self.successors[u].add(v)
            self.predecessors[v].add(u)

    def vertices(self) -> Iterator[str]:
        return iter(self.occurrences)

    def is_bifurcation(self, kmer: str) -> bool:
        return len(self.successors.get(kmer, ())) > 1 or len(self.predecessors.get(kmer, ())) > 1

    def is_junction(self, kmer: str) -> bool:
        """A bifurcation, a sentinel, or both."""
        return self.key(kmer) in self.sentinels or self.is_bifurcation(kmer)

    def junction_keys(self) -> Set[str]:
        """Stored forms of the junction k-mers."""
        return {self.key(kmer) for kmer in self.vertices() if self.is_junction(kmer)}


def maximal_non_branching_paths(records: Sequence[SequenceRecord], k: int, strand_mode: StrandMode = StrandMode.DOUBLE) -> Counter[str]:
    """Spellings of the maximal non-branching paths with their number of occurrences.

    Every path starts at a junction, leaves it through one of its out-edges and
    stops at the first junction reached. A path occurs in the input wherever its
    first (k+1)-mer does. In double-strand mode a path and its reverse complement
    are counted under the smaller spelling.

    Returns:
        Counter[str]: Occurrences per spelling.
    """
    graph = ExplicitGraph.from_records(records, k, strand_mode)
    paths: Counter[str] = collections.Counter()
    for start in sorted(graph.vertices()):
        if not graph.is_junction(start):
            continue
        for successor in sorted(graph.successors.get(start, ())):
            spelling: List[str] = [start, successor[-1]]
            current = successor
            while not graph.is_junction(current):
                (current,) = graph.successors[current]
                spelling.append(current[-1])
            label = ''.join(spelling)
            count = graph.edge_occurrences[label[:k + 1]]
            if count:
                paths[graph.key(label) if strand_mode is StrandMode.DOUBLE else label] += count
    return paths


def junction_positions(records: Sequence[SequenceRecord], k: int, strand_mode: StrandMode = StrandMode.DOUBLE) -> MarkArray:
    """Marks every position whose k-mer is a junction."""
    graph = ExplicitGraph.from_records(records, k, strand_mode)
    junctions = graph.junction_keys()
    marks = MarkArray.empty(records, k)
    for record_index, record in enumerate(records):
        for segment_index, segment in enumerate(record.segments):
            sequence = segment.sequence
            bits = marks.segment(record_index, segment_index)
            for offset in range(len(sequence) - k + 1):
                if graph.key(sequence[offset:offset + k]) in junctions:
                    bits[offset] = 1
    return marks


def naive_compacted_graph(records: Sequence[SequenceRecord], k: int, strand_mode: StrandMode = StrandMode.DOUBLE) -> CompactedGraph:
    """Compacts the explicit graph by walking its maximal non-branching paths.

    Args:
        records (Sequence[SequenceRecord]): The input S.
        k (int): The k-mer length.
        strand_mode (StrandMode): Strand handling.

    Returns:
        CompactedGraph: Same data model as the pipeline output; compare with canonical_form().

    Raises:
        ValueError: The input is too large for an explicit graph.
    """
    graph = ExplicitGraph.from_records(records, k, strand_mode)
    compacted = CompactedGraph(k, strand_mode)
    for kmer in sorted(graph.junction_keys()):
        compacted.add_vertex(kmer)
    for label, count in sorted(maximal_non_branching_paths(records, k, strand_mode).items()):
        compacted.add_edge(label, multiplicity=count)
    return compacted
