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

"""Turns final junction marks into the compacted graph: consecutive junction
occurrences of a segment are joined by an edge labelled with the substring between them."""

# pylint: disable=C0103
# pylint: disable=line-too-long
# pylint: disable=logging-fstring-interpolation

from concurrent.futures import ThreadPoolExecutor
import itertools
import logging
from typing import Dict, List, Sequence, Tuple

from dbg_compactor.filtering.marks import MarkArray
from dbg_compactor.graph.model import CompactedGraph, JunctionRecord, SourceCoordinate
from dbg_compactor.sequences.fasta import SequenceRecord, reverse_complement
from dbg_compactor.utils.enums import StrandMode


def enumerate_junctions(records: Sequence[SequenceRecord], k: int, marks: MarkArray, strand_mode: StrandMode = StrandMode.DOUBLE) -> List[JunctionRecord]:
    """Lists marked positions in input order and gives each distinct k-mer an id.

    Ids are assigned by first occurrence, so they only depend on the input order.

    Args:
        records (Sequence[SequenceRecord]): The input S.
        k (int): The k-mer length.
        marks (MarkArray): Final marks.
        strand_mode (StrandMode): DOUBLE identifies a k-mer with its reverse complement.

    Returns:
        List[JunctionRecord]: One record per marked position.
    """
    ids: Dict[str, int] = {}
    junctions = []
    for record_index, record in enumerate(records):
        for segment_index, segment in enumerate(record.segments):
            sequence = segment.sequence
            for offset in marks.offsets(record_index, segment_index):
                offset = int(offset)
                kmer = sequence[offset:offset + k]
                stored = kmer
                if strand_mode is StrandMode.DOUBLE:
                    stored = min(kmer, reverse_complement(kmer))
                junction_id = ids.setdefault(stored, len(ids))
                junctions.append(JunctionRecord(
                    seq_id=record.id,
                    segment_index=segment_index,
                    offset=offset,
                    junction_id=junction_id,
                    strand='+' if stored == kmer else '-',
                    record_index=record_index))
    return junctions


def segment_labels(sequence: str, offsets: Sequence[int], k: int) -> List[Tuple[int, str]]:
    """(start offset, label) of the edges between consecutive junction offsets of one segment."""
    return [(i, sequence[i:j + k]) for i, j in zip(offsets, offsets[1:])]


def spell(labels: Sequence[str], k: int) -> str:
    """Concatenates consecutive labels that overlap by k bases."""
    if not labels:
        return ''
    return labels[0] + ''.join(label[k:] for label in labels[1:])


def build_edges(records: Sequence[SequenceRecord],
                junctions: Sequence[JunctionRecord],
                k: int,
                strand_mode: StrandMode = StrandMode.DOUBLE,
                workers: int = 1) -> CompactedGraph:
    """Builds the compacted graph from ordered junction records.

    Segments are labelled in parallel; edges, multiplicities and links are merged in
    input order.

    Args:
        records (Sequence[SequenceRecord]): The input S.
        junctions (Sequence[JunctionRecord]): Output of enumerate_junctions.
        k (int): The k-mer length.
        strand_mode (StrandMode): Strand handling.
        workers (int): Number of threads labelling segments.

    Returns:
        CompactedGraph: Vertices are the junction k-mers; a segment with a single
            junction contributes a vertex and no edge.
    """
    graph = CompactedGraph(k, strand_mode)
    groups = []
    for (record_index, segment_index), group in itertools.groupby(junctions, key=lambda j: (j.record_index, j.segment_index)):
        group = list(group)
        segment = records[record_index].segments[segment_index]
        sequence = segment.sequence
        for junction in group:
            graph.add_vertex(sequence[junction.offset:junction.offset + k], vertex_id=junction.junction_id)
        groups.append((records[record_index].id, segment_index, segment, [j.offset for j in group]))

    def label(group):
        _, _, segment, offsets = group
        return segment_labels(segment.sequence, offsets, k)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        labelled = list(executor.map(label, groups))

    for (seq_id, segment_index, _, _), labels in zip(groups, labelled):
        previous = None
        for offset, text in labels:
            key, orientation = graph.add_edge(text, SourceCoordinate(seq_id, segment_index, offset))
            current = (key.label, orientation)
            if previous is not None:
                graph.add_link(previous, current)
            previous = current
    logging.info(f'Built compacted graph: {len(graph.vertices)} vertices, {graph.edge_count} edges, {len(graph.edges)} distinct labels')
    return graph
