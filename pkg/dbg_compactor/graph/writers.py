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

"""Creates the graph writer objects."""

# pylint: disable=C0103
# pylint: disable=line-too-long

from typing import Iterator, Sequence, TextIO

import mmh3

from dbg_compactor.graph.model import CompactedGraph, JunctionRecord
from dbg_compactor.utils.constants import GFA_VERSION, JUNCTIONS_TSV_HEADER
from dbg_compactor.utils.enums import OutputFormat
from dbg_compactor.utils.utils import tsv_lines


def segment_name(label: str) -> str:
    """Stable GFA segment name of a label."""
    return f'{mmh3.hash128(label, signed=False):032x}'


class GraphWriter():
    """The GraphWriter object serializes the result of a run to a text stream."""

    def lines(self) -> Iterator[str]:
        """Abstract method yielding the output lines, newline terminated.

        Raises:
            NotImplementedError: The subclass has not defined the `lines` method.
        """
        raise NotImplementedError('Subclass needs to define this.')

    def write(self, stream: TextIO):
        """Writes every line to the stream. I/O errors propagate to the caller."""
        for line in self.lines():
            stream.write(line)


class GFA1Writer(GraphWriter):
    """Writes a CompactedGraph as GFA1: one S-line per distinct label and one L-line
    per pair of labels that follow each other in some segment."""

    def __init__(self, graph: CompactedGraph):
        self.graph = graph

    def lines(self) -> Iterator[str]:
        graph = self.graph
        yield f'H\tVN:Z:{GFA_VERSION}\tKL:i:{graph.k}\tSM:Z:{graph.strand_mode.value}\n'
        for key, multiplicity in graph.iter_edges():
            tags = [f'LN:i:{len(key.label)}', f'MP:i:{multiplicity}']
            source = graph.sources.get(key.label)
            if source is not None:
                tags.append(f'SO:Z:{source.seq_id}:{source.segment_index}:{source.offset}')
            tags.append(f'JF:Z:{key.from_id}{key.from_strand}')
            tags.append(f'JT:Z:{key.to_id}{key.to_strand}')
            yield '\t'.join(['S', segment_name(key.label), key.label] + tags) + '\n'
        for first, first_orientation, second, second_orientation in graph.links:
            yield f'L\t{segment_name(first)}\t{first_orientation}\t{segment_name(second)}\t{second_orientation}\t{graph.k}M\n'


class JunctionsTSVWriter(GraphWriter):
    """Writes junction records as a tab separated table with a header row."""

    def __init__(self, junctions: Sequence[JunctionRecord]):
        self.junctions = junctions

    def lines(self) -> Iterator[str]:
        rows = ((j.seq_id, j.segment_index, j.offset, j.junction_id, j.strand) for j in self.junctions)
        yield from tsv_lines(JUNCTIONS_TSV_HEADER, rows)


def emit_gfa(graph: CompactedGraph, stream: TextIO):
    """Writes the graph as GFA1."""
    GFA1Writer(graph).write(stream)


def emit_junctions_tsv(junctions: Sequence[JunctionRecord], stream: TextIO):
    """Writes the junction records as TSV."""
    JunctionsTSVWriter(junctions).write(stream)


def writer_for(output_format: OutputFormat, graph: CompactedGraph, junctions: Sequence[JunctionRecord]) -> GraphWriter:
    """Picks the writer of an output format.

    Raises:
        ValueError: Unsupported format.
    """
    if output_format is OutputFormat.GFA1:
        return GFA1Writer(graph)
    if output_format is OutputFormat.JUNCTIONS:
        return JunctionsTSVWriter(junctions)
    raise ValueError(f'Unsupported output format: {output_format}. Supported formats: {", ".join(f.value for f in OutputFormat)}')
