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

"""Unit tests for the builder module."""

# pylint: disable=line-too-long
# pylint: disable=missing-function-docstring

from typing import List

from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from dbg_compactor.filtering.marks import MarkArray
from dbg_compactor.filtering.partitioner import run_rounds
from dbg_compactor.graph.builder import (
    build_edges,
    enumerate_junctions,
    segment_labels,
    spell
)
from dbg_compactor.graph.model import JunctionRecord, SourceCoordinate
from dbg_compactor.oracle.naive import junction_positions, naive_compacted_graph
from dbg_compactor.sequences.fasta import SequenceRecord
from dbg_compactor.sequences.simulate import mutated_family
from dbg_compactor.utils.enums import StrandMode


@pytest.fixture(name='records')
def records_fixture() -> List[SequenceRecord]:
    return [
        SequenceRecord.from_sequence('a', 'TGGCACGTC', k=2),
        SequenceRecord.from_sequence('b', 'TGGCACTTC', k=2)
    ]


def test_enumerate_junctions(records: List[SequenceRecord]):
    """Tests enumerate_junctions, which lists marked positions in input order and
    numbers k-mers by first occurrence."""
    marks = junction_positions(records, 2, StrandMode.SINGLE)
    assert enumerate_junctions(records, 2, marks, StrandMode.SINGLE) == [
        JunctionRecord('a', 0, 0, 0, '+', 0),
        JunctionRecord('a', 0, 4, 1, '+', 0),
        JunctionRecord('a', 0, 7, 2, '+', 0),
        JunctionRecord('b', 0, 0, 0, '+', 1),
        JunctionRecord('b', 0, 4, 1, '+', 1),
        JunctionRecord('b', 0, 7, 2, '+', 1)
    ]


def test_enumerate_junctions_double_strand():
    """Tests enumerate_junctions, which gives a k-mer and its reverse complement
    one id and flags the strand of each occurrence."""
    records = [SequenceRecord.from_sequence('x', 'TGNCA', k=2)]
    marks = MarkArray.full(records, 2)
    junctions = enumerate_junctions(records, 2, marks, StrandMode.DOUBLE)
    assert [(j.segment_index, j.offset, j.junction_id, j.strand) for j in junctions] == [(0, 0, 0, '-'), (1, 0, 0, '+')]


@pytest.mark.parametrize(
    'sequence, offsets, expected',
    [
        ('TGGCACGTC', [0, 4, 7], [(0, 'TGGCAC'), (4, 'ACGTC')]),
        ('AAAA', [0, 1, 2], [(0, 'AAA'), (1, 'AAA')]),
        ('ACGT', [0], [])
    ]
)
def test_segment_labels(sequence: str, offsets: List[int], expected):
    """Tests segment_labels, which spells the substring between consecutive
    junctions, both junctions included. There are three test cases for this function:
        1. Two labels of different lengths.
        2. Adjacent junctions give labels of k + 1 bases.
        3. A single junction gives no label.

    Args:
        sequence (str): The segment.
        offsets (List[int]): Junction offsets.
        expected: Expected (offset, label) pairs.
    """
    assert segment_labels(sequence, offsets, 2) == expected


def test_spell():
    """Tests spell, which joins labels overlapping by k bases."""
    assert spell(['TGGCAC', 'ACGTC'], 2) == 'TGGCACGTC'
    assert spell([], 2) == ''


def test_build_edges_single_strand(records: List[SequenceRecord]):
    """Tests build_edges on TGGCACGTC and TGGCACTTC, which gives TGGCAC twice,
    ACGTC and ACTTC."""
    marks = junction_positions(records, 2, StrandMode.SINGLE)
    graph = build_edges(records, enumerate_junctions(records, 2, marks, StrandMode.SINGLE), 2, StrandMode.SINGLE)
    assert graph.vertices == {0: 'TG', 1: 'AC', 2: 'TC'}
    assert graph.labels() == {'TGGCAC': 2, 'ACGTC': 1, 'ACTTC': 1}
    assert graph.sources['TGGCAC'] == SourceCoordinate('a', 0, 0)
    assert graph.sources['ACTTC'] == SourceCoordinate('b', 0, 4)
    assert list(graph.links) == [('TGGCAC', '+', 'ACGTC', '+'), ('TGGCAC', '+', 'ACTTC', '+')]
    assert graph.canonical_form() == naive_compacted_graph(records, 2, StrandMode.SINGLE).canonical_form()


def test_build_edges_homopolymer():
    """Tests build_edges on AAAA, which gives a self-loop AA to AA of multiplicity two."""
    records = [SequenceRecord.from_sequence('h', 'AAAA', k=2)]
    marks = junction_positions(records, 2, StrandMode.SINGLE)
    graph = build_edges(records, enumerate_junctions(records, 2, marks, StrandMode.SINGLE), 2, StrandMode.SINGLE)
    assert graph.labels() == {'AAA': 2}
    assert list(graph.links) == [('AAA', '+', 'AAA', '+')]


def test_build_edges_single_junction_segment():
    """Tests build_edges, where a segment of exactly k bases adds a vertex and no edge."""
    records = [SequenceRecord.from_sequence('s', 'ACG', k=3)]
    graph = build_edges(records, enumerate_junctions(records, 3, MarkArray.full(records, 3)), 3)
    assert graph.vertices == {0: 'ACG'}
    assert not graph.edges


@pytest.mark.parametrize('workers', [1, 4])
def test_build_edges_double_strand(records: List[SequenceRecord], workers: int):
    """Tests build_edges in double-strand mode against the explicit graph.

    Args:
        workers (int): Threads labelling segments.
    """
    marks = junction_positions(records, 2, StrandMode.DOUBLE)
    graph = build_edges(records, enumerate_junctions(records, 2, marks), 2, workers=workers)
    assert graph.canonical_form() == naive_compacted_graph(records, 2, StrandMode.DOUBLE).canonical_form()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.text(alphabet='ACGTN', min_size=0, max_size=40), min_size=1, max_size=3),
       st.integers(min_value=1, max_value=5),
       st.sampled_from(list(StrandMode)),
       st.integers(min_value=1, max_value=3))
def test_pipeline_matches_naive_graph(sequences: List[str], k: int, strand_mode: StrandMode, rounds: int):
    """Tests the filter and build_edges together, whose graph equals the compacted
    explicit graph and whose labels spell every segment back."""
    records = [SequenceRecord.from_sequence(f's{i}', sequence, k=k) for i, sequence in enumerate(sequences)]
    marks = run_rounds(records, k, rounds, 64, strand_mode, buckets=8, chunk_size=max(2 * k, 8), workers=2).marks
    junctions = enumerate_junctions(records, k, marks, strand_mode)
    graph = build_edges(records, junctions, k, strand_mode)
    assert graph.canonical_form() == naive_compacted_graph(records, k, strand_mode).canonical_form()
    for record_index, record in enumerate(records):
        for segment_index, segment in enumerate(record.segments):
            offsets = [int(o) for o in marks.offsets(record_index, segment_index)]
            assert offsets[0] == 0 and offsets[-1] == len(segment) - k
            if len(offsets) > 1:
                labels = [label for _, label in segment_labels(segment.sequence, offsets, k)]
                assert spell(labels, k) == segment.sequence


@settings(max_examples=12, deadline=None)
@given(st.integers(min_value=1, max_value=3),
       st.integers(min_value=50, max_value=2000),
       st.integers(min_value=0, max_value=1000),
       st.sampled_from([11, 25]),
       st.sampled_from(list(StrandMode)),
       st.sampled_from([1, 2, 4]),
       st.sampled_from([256, 1 << 16]))
def test_pipeline_matches_naive_graph_on_families(genomes: int, length: int, seed: int, k: int, strand_mode: StrandMode, rounds: int, filter_bits: int):
    """Tests the filter and build_edges on mutated genome families of up to 2000
    bases, with saturated and roomy filters, against the compacted explicit graph."""
    family = mutated_family(genomes, length, 0.03, seed)
    records = [SequenceRecord.from_sequence(record_id, sequence, k=k) for record_id, sequence in family]
    marks = run_rounds(records, k, rounds, filter_bits, strand_mode, seed=seed, buckets=64, chunk_size=500, workers=2).marks
    graph = build_edges(records, enumerate_junctions(records, k, marks, strand_mode), k, strand_mode)
    assert graph.canonical_form() == naive_compacted_graph(records, k, strand_mode).canonical_form()
