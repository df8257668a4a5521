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

"""Runs the whole construction: parse, filter in rounds, build, write and report."""

# pylint: disable=C0103
# pylint: disable=line-too-long
# pylint: disable=logging-fstring-interpolation

import dataclasses
import logging
import time
from typing import Dict, List, Optional, Sequence

from dbg_compactor.analysis.estimators import memory_estimate
from dbg_compactor.filtering.marks import MarkArray, iter_keys
from dbg_compactor.filtering.partitioner import RoundsResult, run_rounds
from dbg_compactor.graph.builder import build_edges, enumerate_junctions
from dbg_compactor.graph.model import CompactedGraph, JunctionRecord
from dbg_compactor.graph.writers import writer_for
from dbg_compactor.pipeline.config import RunConfig
from dbg_compactor.sequences.fasta import SequenceRecord, parse_fasta_files, reverse_complement
from dbg_compactor.utils.constants import (
    CONFIG_HEADER,
    MARKS_TSV_HEADER,
    PARTITION_TSV_HEADER,
    RUN_REPORT_TEMPLATE
)
from dbg_compactor.utils.utils import (
    open_output,
    render_template,
    tsv_lines,
    write_file,
    write_yaml_file
)


@dataclasses.dataclass
class RunResult:
    """Everything a run produced.

    Attributes:
        config (RunConfig): The resolved configuration.
        records (List[SequenceRecord]): Parsed input.
        rounds (RoundsResult): Marks and per-round diagnostics.
        junctions (List[JunctionRecord]): Junction occurrences in input order.
        graph (CompactedGraph): The compacted graph.
        timings (Dict[str, float]): Wall time per stage in seconds.
        report (Dict[str, float]): Summary metrics of the run report.
    """
    config: RunConfig
    records: List[SequenceRecord]
    rounds: RoundsResult
    junctions: List[JunctionRecord]
    graph: CompactedGraph
    timings: Dict[str, float]
    report: Dict[str, float]


def distinct_marked_keys(records: Sequence[SequenceRecord], marks: MarkArray, config: RunConfig) -> set:
    """Keys of the distinct k-mers marked at least once."""
    return {key for (r, s, offset), key in iter_keys(records, config.k, config.strand_mode) if marks.bits[r][s][offset]}


def link_count(graph: CompactedGraph) -> int:
    """Distinct k-mers that are not vertices, counted from the interiors of the edge labels.

    Every such k-mer lies inside exactly one stored label. A label equal to its own
    reverse complement holds each of its interior k-mers on both strands.
    """
    k = graph.k
    links = 0
    for label in graph.labels():
        interior = max(len(label) - k - 1, 0)
        if graph.double_strand and interior and label == reverse_complement(label):
            interior = (interior + (len(label) - k + 1) % 2) // 2
        links += interior
    return links


def summarize(config: RunConfig, records: Sequence[SequenceRecord], rounds: RoundsResult, graph: CompactedGraph) -> Dict[str, float]:
    """Computes the summary metrics of the run report."""
    first_pass = MarkArray.empty(records, config.k)
    for report in rounds.rounds:
        first_pass = first_pass.union(report.result.first_pass_marks)
    candidates = len(distinct_marked_keys(records, first_pass, config))
    junction_count = len(graph.vertices)
    links = link_count(graph)
    false_junctions = max(candidates - junction_count, 0)
    p = false_junctions / links if links else 0.0
    return {
        'input_bases': sum(record.bases for record in records),
        'junction_positions': rounds.marks.count(),
        'vertices': junction_count,
        'edges': graph.edge_count,
        'distinct_labels': len(graph.edges),
        'false_junctions': false_junctions,
        'peak_table_keys': max((report.result.table_cardinality for report in rounds.rounds), default=0),
        'peak_buffered_bytes': rounds.peak_buffered_bytes,
        'estimated_memory_bits': memory_estimate(config.filter_bits, junction_count, links, p, config.k),
    }


def write_reports(prefix: str, result: RunResult):
    """Writes <prefix>.report.tsv, .marks.tsv, .partition.tsv and .config.yaml."""
    config = result.config
    write_file(
        filepath=f'{prefix}.report.tsv',
        text=render_template(
            RUN_REPORT_TEMPLATE,
            config=config,
            rounds=result.rounds.rounds,
            timings=result.timings,
            **result.report),
        mode='w')
    mark_rows = []
    for report in result.rounds.rounds:
        mark_rows.append((report.index + 1, 'initial', report.result.initial))
        mark_rows.append((report.index + 1, 'first', report.result.first_pass))
        if report.result.second_pass is not None:
            mark_rows.append((report.index + 1, 'second', report.result.second_pass))
    write_file(f'{prefix}.marks.tsv', ''.join(tsv_lines(MARKS_TSV_HEADER, mark_rows)), 'w')
    plan = result.rounds.plan
    partition_rows = [(i + 1, start, stop, 'NA' if load is None else load) for i, ((start, stop), load) in enumerate(zip(plan.ranges, plan.loads))]
    write_file(f'{prefix}.partition.tsv', ''.join(tsv_lines(PARTITION_TSV_HEADER, partition_rows)), 'w')
    write_file(f'{prefix}.config.yaml', CONFIG_HEADER, 'w')
    write_yaml_file(f'{prefix}.config.yaml', config.to_yaml_dict(), 'a')


def run(config: RunConfig, records: Optional[List[SequenceRecord]] = None) -> RunResult:
    """Executes parse, round partitioning, two-pass filtering, graph building and output.

    Args:
        config (RunConfig): The run parameters.
        records (Optional[List[SequenceRecord]]): Already parsed input; read from
            config.input_paths when None.

    Returns:
        RunResult: Graph, junctions and diagnostics.

    Raises:
        FastaFormatError: An input file is malformed.
        OSError: An input cannot be read or an output cannot be written.
        TableCapacityError: A round's exact table exceeded max_table_keys.
    """
    timings = {}
    started = time.perf_counter()
    if records is None:
        records = parse_fasta_files(config.input_paths, k=config.k, workers=config.workers)
    timings['parse'] = time.perf_counter() - started

    started = time.perf_counter()
    rounds = run_rounds(
        records, config.k, config.rounds, config.filter_bits,
        strand_mode=config.strand_mode,
        hash_count=config.hash_count,
        seed=config.seed,
        workers=config.workers,
        chunk_size=config.chunk_size,
        buckets=config.buckets,
        max_table_keys=config.max_table_keys,
        exact=not config.partial,
        validate=config.validate_closure)
    timings['filter'] = time.perf_counter() - started

    started = time.perf_counter()
    junctions = enumerate_junctions(records, config.k, rounds.marks, config.strand_mode)
    graph = build_edges(records, junctions, config.k, config.strand_mode, workers=config.workers)
    timings['build'] = time.perf_counter() - started

    started = time.perf_counter()
    with open_output(config.output_path) as stream:
        writer_for(config.output_format, graph, junctions).write(stream)
    timings['write'] = time.perf_counter() - started

    result = RunResult(config=config, records=records, rounds=rounds, junctions=junctions, graph=graph, timings=timings, report={})
    if config.report_prefix:
        result.report = summarize(config, records, rounds, graph)
        write_reports(config.report_prefix, result)
        logging.info(f'Wrote run report to {config.report_prefix}.report.tsv')
    logging.info(f'Done: {len(graph.vertices)} junction k-mers, {graph.edge_count} edges in {sum(timings.values()):.2f}s')
    return result
