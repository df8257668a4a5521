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

"""dbg-compactor builds compacted de Bruijn graphs from complete genomes."""

# pylint: disable=C0103
# pylint: disable=line-too-long
# pylint: disable=logging-fstring-interpolation
# pylint: disable=too-many-positional-arguments

import logging
import sys
from typing import Dict, List, Optional

from dbg_compactor.analysis.estimators import AnalysisModel
from dbg_compactor.graph.model import CompactedGraph
from dbg_compactor.graph.writers import GFA1Writer
from dbg_compactor.oracle.naive import naive_compacted_graph
from dbg_compactor.pipeline.config import RunConfig
from dbg_compactor.pipeline.runner import RunResult, run
from dbg_compactor.sequences.fasta import parse_fasta_files, read_manifest
from dbg_compactor.sequences.simulate import mutated_family, write_fasta
from dbg_compactor.utils.constants import (
    DEFAULT_HASH_COUNT,
    DEFAULT_K,
    ESTIMATE_TEMPLATE
)
from dbg_compactor.utils.enums import StrandMode
from dbg_compactor.utils.utils import coalesce, open_output, render_template

# Set up logging
logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                    format='%(message)s')
logger = logging.getLogger()


def resolve_config(input_paths: Optional[List[str]] = None,
                   sequences_manifest: Optional[str] = None,
                   config_path: Optional[str] = None,
                   **options) -> RunConfig:
    """Merges a yaml config file, a manifest and explicit options into a RunConfig.

    Explicit options that are None fall back to the config file, then to the defaults.

    Args:
        input_paths (Optional[List[str]]): FASTA files given directly.
        sequences_manifest (Optional[str]): File listing FASTA paths, appended to input_paths.
        config_path (Optional[str]): Yaml file holding RunConfig fields.
        **options: Any other RunConfig field.

    Returns:
        RunConfig: The validated configuration.

    Raises:
        ValueError: A parameter is invalid or no input was given.
    """
    paths = list(input_paths or [])
    if sequences_manifest:
        paths.extend(read_manifest(sequences_manifest))
    if paths:
        options['input_paths'] = paths
    if config_path:
        config = RunConfig.from_yaml(config_path, **options)
    else:
        config = RunConfig(**{key: value for key, value in options.items() if value is not None})
    if not config.input_paths:
        raise ValueError('No input FASTA files given.')
    return config


def construct(input_paths: Optional[List[str]] = None,
              sequences_manifest: Optional[str] = None,
              config_path: Optional[str] = None,
              **options) -> RunResult:
    """Builds the compacted de Bruijn graph of the input genomes and writes it out.
    Check the constants file for default values.

    Args:
        input_paths (Optional[List[str]]): FASTA files.
        sequences_manifest (Optional[str]): File listing further FASTA paths.
        config_path (Optional[str]): Yaml file with defaults for any RunConfig field.
        **options: RunConfig fields (k, filter_log2_bits, hash_count, rounds, workers,
            strand_mode, output_format, seed, chunk_size, buckets, partial, output_path,
            report_prefix, max_table_keys, validate_closure).

    Returns:
        RunResult: Graph, junction records and diagnostics.
    """
    config = resolve_config(input_paths, sequences_manifest, config_path, **options)
    logging.info(f'Constructing compacted graph: k={config.k}, b=2^{config.filter_log2_bits}, h={config.hash_count}, '
                 f'rounds={config.rounds}, workers={config.workers}, strand mode={config.strand_mode.value}')
    return run(config)


def estimate(hash_count: int = DEFAULT_HASH_COUNT,
             distinct_edges: int = 0,
             filter_bits: int = 1 << 24,
             links: int = 0,
             junctions: int = 0,
             compacted_edges: int = 0,
             repeat: float = 1.0,
             k: int = DEFAULT_K,
             bases: int = 0) -> Dict[str, float]:
    """Evaluates every closed-form estimate for the given parameters.

    Returns:
        Dict[str, float]: q, p, expected false junctions, expected marks, memory bits and
            operation counts.
    """
    model = AnalysisModel(m=bases, E=distinct_edges, J=junctions, L=links, h=hash_count,
                          b=filter_bits, r=repeat, Gc_edges=compacted_edges, k=k)
    return model.estimates()


def estimate_tsv(**parameters) -> str:
    """Renders estimate() as a two column TSV."""
    return render_template(ESTIMATE_TEMPLATE, estimates=estimate(**parameters))


def oracle(input_paths: List[str],
           k: Optional[int] = None,
           strand_mode: StrandMode = StrandMode.DOUBLE,
           output_path: Optional[str] = None) -> CompactedGraph:
    """Builds the compacted graph with the naive explicit-graph algorithm.

    Args:
        input_paths (List[str]): FASTA files.
        k (Optional[int]): The k-mer length.
        strand_mode (StrandMode): Strand handling.
        output_path (Optional[str]): Where to write GFA1, None to skip writing.

    Returns:
        CompactedGraph: The reference graph.
    """
    k = coalesce(k, DEFAULT_K)
    records = parse_fasta_files(input_paths, k=k)
    graph = naive_compacted_graph(records, k, strand_mode)
    if output_path is not None:
        with open_output(output_path) as stream:
            GFA1Writer(graph).write(stream)
    return graph


def simulate(genomes: int, length: int, mutation_rate: float = 0.01, seed: int = 0, output_path: Optional[str] = None):
    """Writes a mutated genome family as FASTA.

    Args:
        genomes (int): Number of genomes.
        length (int): Root genome length.
        mutation_rate (float): Per-base substitution rate of each descendant.
        seed (int): Generator seed.
        output_path (Optional[str]): Output FASTA, '-' or None for standard output.
    """
    family = mutated_family(genomes, length, mutation_rate, seed)
    with open_output(output_path) as stream:
        write_fasta(family, stream)
    logging.info(f'Wrote {genomes} genome(s) of about {length} bases')
