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

"""Command line interface of dbg-compactor.

Usage:
  dbg-compactor construct [options] [-k <k>] [--single-strand] [--seed <seed>] [-o <path>] [<fasta>...]
  dbg-compactor estimate [-h <h>] -E <edges> -b <bits> [-L <links>] [-J <junctions>] [-G <compacted>] [-R <r>] [-k <k>] [-m <bases>]
  dbg-compactor oracle [-k <k>] [--single-strand] [-o <path>] <fasta>...
  dbg-compactor simulate [-n <genomes>] [-l <length>] [--mutation-rate <rate>] [--seed <seed>] [-o <path>]
  dbg-compactor --help
  dbg-compactor --version

Construct options:
  -k <k>, --kmer-size <k>                  k-mer length, at most 128.
  -f <log2>, --filter-log2-size <log2>     Bloom filter size exponent, b = 2^log2.
  -q <h>, --hash-count <h>                 Bloom filter hash functions.
  -r <rounds>, --rounds <rounds>           Partitioning rounds.
  -t <n>, --workers <n>                    Worker threads.
  --single-strand                          Do not merge reverse complements.
  --partial                                Skip the exact pass (partially compacted graph).
  --format <fmt>                           Output format: gfa1 or junctions.
  --seed <seed>                            Seed of the hash functions.
  -o <path>, --output <path>               Output file, '-' for standard output.
  -s <manifest>, --sequences <manifest>    File listing one FASTA path per line.
  --config <yaml>                          Yaml file with default run parameters.
  --report <prefix>                        Write <prefix>.report.tsv and companion files.
  --chunk-size <bases>                     Bases per worker chunk.
  --buckets <q>                            Buckets used to balance rounds.
  --max-table-keys <n>                     Capacity of the exact table per round.
  --validate                               Check candidate-set closure after every pass.

Estimate options:
  -h <h>, --hashes <h>                     Hash functions [default: 4].
  -E <edges>, --distinct-edges <edges>     Distinct (k+1)-mers.
  -b <bits>, --filter-bits <bits>          Filter size in bits.
  -L <links>, --links <links>              Non-junction k-mers [default: 0].
  -J <junctions>, --junctions <junctions>  Junction k-mers [default: 0].
  -G <compacted>, --compacted-edges <compacted>  Compacted graph edges [default: 0].
  -R <r>, --repeat <r>                     Mean occurrences of a false junction [default: 1].
  -m <bases>, --bases <bases>              Total input length [default: 0].

Simulate options:
  -n <genomes>, --genomes <genomes>        Family size [default: 5].
  -l <length>, --length <length>           Root genome length [default: 10000].
  --mutation-rate <rate>                   Per-base substitution rate [default: 0.01].

Exit status: 0 success, 1 usage error, 2 input error, 3 resource error.
"""

# pylint: disable=C0103
# pylint: disable=line-too-long
# pylint: disable=broad-exception-caught
# pylint: disable=logging-fstring-interpolation

import logging
import sys
from typing import List, Optional

from docopt import DocoptExit, docopt
import yaml

from dbg_compactor import __version__
from dbg_compactor import Compactor
from dbg_compactor.utils.constants import DEFAULT_K
from dbg_compactor.utils.enums import ExitCode, OutputFormat, StrandMode
from dbg_compactor.utils.exceptions import FastaFormatError
from dbg_compactor.utils.utils import coalesce


def _int(value: Optional[str]) -> Optional[int]:
    return None if value is None else int(value)


def _construct(args: dict):
    Compactor.construct(
        input_paths=args['<fasta>'],
        sequences_manifest=args['--sequences'],
        config_path=args['--config'],
        k=_int(args['--kmer-size']),
        filter_log2_bits=_int(args['--filter-log2-size']),
        hash_count=_int(args['--hash-count']),
        rounds=_int(args['--rounds']),
        workers=_int(args['--workers']),
        strand_mode=StrandMode.SINGLE if args['--single-strand'] else None,
        output_format=OutputFormat(args['--format']) if args['--format'] else None,
        seed=_int(args['--seed']),
        output_path=args['--output'],
        report_prefix=args['--report'],
        chunk_size=_int(args['--chunk-size']),
        buckets=_int(args['--buckets']),
        max_table_keys=_int(args['--max-table-keys']),
        partial=True if args['--partial'] else None,
        validate_closure=True if args['--validate'] else None)


def _estimate(args: dict):
    sys.stdout.write(Compactor.estimate_tsv(
        hash_count=int(args['--hashes']),
        distinct_edges=int(args['--distinct-edges']),
        filter_bits=int(args['--filter-bits']),
        links=int(args['--links']),
        junctions=int(args['--junctions']),
        compacted_edges=int(args['--compacted-edges']),
        repeat=float(args['--repeat']),
        k=coalesce(_int(args['--kmer-size']), DEFAULT_K),
        bases=int(args['--bases'])))


def _oracle(args: dict):
    Compactor.oracle(
        input_paths=args['<fasta>'],
        k=_int(args['--kmer-size']),
        strand_mode=StrandMode.SINGLE if args['--single-strand'] else StrandMode.DOUBLE,
        output_path=args['--output'] or '-')


def _simulate(args: dict):
    Compactor.simulate(
        genomes=int(args['--genomes']),
        length=int(args['--length']),
        mutation_rate=float(args['--mutation-rate']),
        seed=_int(args['--seed']) or 0,
        output_path=args['--output'])


def main(argv: Optional[List[str]] = None) -> int:
    """Parses the command line and runs a subcommand.

    Args:
        argv (Optional[List[str]]): Arguments without the program name; defaults to sys.argv[1:].

    Returns:
        int: The process exit status.
    """
    argv = sys.argv[1:] if argv is None else argv
    # -h belongs to the estimate subcommand, so help is handled here
    if '--help' in argv:
        sys.stdout.write(__doc__)
        return ExitCode.SUCCESS.value
    try:
        args = docopt(__doc__, argv=argv, help=False, version=__version__)
    except DocoptExit as err:
        sys.stderr.write(f'{err}\n')
        return ExitCode.USAGE.value

    commands = {'construct': _construct, 'estimate': _estimate, 'oracle': _oracle, 'simulate': _simulate}
    command = next((name for name in commands if args[name]), None)
    if command is None:
        sys.stdout.write(__doc__)
        return ExitCode.SUCCESS.value
    try:
        commands[command](args)
    except FastaFormatError as err:
        logging.error(f'Input error: {err}')
        return ExitCode.INPUT.value
    except OSError as err:
        logging.error(f'Input error: {err}')
        return ExitCode.INPUT.value
    except MemoryError as err:
        logging.error(f'Resource error: {err}')
        return ExitCode.RESOURCE.value
    except (ValueError, yaml.YAMLError) as err:
        logging.error(f'Usage error: {err}')
        return ExitCode.USAGE.value
    return ExitCode.SUCCESS.value


if __name__ == '__main__':
    sys.exit(main())
