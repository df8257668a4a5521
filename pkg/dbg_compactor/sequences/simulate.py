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

"""Generates small genome families for tests and benchmarks."""

# pylint: disable=C0103
# pylint: disable=line-too-long

from typing import List, Sequence, TextIO, Tuple

import numpy as np

from dbg_compactor.utils.constants import NUCLEOTIDES

ALPHABET = np.frombuffer(NUCLEOTIDES.encode('ascii'), dtype=np.uint8)


def random_genome(length: int, rng: np.random.Generator) -> str:
    """Draws a uniform random ACGT string."""
    return ALPHABET[rng.integers(0, 4, size=length)].tobytes().decode('ascii')


def mutate(genome: str, mutation_rate: float, rng: np.random.Generator) -> str:
    """Applies substitutions, short indels and at most one segmental duplication.

    Args:
        genome (str): The ancestral sequence.
        mutation_rate (float): Per-base substitution probability; indels occur at a
            tenth of that rate.
        rng (np.random.Generator): Source of randomness.

    Returns:
        str: The mutated sequence.
    """
    bases = np.frombuffer(genome.encode('ascii'), dtype=np.uint8).copy()
    substituted = rng.random(len(bases)) < mutation_rate
    # shift by 1..3 so a substitution always changes the base
    codes = np.searchsorted(ALPHABET, bases[substituted])
    bases[substituted] = ALPHABET[(codes + rng.integers(1, 4, size=len(codes))) % 4]
    mutated = bases.tobytes().decode('ascii')

    pieces = []
    cursor = 0
    indel_sites = np.flatnonzero(rng.random(len(mutated)) < mutation_rate / 10)
    for site in indel_sites:
        if site < cursor:
            continue
        size = int(rng.integers(1, 6))
        pieces.append(mutated[cursor:site])
        if rng.random() < 0.5:
            pieces.append(random_genome(size, rng))
            cursor = site
        else:
            cursor = site + size
    pieces.append(mutated[cursor:])
    mutated = ''.join(pieces)

    if len(mutated) > 400 and rng.random() < 0.5:
        size = int(rng.integers(50, 200))
        source = int(rng.integers(0, len(mutated) - size))
        target = int(rng.integers(0, len(mutated)))
        mutated = mutated[:target] + mutated[source:source + size] + mutated[target:]
    return mutated


def mutated_family(n: int, length: int, mutation_rate: float = 0.01, seed: int = 0) -> List[Tuple[str, str]]:
    """Builds a family of related genomes: a random root and n-1 mutated descendants.

    Args:
        n (int): Number of genomes, at least 1.
        length (int): Length of the root genome.
        mutation_rate (float): Per-base substitution probability of each descendant.
        seed (int): Seed of the generator; equal seeds give equal families.

    Returns:
        List[Tuple[str, str]]: (record id, sequence) pairs, root first.

    Raises:
        ValueError: n < 1, length < 1 or mutation_rate outside [0, 1].
    """
    if n < 1 or length < 1:
        raise ValueError(f'Family size and genome length must be positive, got n={n}, length={length}.')
    if not 0.0 <= mutation_rate <= 1.0:
        raise ValueError(f'Mutation rate must be in [0, 1], got {mutation_rate}.')
    rng = np.random.default_rng(seed)
    root = random_genome(length, rng)
    family = [('genome_0', root)]
    for i in range(1, n):
        family.append((f'genome_{i}', mutate(root, mutation_rate, rng)))
    return family


def write_fasta(records: Sequence[Tuple[str, str]], stream: TextIO, line_width: int = 80):
    """Writes (id, sequence) pairs as FASTA with fixed-width sequence lines."""
    for record_id, sequence in records:
        stream.write(f'>{record_id}\n')
        for start in range(0, len(sequence), line_width):
            stream.write(sequence[start:start + line_width] + '\n')
