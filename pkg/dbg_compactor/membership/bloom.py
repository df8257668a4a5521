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

"""Creates the Bloom filter edge membership object."""

# pylint: disable=C0103
# pylint: disable=line-too-long

import threading
from typing import Iterable, List

from bitarray import bitarray

from dbg_compactor.kmers.model import EdgeMer, HashFamily
from dbg_compactor.membership.base import EdgeMembership
from dbg_compactor.utils.constants import MIN_FILTER_BITS


def is_power_of_two(n: int) -> bool:
    """Checks whether n is a positive power of two."""
    return n > 0 and n & (n - 1) == 0


class BloomFilter(EdgeMembership):
    """A Bloom filter of b bits addressed by the digests of a HashFamily.

    Digests are reduced to bit indices by masking, so b must be a power of two.
    Setting a bit is a single item assignment on the bit array, which no concurrent
    insert can undo, so there are no false negatives under any interleaving.
    """
    uses_fingerprints = True

    def __init__(self, bits: int, family: HashFamily):
        """Creates an empty filter.

        Args:
            bits (int): Number of bits b, a power of two no smaller than 64.
            family (HashFamily): The h hash functions.

        Raises:
            ValueError: bits is not a power of two or is too small.
        """
        super().__init__()
        if not is_power_of_two(bits) or bits < MIN_FILTER_BITS:
            raise ValueError(f'Bloom filter size must be a power of two of at least {MIN_FILTER_BITS} bits, got {bits}.')
        self.size = bits
        self.family = family
        self.bits = bitarray(bits)
        self.bits.setall(0)
        self._mask = bits - 1
        self._add_lock = threading.Lock()

    @property
    def hash_count(self) -> int:
        """Number of hash functions h."""
        return self.family.count

    def indices(self, edge: EdgeMer) -> List[int]:
        """Bit positions addressed by a key, one per hash function."""
        fingerprints = edge.fingerprints or self.family.fingerprints(edge.value, edge.length)
        digest = self.family.digest_fingerprint
        return [digest(fingerprint, j) & self._mask for j, fingerprint in enumerate(fingerprints)]

    def insert(self, edge: EdgeMer):
        for index in self.indices(edge):
            self.bits[index] = 1

    def query(self, edge: EdgeMer) -> bool:
        bits = self.bits
        return all(bits[index] for index in self.indices(edge))

    def add_many_if_absent(self, edges: Iterable[EdgeMer]) -> List[bool]:
        """Inserts every key that does not already query true.

        The test and the insert of each key happen atomically with respect to other
        callers of this method.

        Args:
            edges (Iterable[EdgeMer]): Keys to add.

        Returns:
            List[bool]: True for keys that were absent and got inserted.
        """
        added = []
        with self._add_lock:
            for edge in edges:
                indices = self.indices(edge)
                absent = not all(self.bits[index] for index in indices)
                if absent:
                    for index in indices:
                        self.bits[index] = 1
                added.append(absent)
        self._count(inserts=sum(added), queries=len(added))
        return added

    def fill_ratio(self) -> float:
        """Fraction of set bits."""
        return self.bits.count(1) / self.size
