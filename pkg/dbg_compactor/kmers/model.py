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

"""k-mer and (k+1)-mer values, canonical normalization and the rolling hash family.

k-mers are packed two bits per base into Python integers, first base in the most
significant position, so integer order equals lexicographic order over A<C<G<T.
"""

# pylint: disable=C0103
# pylint: disable=line-too-long

import dataclasses
import random
from typing import Iterator, NamedTuple, Optional, Tuple, Union

from dbg_compactor.utils.constants import (
    K_MAX,
    NUCLEOTIDE_CODES,
    NUCLEOTIDES,
    ROLLING_HASH_MODULUS
)

MASK64 = (1 << 64) - 1


def validate_k(k: int):
    """Checks that k is within [1, K_MAX].

    Raises:
        ValueError: k is out of range.
    """
    if not 1 <= k <= K_MAX:
        raise ValueError(f'k must be between 1 and {K_MAX}, got {k}.')


def pack(sequence: str) -> int:
    """Packs an ACGT string into an integer."""
    value = 0
    for base in sequence:
        value = (value << 2) | NUCLEOTIDE_CODES[base]
    return value


def unpack(value: int, length: int) -> str:
    """Unpacks an integer produced by pack()."""
    return ''.join(NUCLEOTIDES[(value >> (2 * (length - 1 - i))) & 3] for i in range(length))


def reverse_complement_value(value: int, length: int) -> int:
    """Returns the packed reverse complement of a packed sequence."""
    result = 0
    for _ in range(length):
        result = (result << 2) | (3 - (value & 3))
        value >>= 2
    return result


def canonical_value(value: int, length: int) -> int:
    """Returns the smaller of a packed sequence and its reverse complement."""
    return min(value, reverse_complement_value(value, length))


@dataclasses.dataclass(frozen=True, order=True)
class KMer:
    """A window of exactly k bases.

    Attributes:
        value (int): The packed bases.
        k (int): The window length.
    """
    value: int
    k: int

    @classmethod
    def from_string(cls, sequence: str) -> 'KMer':
        """Packs an ACGT string into a KMer."""
        validate_k(len(sequence))
        return cls(value=pack(sequence), k=len(sequence))

    def reverse_complement(self) -> 'KMer':
        """Returns the reverse complement k-mer."""
        return KMer(value=reverse_complement_value(self.value, self.k), k=self.k)

    def __str__(self) -> str:
        return unpack(self.value, self.k)


class EdgeMer(NamedTuple):
    """A (k+1)-mer used as a key of the edge membership structures.

    Attributes:
        value (int): The packed bases.
        length (int): Number of bases, k + 1.
        fingerprints (Tuple[int, ...]): Rolling hash fingerprints of the bases, one per
            hash function, or empty when the consumer does not need them.
    """
    value: int
    length: int
    fingerprints: Tuple[int, ...] = ()

    @classmethod
    def from_string(cls, sequence: str) -> 'EdgeMer':
        """Packs an ACGT string into an EdgeMer without fingerprints."""
        validate_k(len(sequence) - 1)
        return cls(value=pack(sequence), length=len(sequence))

    def prefix(self) -> KMer:
        """The first k bases."""
        return KMer(value=self.value >> 2, k=self.length - 1)

    def suffix(self) -> KMer:
        """The last k bases."""
        return KMer(value=self.value & ((1 << (2 * (self.length - 1))) - 1), k=self.length - 1)

    def canonical(self) -> 'EdgeMer':
        """Returns the canonical edge; fingerprints are dropped."""
        return EdgeMer(value=canonical_value(self.value, self.length), length=self.length)

    def __str__(self) -> str:
        return unpack(self.value, self.length)


def normalize(x: KMer) -> KMer:
    """Returns min(x, reverse_complement(x)).

    Args:
        x (KMer): The k-mer.

    Returns:
        KMer: The canonical representative shared by both strands.
    """
    return KMer(value=canonical_value(x.value, x.k), k=x.k)


class RollingHashState(NamedTuple):
    """Fingerprints of the current window on both strands.

    Attributes:
        length (int): Window length.
        value (int): Packed window.
        rc_value (int): Packed reverse complement of the window.
        forward (Tuple[int, ...]): Fingerprint of the window per hash function.
        reverse (Tuple[int, ...]): Fingerprint of the reverse complement per hash function.
    """
    length: int
    value: int
    rc_value: int
    forward: Tuple[int, ...]
    reverse: Tuple[int, ...]


def mix64(x: int) -> int:
    """64-bit finalizer of splitmix64."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def _code(base: Union[int, str]) -> int:
    return NUCLEOTIDE_CODES[base] if isinstance(base, str) else base


class HashFamily:
    """A seeded family of polynomial rolling hash functions over k-mer windows.

    Function j hashes a window x as the sum of (x_i + 1) * B_j ** (len - 1 - i) modulo
    a Mersenne prime, with B_j drawn from the seed. Both strands of the window are
    tracked, so sliding by one base costs O(1) per function regardless of k and
    fingerprints of the eight flanking (k+1)-mers follow from the k-mer ones.
    """

    def __init__(self, count: int, k: int, seed: int):
        """Creates the family.

        Args:
            count (int): Number of hash functions h.
            k (int): Length of the rolled windows.
            seed (int): Seed; functions drawn from equal seeds are identical.

        Raises:
            ValueError: count < 1 or k out of range.
        """
        if count < 1:
            raise ValueError(f'Hash function count must be at least 1, got {count}.')
        validate_k(k)
        self.count = count
        self.k = k
        self.seed = seed
        rng = random.Random(seed)
        bases = []
        while len(bases) < count:
            base = rng.randrange(1 << 20, ROLLING_HASH_MODULUS - 1)
            if base not in bases:
                bases.append(base)
        p = ROLLING_HASH_MODULUS
        self.bases = tuple(bases)
        self.salts = tuple(rng.getrandbits(64) for _ in range(count))
        self.inverses = tuple(pow(b, -1, p) for b in self.bases)
        # B ** (k - 1) and B ** k per function
        self.top = tuple(pow(b, k - 1, p) for b in self.bases)
        self.shift = tuple(pow(b, k, p) for b in self.bases)

    def fingerprint(self, value: int, length: int, function_index: int) -> int:
        """Computes the fingerprint of a packed sequence from scratch.

        Raises:
            IndexError: function_index >= h.
        """
        self._check_index(function_index)
        b = self.bases[function_index]
        p = ROLLING_HASH_MODULUS
        h = 0
        for i in range(length - 1, -1, -1):
            h = (h * b + ((value >> (2 * i)) & 3) + 1) % p
        return h

    def fingerprints(self, value: int, length: int) -> Tuple[int, ...]:
        """Fingerprints of a packed sequence for every function."""
        return tuple(self.fingerprint(value, length, j) for j in range(self.count))

    def digest_fingerprint(self, fingerprint: int, function_index: int) -> int:
        """Turns a fingerprint into a well mixed unsigned 64-bit digest."""
        return mix64(fingerprint ^ self.salts[function_index])

    def init(self, window: Union[str, KMer]) -> RollingHashState:
        """Builds the state of a window of length k.

        Raises:
            ValueError: The window length differs from k.
        """
        kmer = window if isinstance(window, KMer) else KMer.from_string(window)
        if kmer.k != self.k:
            raise ValueError(f'Window length {kmer.k} does not match the family k={self.k}.')
        rc_value = reverse_complement_value(kmer.value, kmer.k)
        return RollingHashState(
            length=kmer.k,
            value=kmer.value,
            rc_value=rc_value,
            forward=self.fingerprints(kmer.value, kmer.k),
            reverse=self.fingerprints(rc_value, kmer.k))

    def roll(self, state: RollingHashState, outgoing: Union[int, str], incoming: Union[int, str]) -> RollingHashState:
        """Slides the window one base to the right.

        Args:
            state (RollingHashState): Current state.
            outgoing (Union[int, str]): The first base of the current window.
            incoming (Union[int, str]): The base appended on the right.

        Returns:
            RollingHashState: The state of the shifted window.
        """
        out_code, in_code = _code(outgoing), _code(incoming)
        k = state.length
        p = ROLLING_HASH_MODULUS
        forward = tuple(
            ((f - (out_code + 1) * top) * b + in_code + 1) % p
            for f, top, b in zip(state.forward, self.top, self.bases))
        reverse = tuple(
            ((r - (4 - out_code)) * inv + (4 - in_code) * top) % p
            for r, top, inv in zip(state.reverse, self.top, self.inverses))
        return RollingHashState(
            length=k,
            value=((state.value << 2) | in_code) & ((1 << (2 * k)) - 1),
            rc_value=(state.rc_value >> 2) | ((3 - in_code) << (2 * (k - 1))),
            forward=forward,
            reverse=reverse)

    def digest(self, state: RollingHashState, function_index: int) -> int:
        """Digest of the current window for one function.

        Raises:
            IndexError: function_index >= h.
        """
        self._check_index(function_index)
        return self.digest_fingerprint(state.forward[function_index], function_index)

    def out_edge(self, state: RollingHashState, code: int, canonical: bool, with_fingerprints: bool = True) -> EdgeMer:
        """The (k+1)-mer formed by the window followed by one base."""
        k = state.length
        p = ROLLING_HASH_MODULUS
        value = (state.value << 2) | code
        rc_value = ((3 - code) << (2 * k)) | state.rc_value
        if canonical and rc_value < value:
            fingerprints = tuple((4 - code) * shift + r for r, shift in zip(state.reverse, self.shift)) if with_fingerprints else ()
            return EdgeMer(rc_value, k + 1, tuple(f % p for f in fingerprints))
        fingerprints = tuple(f * b + code + 1 for f, b in zip(state.forward, self.bases)) if with_fingerprints else ()
        return EdgeMer(value, k + 1, tuple(f % p for f in fingerprints))

    def in_edge(self, state: RollingHashState, code: int, canonical: bool, with_fingerprints: bool = True) -> EdgeMer:
        """The (k+1)-mer formed by one base followed by the window."""
        k = state.length
        p = ROLLING_HASH_MODULUS
        value = (code << (2 * k)) | state.value
        rc_value = (state.rc_value << 2) | (3 - code)
        if canonical and rc_value < value:
            fingerprints = tuple(r * b + 4 - code for r, b in zip(state.reverse, self.bases)) if with_fingerprints else ()
            return EdgeMer(rc_value, k + 1, tuple(f % p for f in fingerprints))
        fingerprints = tuple((code + 1) * shift + f for f, shift in zip(state.forward, self.shift)) if with_fingerprints else ()
        return EdgeMer(value, k + 1, tuple(f % p for f in fingerprints))

    def scan(self, codes: bytes, start: int, stop: int) -> Iterator[Tuple[int, RollingHashState]]:
        """Yields (position, state) for the k-mers starting at positions [start, stop).

        Args:
            codes (bytes): The segment as 2-bit codes, one byte per base.
            start (int): First k-mer start.
            stop (int): One past the last k-mer start; clipped to len(codes) - k + 1.
        """
        k = self.k
        stop = min(stop, len(codes) - k + 1)
        if start >= stop:
            return
        value = 0
        for code in codes[start:start + k]:
            value = (value << 2) | code
        state = self.init(KMer(value=value, k=k))
        yield start, state
        for position in range(start + 1, stop):
            state = self.roll(state, codes[position - 1], codes[position + k - 1])
            yield position, state

    def _check_index(self, function_index: int):
        if not 0 <= function_index < self.count:
            raise IndexError(f'Hash function index {function_index} out of range for a family of {self.count}.')


def hash_init(family: HashFamily, window: Union[str, KMer]) -> RollingHashState:
    """Builds the rolling state of a window, see HashFamily.init."""
    return family.init(window)


def hash_roll(family: HashFamily, state: RollingHashState, outgoing: Union[int, str], incoming: Union[int, str]) -> RollingHashState:
    """Slides a window by one base, see HashFamily.roll."""
    return family.roll(state, outgoing, incoming)


def hash_digest(family: HashFamily, state: RollingHashState, function_index: int) -> int:
    """Digest of a window for one function, see HashFamily.digest."""
    return family.digest(state, function_index)


def iter_kmer_values(codes: bytes, k: int, start: int = 0, stop: Optional[int] = None) -> Iterator[Tuple[int, int, int]]:
    """Yields (position, value, reverse complement value) for k-mers starting in [start, stop).

    Args:
        codes (bytes): 2-bit codes, one byte per base.
        k (int): Window length.
        start (int): First k-mer start.
        stop (int): One past the last k-mer start; defaults to every k-mer.
    """
    last = len(codes) - k + 1
    stop = last if stop is None else min(stop, last)
    if start >= stop:
        return
    mask = (1 << (2 * k)) - 1
    high = 2 * (k - 1)
    value = 0
    rc_value = 0
    for code in codes[start:start + k - 1]:
        value = (value << 2) | code
        rc_value = (rc_value >> 2) | ((3 - code) << high)
    for position in range(start, stop):
        code = codes[position + k - 1]
        value = ((value << 2) | code) & mask
        rc_value = (rc_value >> 2) | ((3 - code) << high)
        yield position, value, rc_value
