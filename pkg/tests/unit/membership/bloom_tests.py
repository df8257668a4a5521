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

"""Unit tests for the bloom module."""

# pylint: disable=line-too-long
# pylint: disable=missing-function-docstring

from contextlib import nullcontext as does_not_raise
import math
import random

from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from dbg_compactor.analysis.estimators import bloom_fp_prob
from dbg_compactor.kmers.model import EdgeMer, HashFamily
from dbg_compactor.membership.bloom import BloomFilter, is_power_of_two

K = 10


@pytest.fixture(name='family')
def family_fixture() -> HashFamily:
    return HashFamily(4, K + 1, seed=42)


@pytest.mark.parametrize(
    'n, expected',
    [(1, True), (64, True), (1 << 40, True), (0, False), (-8, False), (96, False)]
)
def test_is_power_of_two(n: int, expected: bool):
    """Tests is_power_of_two on powers of two, zero, negatives and a non power.

    Args:
        n (int): The number.
        expected (bool): Whether n is a power of two.
    """
    assert is_power_of_two(n) == expected


@pytest.mark.parametrize(
    'bits, expectation',
    [
        (64, does_not_raise()),
        (1 << 16, does_not_raise()),
        (32, pytest.raises(ValueError)),
        (1000, pytest.raises(ValueError))
    ]
)
def test_bloom_filter_size(family: HashFamily, bits: int, expectation):
    """Tests BloomFilter, which needs a power of two of at least 64 bits. There
    are four test cases for this function:
        1. Smallest filter.
        2. Larger filter.
        3. Too small, expecting a ValueError.
        4. Not a power of two, expecting a ValueError.

    Args:
        bits (int): Filter size.
        expectation: Any corresponding expected errors for each set of parameters.
    """
    with expectation:
        bloom = BloomFilter(bits, family)
        assert bloom.size == bits
        assert bloom.fill_ratio() == 0.0
        assert bloom.hash_count == 4


def test_indices_with_and_without_fingerprints(family: HashFamily):
    """Tests BloomFilter.indices, which gives the same bits whether or not the key
    carries its fingerprints."""
    bloom = BloomFilter(1 << 12, family)
    edge = EdgeMer.from_string('ACGTACGTACG')
    with_fingerprints = EdgeMer(edge.value, edge.length, family.fingerprints(edge.value, edge.length))
    indices = bloom.indices(edge)
    assert indices == bloom.indices(with_fingerprints)
    assert len(indices) == 4
    assert all(0 <= index < 1 << 12 for index in indices)


@settings(max_examples=30, deadline=None)
@given(st.sets(st.integers(min_value=0, max_value=(1 << (2 * (K + 1))) - 1), min_size=1, max_size=200))
def test_no_false_negatives(values):
    """Tests BloomFilter, which answers true for every inserted key even when
    the filter is overfull."""
    bloom = BloomFilter(64, HashFamily(3, K + 1, seed=1))
    edges = [EdgeMer(value, K + 1) for value in values]
    bloom.insert_many(edges)
    assert all(bloom.query_many(edges))
    assert bloom.inserts == len(edges)


def test_add_many_if_absent(family: HashFamily):
    """Tests BloomFilter.add_many_if_absent, which reports keys that were absent."""
    bloom = BloomFilter(1 << 16, family)
    first = EdgeMer.from_string('ACGTACGTACG')
    second = EdgeMer.from_string('TTTTTTTTTTA')
    assert bloom.add_many_if_absent([first, second, first]) == [True, True, False]
    assert bloom.add_many_if_absent([second]) == [False]
    assert bloom.query(first) and bloom.query(second)
    assert (bloom.inserts, bloom.queries) == (2, 4)
    assert 0 < bloom.fill_ratio() <= 8 / (1 << 16)


def keys_for_load(hash_count: int, q: float, bits: int) -> int:
    """Number of keys that brings a filter to the false positive rate q."""
    return round(-math.log(1.0 - q ** (1.0 / hash_count)) * bits / hash_count)


@pytest.mark.parametrize(
    'hash_count, inserted, bits',
    [
        (2, keys_for_load(2, 0.01, 1 << 15), 1 << 15),
        (4, keys_for_load(4, 0.05, 1 << 15), 1 << 15),
        (4, keys_for_load(4, 0.1, 1 << 15), 1 << 15),
        (3, keys_for_load(3, 0.3, 1 << 15), 1 << 15),
        (4, 1 << 12, 1 << 15)
    ]
)
def test_false_positive_rate_matches_estimate(hash_count: int, inserted: int, bits: int):
    """Tests BloomFilter, whose false positive rate on fresh keys stays within 20%
    of (1 - e^(-hn/b))^h. There are five test cases for this function:
        1. q = 0.01 with two hash functions.
        2. q = 0.05 with four hash functions.
        3. q = 0.1 with four hash functions.
        4. q = 0.3 with three hash functions.
        5. Four hash functions at n/b = 1/8, where q is about 0.024.

    Args:
        hash_count (int): Number of hash functions h.
        inserted (int): Number of inserted keys n.
        bits (int): Filter size b.
    """
    queries = 40000
    rng = random.Random(5)
    universe = 1 << (2 * (K + 1))
    members = set()
    while len(members) < inserted:
        members.add(rng.randrange(universe))
    bloom = BloomFilter(bits, HashFamily(hash_count, K + 1, seed=42))
    bloom.insert_many(EdgeMer(value, K + 1) for value in members)
    false_positives = 0
    tested = 0
    while tested < queries:
        value = rng.randrange(universe)
        if value in members:
            continue
        tested += 1
        false_positives += bloom.query(EdgeMer(value, K + 1))
    expected = bloom_fp_prob(hash_count, inserted, bits)
    assert abs(false_positives / queries / expected - 1.0) < 0.2


def test_estimate_at_one_eighth_load():
    """Tests bloom_fp_prob at h = 4, n = 2^20 and b = 2^23."""
    assert bloom_fp_prob(4, 1 << 20, 1 << 23) == pytest.approx(0.0240, rel=0.01)
