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

"""Closed-form estimators of the filter's error and resource behavior.

The estimates assume Bloom filter queries are independent and are meant for
parameter selection and sanity checks, not as guarantees.
"""

# pylint: disable=C0103
# pylint: disable=line-too-long

import dataclasses
import math
from typing import Dict

from dbg_compactor.utils.constants import MIN_FILTER_BITS

# Flanking (k+1)-mers that can turn a link into a false junction: 3 incoming, 3 outgoing
FALSE_EDGE_SLOTS = 6
# Upper bound on distinct edge keys a marked k-mer contributes to the exact table
EDGES_PER_CANDIDATE = 8


def bloom_fp_prob(h: int, E: float, b: float) -> float:
    """False positive probability q = (1 - e^(-hE/b))^h of a Bloom filter.

    Args:
        h (int): Number of hash functions.
        E (float): Number of distinct inserted keys.
        b (float): Number of bits, positive.

    Returns:
        float: q in [0, 1].

    Raises:
        ValueError: b <= 0, h < 1 or E < 0.
    """
    if b <= 0:
        raise ValueError(f'Filter size must be positive, got {b}.')
    if h < 1 or E < 0:
        raise ValueError(f'Expected h >= 1 and E >= 0, got h={h}, E={E}.')
    return (-math.expm1(-h * E / b)) ** h


def junction_fp_prob(q: float) -> float:
    """Probability p = 1 - (1 - q)^6 that a link is kept as a false junction."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f'q must be a probability, got {q}.')
    return 1.0 - (1.0 - q) ** FALSE_EDGE_SLOTS


def expected_false_junctions(L: float, p: float) -> float:
    """Expected number of false junctions E[FP] = L * p among L links."""
    return L * p


def expected_marks(Gc_edges: float, L: float, p: float, r: float) -> float:
    """Expected marks after the first pass, |G_c| + L * p * r.

    Args:
        Gc_edges (float): Edge count of the compacted multigraph.
        L (float): Number of links.
        p (float): False junction probability.
        r (float): Mean number of occurrences of a false junction.
    """
    return Gc_edges + L * p * r


def memory_estimate(b: float, J: float, L: float, p: float, k: int) -> float:
    """Peak memory in bits, max(b, 8 * (J + L * p) * 2 * (k + 1)).

    The table term counts up to eight edge keys per junction or false junction, each
    stored in 2 * (k + 1) bits; the constant is an implementation choice.
    """
    table_bits = EDGES_PER_CANDIDATE * (J + L * p) * 2 * (k + 1)
    return max(b, table_bits)


def expected_runtime_terms(m: float, h: int, Gc_edges: float, L: float, p: float, r: float, k: int) -> Dict[str, float]:
    """Operation counts of the two passes: m * h hash operations for the first and
    (|G_c| + L * p * r) * k for the second."""
    return {
        'first_pass_operations': m * h,
        'second_pass_operations': expected_marks(Gc_edges, L, p, r) * k,
    }


def suggest_filter_size(budget_bits: float) -> int:
    """Largest power of two not above a memory budget.

    Raises:
        ValueError: The budget is below 64 bits.
    """
    if budget_bits < MIN_FILTER_BITS:
        raise ValueError(f'Memory budget must be at least {MIN_FILTER_BITS} bits, got {budget_bits}.')
    return 1 << (int(budget_bits).bit_length() - 1)


@dataclasses.dataclass
class AnalysisModel:
    """Parameters of an input and a filter configuration.

    Attributes:
        m (int): Total input length in bases.
        E (int): Distinct (k+1)-mers.
        J (int): Junctions.
        L (int): Links, the non-junction vertices.
        h (int): Hash functions.
        b (int): Filter bits.
        r (float): Mean occurrences of a false junction.
        Gc_edges (int): Edges of the compacted multigraph.
        k (int): k-mer length.
    """
    m: int = 0
    E: int = 0
    J: int = 0
    L: int = 0
    h: int = 4
    b: int = 1 << 24
    r: float = 1.0
    Gc_edges: int = 0
    k: int = 25

    def __post_init__(self):
        for name in ('m', 'E', 'J', 'L', 'Gc_edges', 'r'):
            if getattr(self, name) < 0:
                raise ValueError(f'{name} must be non-negative, got {getattr(self, name)}.')

    def estimates(self) -> Dict[str, float]:
        """Every estimate for these parameters, keyed by name."""
        q = bloom_fp_prob(self.h, self.E, self.b)
        p = junction_fp_prob(q)
        estimates = {
            'q': q,
            'p': p,
            'expected_false_junctions': expected_false_junctions(self.L, p),
            'expected_marks': expected_marks(self.Gc_edges, self.L, p, self.r),
            'memory_bits': memory_estimate(self.b, self.J, self.L, p, self.k),
        }
        estimates.update(expected_runtime_terms(self.m, self.h, self.Gc_edges, self.L, p, self.r, self.k))
        return estimates
