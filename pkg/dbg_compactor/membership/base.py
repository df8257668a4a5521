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

"""Creates the generic edge membership object."""

# pylint: disable=C0103
# pylint: disable=line-too-long

import threading
from typing import Iterable, List

from dbg_compactor.kmers.model import EdgeMer


class EdgeMembership():
    """The EdgeMembership object represents the set E of (k+1)-mers filled in the first
    loop of the junction filter and queried in the second.

    Inserts may come from many workers at once; queries only start after every insert
    has completed.
    """
    # Whether keys must carry rolling hash fingerprints
    uses_fingerprints = False

    def __init__(self):
        """Initializes the insert and query counters."""
        self._counter_lock = threading.Lock()
        self.inserts = 0
        self.queries = 0

    def insert(self, edge: EdgeMer):
        """Abstract method to add one (k+1)-mer.

        Raises:
            NotImplementedError: The subclass has not defined the `insert` method.
        """
        raise NotImplementedError('Subclass needs to define this.')

    def query(self, edge: EdgeMer) -> bool:
        """Abstract method to test one (k+1)-mer.

        Raises:
            NotImplementedError: The subclass has not defined the `query` method.
        """
        raise NotImplementedError('Subclass needs to define this.')

    def insert_many(self, edges: Iterable[EdgeMer]):
        """Adds a batch of (k+1)-mers and counts them once.

        Args:
            edges (Iterable[EdgeMer]): Keys to add.
        """
        count = 0
        for edge in edges:
            self.insert(edge)
            count += 1
        self._count(inserts=count)

    def query_many(self, edges: Iterable[EdgeMer]) -> List[bool]:
        """Tests a batch of (k+1)-mers.

        Args:
            edges (Iterable[EdgeMer]): Keys to test.

        Returns:
            List[bool]: Membership per key, in input order.
        """
        results = [self.query(edge) for edge in edges]
        self._count(queries=len(results))
        return results

    def _count(self, inserts: int = 0, queries: int = 0):
        with self._counter_lock:
            self.inserts += inserts
            self.queries += queries
