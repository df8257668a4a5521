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

"""Creates the exact edge membership object."""

# pylint: disable=C0103
# pylint: disable=line-too-long

import threading
from typing import FrozenSet, Iterable, Optional

from dbg_compactor.kmers.model import EdgeMer
from dbg_compactor.membership.base import EdgeMembership
from dbg_compactor.utils.exceptions import TableCapacityError


class ExactEdgeTable(EdgeMembership):
    """A hash set of packed (k+1)-mers.

    Inserts are serialized by a lock; queries read the set without locking, which is
    safe once the insert phase has finished.
    """

    def __init__(self, max_keys: Optional[int] = None):
        """Creates an empty table.

        Args:
            max_keys (Optional[int]): Largest number of distinct keys allowed, or None
                for no limit.
        """
        super().__init__()
        self.max_keys = max_keys
        self._keys = set()
        self._lock = threading.Lock()

    @property
    def cardinality(self) -> int:
        """Number of distinct keys inserted."""
        return len(self._keys)

    def keys(self) -> FrozenSet[int]:
        """Snapshot of the packed keys."""
        return frozenset(self._keys)

    def insert(self, edge: EdgeMer):
        """Adds a key.

        Raises:
            TableCapacityError: The table would exceed max_keys.
        """
        with self._lock:
            self._add(edge.value)

    def insert_many(self, edges: Iterable[EdgeMer]):
        count = 0
        with self._lock:
            for edge in edges:
                self._add(edge.value)
                count += 1
        self._count(inserts=count)

    def query(self, edge: EdgeMer) -> bool:
        return edge.value in self._keys

    def _add(self, value: int):
        if value in self._keys:
            return
        if self.max_keys is not None and len(self._keys) >= self.max_keys:
            raise TableCapacityError(cardinality=len(self._keys) + 1, capacity=self.max_keys)
        self._keys.add(value)
