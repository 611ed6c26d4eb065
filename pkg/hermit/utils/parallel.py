"""
Copyright (C) 2026 hermit contributors.

Ordered parallel map over independent work items.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""

from typing import *

from joblib import Parallel, cpu_count, delayed

T = TypeVar("T")
R = TypeVar("R")


def available_workers() -> int:
    return max(1, cpu_count())


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """
    Apply func to every item and return the results in item order.

    The result does not depend on the number of workers. With one worker
    the items are processed in the calling thread.
    """
    items = list(items)
    workers = min(max(1, workers), available_workers(), max(1, len(items)))

    if workers == 1:
        return [func(item) for item in items]

    return Parallel(n_jobs=workers, prefer="threads")(delayed(func)(item) for item in items)
