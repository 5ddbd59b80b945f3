"""Tanner graph measurements: degrees, row overlaps, four-cycles and girth."""

import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass
from typing import Any

from pg_qldpc.gf2 import BitMatrix


@dataclass(frozen=True)
class TannerStats:
    """Exact structural statistics of a parity-check matrix."""

    shape: tuple[int, int]
    row_degree_histogram: dict[int, int]
    col_degree_histogram: dict[int, int]
    overlap_spectrum: dict[int, int]
    four_cycle_count: int
    girth: float
    density: float

    @property
    def max_overlap(self) -> int:
        """Largest number of columns shared by two rows."""
        return max(self.overlap_spectrum, default=0)

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-friendly form; histogram keys become strings and infinity becomes null."""
        return {
            "shape": list(self.shape),
            "row_degree_histogram": {str(k): v for k, v in sorted(self.row_degree_histogram.items())},
            "col_degree_histogram": {str(k): v for k, v in sorted(self.col_degree_histogram.items())},
            "overlap_spectrum": {str(k): v for k, v in sorted(self.overlap_spectrum.items())},
            "four_cycle_count": self.four_cycle_count,
            "girth": None if math.isinf(self.girth) else int(self.girth),
            "density": self.density,
        }


def overlap_spectrum(H: BitMatrix) -> dict[int, int]:
    """Count unordered row pairs by the number of columns they share."""
    spectrum: Counter[int] = Counter()
    for a, b in itertools.combinations(H.rows, 2):
        spectrum[(a & b).bit_count()] += 1
    return dict(spectrum)


def four_cycles_from_spectrum(spectrum: dict[int, int]) -> int:
    """Count four-cycles as C(overlap, 2) summed over row pairs."""
    return sum(math.comb(overlap, 2) * count for overlap, count in spectrum.items())


def count_four_cycles_direct(H: BitMatrix) -> int:
    """Count four-cycles by enumerating column pairs instead of row pairs."""
    columns = H.transpose().rows
    return sum(math.comb((a & b).bit_count(), 2) for a, b in itertools.combinations(columns, 2))


def _adjacency(H: BitMatrix) -> list[list[int]]:
    """Build adjacency lists; checks are nodes ``0..m-1`` and bit j is node ``m + j``."""
    m = H.n_rows
    adjacency: list[list[int]] = [[] for _ in range(m + H.n_cols)]
    for i in range(m):
        for j in H.row_support(i):
            adjacency[i].append(m + j)
            adjacency[m + j].append(i)
    return adjacency


def _shortest_cycle_through(adjacency: list[list[int]], start: int, bound: float) -> float:
    dist = [-1] * len(adjacency)
    dist[start] = 0
    queue = deque([start])
    best = bound
    while queue:
        current = queue.popleft()
        if 2 * dist[current] + 1 >= best:
            break
        for neighbor in adjacency[current]:
            if dist[neighbor] == -1:
                dist[neighbor] = dist[current] + 1
                queue.append(neighbor)
            elif dist[neighbor] >= dist[current]:
                best = min(best, dist[neighbor] + dist[current] + 1)
    return best


def girth(H: BitMatrix) -> float:
    """Return the shortest cycle length of the Tanner graph, ``math.inf`` if acyclic."""
    adjacency = _adjacency(H)
    best = math.inf
    for node in range(len(adjacency)):
        best = _shortest_cycle_through(adjacency, node, best)
        if best == 4:
            break
    return best


def analyze(H: BitMatrix) -> TannerStats:
    """Measure degrees, overlaps, four-cycles, girth and density of H."""
    spectrum = overlap_spectrum(H)
    cells = H.n_rows * H.n_cols
    return TannerStats(
        shape=H.shape,
        row_degree_histogram=dict(Counter(H.row_weights())),
        col_degree_histogram=dict(Counter(H.col_weights())),
        overlap_spectrum=spectrum,
        four_cycle_count=four_cycles_from_spectrum(spectrum),
        girth=girth(H),
        density=H.ones() / cells if cells else 0.0,
    )
