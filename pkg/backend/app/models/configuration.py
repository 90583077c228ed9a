from dataclasses import dataclass
from typing import Dict, Tuple

# Vertex types keyed by line occupation (top, right, bottom, left); a line sits
# on every edge whose arrow points down or left, so lines enter through the
# top boundary and leave through the left one.
VERTEX_TYPES: Dict[Tuple[int, int, int, int], int] = {
    (0, 0, 0, 0): 1,
    (1, 1, 1, 1): 2,
    (1, 0, 1, 0): 3,
    (0, 1, 0, 1): 4,
    (0, 1, 1, 0): 5,
    (1, 0, 0, 1): 6,
}
EDGES_BY_TYPE = {t: edges for edges, t in VERTEX_TYPES.items()}

# Types whose left horizontal edge points leftward
LEFT_POINTING = frozenset(t for t, edges in EDGES_BY_TYPE.items() if edges[3])


@dataclass(frozen=True)
class SixVertexConfig:
    """One DWBC configuration; ``vertex_type[i][k]`` is row i (from the top),
    column k (from the left), both zero-based."""

    N: int
    vertex_type: Tuple[Tuple[int, ...], ...]

    def counts(self) -> Tuple[int, ...]:
        census = [0] * 6
        for row in self.vertex_type:
            for t in row:
                census[t - 1] += 1
        return tuple(census)

    def points_left(self, row: int, col: int) -> bool:
        """Whether the horizontal edge left of vertex (row, col) points left."""
        return self.vertex_type[row][col] in LEFT_POINTING

    def frozen_prefix(self, row: int) -> int:
        """Number of leading type-2 vertices in a row."""
        n = 0
        for t in self.vertex_type[row]:
            if t != 2:
                break
            n += 1
        return n

    def satisfies_ice_rule(self) -> bool:
        """Check the ice rule and the DWBC boundary arrows edge by edge."""
        N = self.N
        for i in range(N):
            for k in range(N):
                top, right, bottom, left = EDGES_BY_TYPE[self.vertex_type[i][k]]
                if top + right != bottom + left:
                    return False
                above = 1 if i == 0 else EDGES_BY_TYPE[self.vertex_type[i - 1][k]][2]
                if top != above:
                    return False
                if k == 0 and left != 1:
                    return False
                if k == N - 1 and right != 0:
                    return False
                if k > 0 and left != EDGES_BY_TYPE[self.vertex_type[i][k - 1]][1]:
                    return False
                if i == N - 1 and bottom != 0:
                    return False
        return True
