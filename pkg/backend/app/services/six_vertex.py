"""Brute-force enumeration of six-vertex configurations with domain wall
boundary conditions.

Rows are filled from the top. The state passed from one row to the next is
the bitmask of occupied vertical edges (bit k is column k); every row starts
with an occupied left boundary edge and must end with an empty right one.
"""
import logging
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import factorial
from typing import Dict, Iterator, List, Set, Tuple

from app.config import get_settings
from app.errors import IrrationalWeightError, OracleMismatchError, SizeLimitError
from app.models.configuration import LEFT_POINTING, SixVertexConfig
from app.models.numbers import exact_sqrt
from app.models.weights import VertexWeights
from app.schemas import EmptinessSpec, PentagonSpec

logger = logging.getLogger(__name__)

# (top, left) -> [(type, right, bottom)]
_MOVES = {
    (0, 0): ((1, 0, 0), (5, 1, 1)),
    (1, 1): ((2, 1, 1), (6, 0, 0)),
    (1, 0): ((3, 0, 1),),
    (0, 1): ((4, 1, 0),),
}


def check_size(N: int) -> None:
    nmax = get_settings().nmax
    if N > nmax:
        raise SizeLimitError(f"N = {N} exceeds the enumeration limit {nmax} (PENTATILE_NMAX)")


@lru_cache(maxsize=None)
def _row_fillings(N: int, top: int) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    """All ways to fill one row below the vertical occupancy ``top``."""
    out = []

    def walk(col: int, left: int, types: List[int], bottom: int):
        if col == N:
            if left == 0:
                out.append((tuple(types), bottom))
            return
        t = (top >> col) & 1
        for vertex_type, right, down in _MOVES[(t, left)]:
            types.append(vertex_type)
            walk(col + 1, right, types, bottom | (down << col))
            types.pop()

    walk(0, 1, [], 0)
    return tuple(out)


def enumerate_dwbc(N: int) -> Iterator[SixVertexConfig]:
    """Yield every DWBC configuration of the N x N lattice exactly once."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    check_size(N)
    rows: List[Tuple[int, ...]] = []

    def descend(top: int):
        if len(rows) == N:
            if top == 0:
                yield SixVertexConfig(N=N, vertex_type=tuple(rows))
            return
        for types, bottom in _row_fillings(N, top):
            rows.append(types)
            yield from descend(bottom)
            rows.pop()

    yield from descend((1 << N) - 1)


def count_dwbc(N: int) -> int:
    """Number of DWBC configurations by summing over row states (no enumeration)."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    states: Dict[int, int] = {(1 << N) - 1: 1}
    for _ in range(N):
        following: Dict[int, int] = Counter()
        for top, ways in states.items():
            for _, bottom in _row_fillings(N, top):
                following[bottom] += ways
        states = following
    return states.get(0, 0)


def asm_count(N: int) -> int:
    """Alternating sign matrices of order N: prod_{k<N} (3k+1)! / (N+k)!."""
    value = Fraction(1)
    for k in range(N):
        value *= Fraction(factorial(3 * k + 1), factorial(N + k))
    if value.denominator != 1:
        raise AssertionError(f"ASM product formula gave a non-integer at N = {N}")
    return value.numerator


@lru_cache(maxsize=16)
def _summaries(N: int) -> Tuple[Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]], ...]:
    """Per configuration: census, left-pointing mask per row, frozen prefix per row."""
    out = []
    for config in enumerate_dwbc(N):
        left_masks = tuple(
            sum(1 << k for k, t in enumerate(row) if t in LEFT_POINTING)
            for row in config.vertex_type
        )
        prefixes = tuple(config.frozen_prefix(i) for i in range(N))
        out.append((config.counts(), left_masks, prefixes))
    logger.info(f"Enumerated {len(out)} DWBC configurations at N={N}")
    return tuple(out)


def vertex_type_census(N: int) -> Set[Tuple[int, int]]:
    """Distinct values of (n1 - n2, n3 - n4) over all configurations."""
    check_size(N)
    return {(c[0] - c[1], c[2] - c[3]) for c, _, _ in _summaries(N)}


def _weighted_sum(censuses: Counter, w: VertexWeights) -> Fraction:
    return sum((mult * w.monomial(c) for c, mult in censuses.items()), Fraction(0))


def z_bruteforce(N: int, w: VertexWeights) -> Fraction:
    """Partition function as the weighted sum over all DWBC configurations."""
    check_size(N)
    return _weighted_sum(Counter(c for c, _, _ in _summaries(N)), w)


def _edge_filter(spec: EmptinessSpec, left_masks) -> bool:
    N = spec.N
    return all((left_masks[j] >> (N - r)) & 1 for j, r in enumerate(spec.r))


def _frozen_filter(spec: EmptinessSpec, prefixes) -> bool:
    N = spec.N
    return all(prefixes[j] >= N - r for j, r in enumerate(spec.r))


def _emptiness_censuses(spec: EmptinessSpec) -> Counter:
    check_size(spec.N)
    by_edge, by_frozen = Counter(), Counter()
    for census, left_masks, prefixes in _summaries(spec.N):
        if _edge_filter(spec, left_masks):
            by_edge[census] += 1
        if _frozen_filter(spec, prefixes):
            by_frozen[census] += 1
    if by_edge != by_frozen:
        raise OracleMismatchError(
            f"Edge and frozen-region filters disagree for N={spec.N}, r={spec.r}: "
            f"{sum(by_edge.values())} vs {sum(by_frozen.values())} configurations"
        )
    return by_edge


def gefp_bruteforce(spec: EmptinessSpec, w: VertexWeights) -> Fraction:
    """Probability that the edge left of vertex (r_j, j) points left for every j."""
    check_size(spec.N)
    if spec.s == 0:
        return Fraction(1)
    z = z_bruteforce(spec.N, w)
    return _weighted_sum(_emptiness_censuses(spec), w) / z


def z_pentagon_bruteforce(spec: PentagonSpec, w: VertexWeights) -> Fraction:
    """Weighted sum over configurations with a frozen corner triangle, with
    the triangle's type-2 weights divided out."""
    tdefp = spec.emptiness_spec()
    total = _weighted_sum(_emptiness_censuses(tdefp), w)
    k = spec.s * (spec.s + 1) // 2
    corner = exact_sqrt(w.squares[1] ** k)
    if corner is None:
        raise IrrationalWeightError(f"w2^{k} is irrational; the pentagon weight is not exact")
    if corner == 0:
        raise ZeroDivisionError("w2 = 0 leaves the pentagon weight undefined")
    return total / corner


def aztec_tiling_weights() -> VertexWeights:
    """Weights under which Z_N counts domino tilings of the Aztec diamond of order N."""
    return VertexWeights.free_fermion(2, Fraction(1, 2))


def emptiness_specs(N: int) -> Iterator[EmptinessSpec]:
    """Every weakly increasing (r_1, ..., r_s) with s <= N and entries in [1, N]."""
    for s in range(N + 1):
        for r in combinations_with_replacement(range(1, N + 1), s):
            yield EmptinessSpec(N=N, r=r)
