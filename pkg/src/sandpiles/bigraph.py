"""The random bipartite graph model and its Laplacians.

A sample has left part L of size ``n``, right part R of size ``floor(alpha*n)``
and each of the |L|*|R| potential edges present independently with probability
``q``.  Vertices are numbered 0..|L|-1 on the left followed by |L|..N-1 on the
right, and all matrices in the package use that ordering.

Sampling is fully deterministic given the seed: the edge indicators are read
row-major from a single splitmix64 stream, one uniform draw per potential
edge, whether or not the edge appears.  Two graphs from equal parameters are
therefore identical, and constructions that extend a graph (extra diagonal
draws, say) can share its stream position.

``floor(alpha*n)`` is computed through exact rational arithmetic on the
binary64 value of alpha, so e.g. alpha=0.3, n=10 gives the floor of the exact
product with the *stored* double 0.3 -- the same answer on every platform.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import floor

import numpy as np

from .errors import InvalidParamsError, InvalidShapeError
from .gfp import PrimeFieldMatrix
from .intmat import IntegerMatrix
from .rng import SplitMix64


def floor_ratio(alpha, n: int) -> int:
    """Exact floor(alpha * n) for float or Fraction alpha.

    ``Fraction(x)`` of a float is the exact binary64 value, so this never
    depends on rounding behaviour of a float multiply.
    """
    return floor(Fraction(alpha) * n)


@dataclass(frozen=True)
class GraphModelParams:
    """Parameters (n, alpha, q, seed) of one random bipartite graph."""

    n: int
    alpha: float
    q: float
    seed: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidParamsError(f"n must be an integer >= 1, got {self.n}")
        if not 0 < float(self.alpha) <= 1:
            raise InvalidParamsError(f"alpha must be in (0, 1], got {self.alpha}")
        if not 0 < float(self.q) < 1:
            raise InvalidParamsError(f"q must be in (0, 1), got {self.q}")
        if self.n_right < 1:
            raise InvalidParamsError(
                f"floor(alpha*n) = 0 for alpha={self.alpha}, n={self.n}; "
                "the right part would be empty"
            )
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise InvalidParamsError(f"seed must be an integer in [0, 2**64), got {self.seed}")

    @property
    def n_right(self) -> int:
        return floor_ratio(self.alpha, self.n)


class BipartiteGraph:
    """An explicit bipartite graph stored as a 0/1 biadjacency matrix.

    ``biadjacency[i, j]`` is 1 when left vertex ``i`` is joined to right
    vertex ``j``.  Instances are immutable; all graph operations are pure
    functions of this class.
    """

    __slots__ = ("n_left", "n_right", "biadjacency")

    def __init__(self, n_left: int, n_right: int, biadjacency) -> None:
        if n_left < 1 or n_right < 1:
            raise InvalidShapeError(
                f"both parts must be nonempty, got {n_left} and {n_right}"
            )
        arr = np.asarray(biadjacency, dtype=np.int64)
        if arr.shape != (n_left, n_right):
            raise InvalidShapeError(
                f"biadjacency shape {arr.shape} does not match ({n_left}, {n_right})"
            )
        if not np.isin(arr, (0, 1)).all():
            raise InvalidShapeError("biadjacency entries must be 0 or 1")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "n_left", n_left)
        object.__setattr__(self, "n_right", n_right)
        object.__setattr__(self, "biadjacency", arr)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("BipartiteGraph is immutable")

    @property
    def n_vertices(self) -> int:
        return self.n_left + self.n_right

    @property
    def n_edges(self) -> int:
        return int(self.biadjacency.sum())

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (left index, right index), row-major order."""
        ii, jj = np.nonzero(self.biadjacency)
        return [(int(i), int(j)) for i, j in zip(ii, jj)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (
            self.n_left == other.n_left
            and self.n_right == other.n_right
            and np.array_equal(self.biadjacency, other.biadjacency)
        )

    def __hash__(self):
        return hash((self.n_left, self.n_right, self.biadjacency.tobytes()))

    def __repr__(self) -> str:
        return (
            f"BipartiteGraph(n_left={self.n_left}, n_right={self.n_right}, "
            f"n_edges={self.n_edges})"
        )


def sample_bipartite(params: GraphModelParams) -> BipartiteGraph:
    """Draw one graph from the model; pure function of ``params``."""
    stream = SplitMix64(params.seed)
    return sample_bipartite_from_stream(params, stream)


def sample_bipartite_from_stream(
    params: GraphModelParams, stream: SplitMix64
) -> BipartiteGraph:
    """Like :func:`sample_bipartite` but consuming an existing stream.

    Exposed so constructions that need extra randomness *after* the edge draws
    can continue reading from the same stream position.
    """
    n_left, n_right = params.n, params.n_right
    u = stream.next_uniform_block(n_left * n_right).reshape(n_left, n_right)
    return BipartiteGraph(n_left, n_right, (u < params.q).astype(np.int64))


def _degrees(g: BipartiteGraph) -> np.ndarray:
    left = g.biadjacency.sum(axis=1)
    right = g.biadjacency.sum(axis=0)
    return np.concatenate([left, right])


def laplacian(g: BipartiteGraph) -> IntegerMatrix:
    """The graph Laplacian D - A on all N = n_left + n_right vertices.

    Row/column order is left vertices then right vertices.  The Laplacian is
    symmetric, has zero row sums, and is positive semidefinite with kernel
    dimension equal to the number of connected components.
    """
    n = g.n_vertices
    full = np.zeros((n, n), dtype=np.int64)
    full[: g.n_left, g.n_left :] = -g.biadjacency
    full[g.n_left :, : g.n_left] = -g.biadjacency.T
    full[np.arange(n), np.arange(n)] = _degrees(g)
    return IntegerMatrix(full)


def laplacian_mod_p(g: BipartiteGraph, p: int) -> PrimeFieldMatrix:
    """The Laplacian reduced mod p, built without leaving int64.

    Same value as ``PrimeFieldMatrix(p, laplacian(g).entries)`` but cheap
    enough to call thousands of times in Monte Carlo loops.
    """
    n = g.n_vertices
    full = np.zeros((n, n), dtype=np.int64)
    full[: g.n_left, g.n_left :] = (p - 1) * g.biadjacency
    full[g.n_left :, : g.n_left] = (p - 1) * g.biadjacency.T
    full[np.arange(n), np.arange(n)] = _degrees(g) % p
    return PrimeFieldMatrix(p, full)


def reduced_laplacian(g: BipartiteGraph, drop: int) -> IntegerMatrix:
    """The Laplacian with row and column ``drop`` removed.

    For a connected graph its determinant is the number of spanning trees
    (matrix-tree theorem) and its integer cokernel is the sandpile group --
    both independent of which vertex is dropped.
    """
    n = g.n_vertices
    if not 0 <= drop < n:
        raise IndexError(f"drop index {drop} out of range for {n} vertices")
    keep = [i for i in range(n) if i != drop]
    full = laplacian(g).entries
    return IntegerMatrix(full[np.ix_(keep, keep)])


def connected_components(g: BipartiteGraph) -> list[set[int]]:
    """Vertex sets of the connected components, ordered by smallest vertex."""
    n = g.n_vertices
    seen = [False] * n
    comps: list[set[int]] = []
    neighbours_left = [set(np.nonzero(g.biadjacency[i])[0] + g.n_left) for i in range(g.n_left)]
    neighbours_right = [set(np.nonzero(g.biadjacency[:, j])[0]) for j in range(g.n_right)]

    def neighbours(v: int):
        if v < g.n_left:
            return neighbours_left[v]
        return neighbours_right[v - g.n_left]

    for start in range(n):
        if seen[start]:
            continue
        comp = {start}
        seen[start] = True
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for w in neighbours(v):
                w = int(w)
                if not seen[w]:
                    seen[w] = True
                    comp.add(w)
                    frontier.append(w)
        comps.append(comp)
    return comps


def graph_to_json(g: BipartiteGraph) -> dict:
    """Plain-dict form: {"n_left": ..., "n_right": ..., "edges": [[i, j], ...]}."""
    return {
        "n_left": g.n_left,
        "n_right": g.n_right,
        "edges": [[i, j] for i, j in g.edges()],
    }


def graph_from_json(data: dict) -> BipartiteGraph:
    """Inverse of :func:`graph_to_json`, with full validation."""
    try:
        n_left = int(data["n_left"])
        n_right = int(data["n_right"])
        edges = data["edges"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidShapeError(f"malformed graph object: {exc}") from exc
    if n_left < 1 or n_right < 1:
        raise InvalidShapeError(
            f"both parts must be nonempty, got {n_left} and {n_right}"
        )
    biadj = np.zeros((n_left, n_right), dtype=np.int64)
    for e in edges:
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise InvalidShapeError(f"edge {e!r} is not a pair")
        i, j = e
        if not 0 <= int(i) < n_left or not 0 <= int(j) < n_right:
            raise InvalidShapeError(f"edge {e!r} out of range")
        biadj[int(i), int(j)] = 1
    return BipartiteGraph(n_left, n_right, biadj)


def load_graph(path) -> BipartiteGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return graph_from_json(json.load(fh))


def save_graph(g: BipartiteGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(graph_to_json(g), fh, indent=2)
        fh.write("\n")
