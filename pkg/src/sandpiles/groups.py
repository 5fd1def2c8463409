"""Sandpile groups, p-ranks and spanning trees of bipartite graphs.

The sandpile group (critical group) of a connected graph is the integer
cokernel of any reduced Laplacian; its order is the number of spanning trees.
For a disconnected graph we use the direct sum of the component groups, which
is the cokernel of the full Laplacian modulo its free part (one Z per
component).

Two routes to the p-rank (the number of invariant factors divisible by p) are
implemented and cross-checked in the tests:

* exact Smith normal form of a reduced Laplacian (slow, any prime at once),
* corank of the full Laplacian mod p minus the number of connected
  components (fast, one prime at a time).

The second works because the Smith form of the full Laplacian consists of the
invariant factors plus one extra zero per component: reducing mod p turns
each factor divisible by p and each zero into one dimension of kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .bigraph import (
    BipartiteGraph,
    connected_components,
    laplacian,
    laplacian_mod_p,
    reduced_laplacian,
)
from .errors import DisconnectedError, NotPrimeError
from .gfp import corank_mod_p, is_prime
from .intmat import IntegerMatrix, determinant, normalize_divisor_chain, smith_normal_form


@dataclass(frozen=True)
class GroupInvariants:
    """A finite abelian group in invariant-factor form.

    ``factors`` is the canonical chain d1 | d2 | ... with every d_i >= 2;
    the trivial group has an empty chain.  ``order`` is the product of the
    factors and ``free_rank`` counts Z summands (zero for sandpile groups of
    connected graphs, kept so the type can also describe full-Laplacian
    cokernels).
    """

    factors: tuple[int, ...]
    order: int
    free_rank: int = 0

    def __post_init__(self):
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a != 0:
                raise ValueError(f"factors must form a divisor chain, got {self.factors}")
        if any(d < 2 for d in self.factors):
            raise ValueError(f"factors must all be >= 2, got {self.factors}")
        if self.order != prod(self.factors):
            raise ValueError(
                f"order {self.order} does not match factors {self.factors}"
            )
        if self.free_rank < 0:
            raise ValueError(f"free_rank must be >= 0, got {self.free_rank}")

    @classmethod
    def from_snf_diagonal(cls, diag) -> "GroupInvariants":
        """Group presented by a Smith-form diagonal (zeros become Z summands)."""
        chain = normalize_divisor_chain(diag)
        factors = tuple(d for d in chain if d >= 2)
        return cls(
            factors=factors,
            order=prod(factors),
            free_rank=sum(1 for d in chain if d == 0),
        )

    @property
    def is_cyclic(self) -> bool:
        """True when the torsion part is generated by one element."""
        return len(self.factors) <= 1

    def p_multiplicity(self, p: int) -> int:
        """Number of invariant factors divisible by ``p``."""
        return sum(1 for d in self.factors if d % p == 0)

    def to_json(self) -> dict:
        return {
            "factors": list(self.factors),
            "order": str(self.order),
            "free_rank": self.free_rank,
        }


def sandpile_group(g: BipartiteGraph) -> GroupInvariants:
    """Invariant factors of the sandpile group of ``g``.

    Computed per connected component (reduced Laplacian dropping the last
    vertex of the component, then Smith normal form) and combined with
    gcd/lcm normalization, so disconnected graphs get the direct sum of their
    component groups without ever factoring a large integer.
    """
    full = laplacian(g).entries
    collected: list[int] = []
    for comp in connected_components(g):
        if len(comp) == 1:
            continue
        order = sorted(comp)
        keep = order[:-1]
        block = IntegerMatrix(full[np.ix_(keep, keep)])
        diag = smith_normal_form(block)
        # A connected component has nonsingular reduced Laplacian, so the
        # Smith diagonal is all positive.
        assert all(d > 0 for d in diag), "reduced Laplacian of a component was singular"
        collected.extend(d for d in diag if d >= 2)
    factors = tuple(d for d in normalize_divisor_chain(collected) if d >= 2)
    return GroupInvariants(factors=factors, order=prod(factors), free_rank=0)


def p_rank(g: BipartiteGraph, p: int) -> int:
    """Number of invariant factors of the sandpile group divisible by ``p``.

    Uses the mod-p corank of the full Laplacian minus the component count;
    equal to ``sandpile_group(g).p_multiplicity(p)`` but cheap enough for
    Monte Carlo (no integer Smith form).
    """
    if not is_prime(p):
        raise NotPrimeError(f"p must be prime, got {p}")
    n_comps = len(connected_components(g))
    return corank_mod_p(laplacian_mod_p(g, p)) - n_comps


def is_cyclic(g: BipartiteGraph) -> bool:
    """Whether the sandpile group of ``g`` is cyclic (trivial counts as cyclic)."""
    return sandpile_group(g).is_cyclic


def spanning_tree_count(g: BipartiteGraph) -> int:
    """Number of spanning trees, via the matrix-tree theorem.

    Exact Bareiss determinant of the reduced Laplacian dropping the last
    vertex; raises :class:`DisconnectedError` when the graph is disconnected
    (the determinant would be 0 and the sandpile group order would not equal
    a tree count).
    """
    if len(connected_components(g)) != 1:
        raise DisconnectedError("spanning trees are defined for connected graphs only")
    det = determinant(reduced_laplacian(g, g.n_vertices - 1))
    assert det > 0, "reduced Laplacian of a connected graph must have positive determinant"
    return det
