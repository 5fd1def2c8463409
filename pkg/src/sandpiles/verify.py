"""Self-contained correctness checks runnable from the CLI.

Each check pits a library code path against an independent route to the same
value: Schur complements against direct rank computation, the closed-form
binomial conditional mean against direct summation, Smith normal forms
against gcd-of-minors and brute-force spanning-tree enumeration, and the
Gaussian local estimate against exact rational binomial probabilities.  All
randomized checks run on fixed seeds, so a pass here is reproducible, not
probabilistic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, gcd, sqrt

import numpy as np

from .bigraph import BipartiteGraph
from .errors import SingularBlockError
from .gfp import IndexSet, PrimeFieldMatrix, corank_mod_p, schur_complement
from .groups import sandpile_group, spanning_tree_count
from .intmat import IntegerMatrix, smith_normal_form
from .rng import SplitMix64
from .theory import binom_pmf, BinomialSpec, conditional_mean_above, dml_estimate

CLAIM_ALPHAS = (
    Fraction(1, 5),
    Fraction(2, 5),
    Fraction(1, 2),
    Fraction(3, 5),
    Fraction(4, 5),
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _random_matrix(stream: SplitMix64, rows: int, cols: int, p: int) -> PrimeFieldMatrix:
    entries = [[stream.next_below(p) for _ in range(cols)] for _ in range(rows)]
    return PrimeFieldMatrix(p, entries)


def check_schur_preservation(instances: int = 1000, seed: int = 20240817) -> CheckResult:
    """Corank is preserved by Schur complements with invertible pivot blocks.

    Random square matrices over p in {2, 3, 5, 7} with random eliminated
    index sets; instances whose pivot block happens to be singular are
    redrawn (the identity assumes an invertible block).
    """
    stream = SplitMix64(seed)
    primes = (2, 3, 5, 7)
    failures = 0
    done = 0
    while done < instances:
        p = primes[done % len(primes)]
        dim = 4 + stream.next_below(6)
        m = _random_matrix(stream, dim, dim, p)
        block_size = stream.next_below(dim)
        picked = sorted(_sample_without_replacement(stream, dim, block_size))
        s = IndexSet(tuple(picked), dim)
        try:
            complement = schur_complement(m, s)
        except SingularBlockError:
            continue
        done += 1
        if corank_mod_p(complement) != corank_mod_p(m):
            failures += 1
    return CheckResult(
        name="schur-corank-preservation",
        passed=failures == 0,
        detail=f"{done} instances over p in {primes}, {failures} corank mismatches",
    )


def _sample_without_replacement(stream: SplitMix64, bound: int, k: int) -> list[int]:
    pool = list(range(bound))
    for i in range(k):
        j = i + stream.next_below(bound - i)
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:k]


def check_conditional_mean_identity(max_n: int = 40) -> CheckResult:
    """Closed-form conditional mean == direct summation, exact rationals.

    Checks E(B(n, alpha) | B > s) for every n <= max_n, every cut
    1 <= s < n, and five rational alpha values.  Zero tolerance: any
    difference at all is a failure.
    """
    failures = 0
    checked = 0
    for n in range(2, max_n + 1):
        for alpha in CLAIM_ALPHAS:
            spec = BinomialSpec(n, alpha)
            pmfs = [binom_pmf(spec, k) for k in range(n + 1)]
            tail_sum = Fraction(0)
            weighted = Fraction(0)
            # Walk s downward so the direct tail sums accumulate in O(1) per s.
            for s in range(n - 1, 0, -1):
                tail_sum += pmfs[s + 1]
                weighted += (s + 1) * pmfs[s + 1]
                checked += 1
                if conditional_mean_above(n, alpha, s) != weighted / tail_sum:
                    failures += 1
    return CheckResult(
        name="binomial-conditional-mean-identity",
        passed=failures == 0,
        detail=f"{checked} exact comparisons (n <= {max_n}, 5 alphas), {failures} mismatches",
    )


def _gcd_of_minors_diagonal(m: IntegerMatrix) -> tuple[int, ...]:
    """Smith diagonal via determinantal divisors: d_k = D_k / D_(k-1).

    D_k is the gcd of all k x k minors.  Exponential in the matrix size --
    usable only as an independent oracle for small matrices.
    """
    arr = m.entries
    rows, cols = arr.shape
    size = min(rows, cols)
    divisors = [1]
    for k in range(1, size + 1):
        g = 0
        for rsel in combinations(range(rows), k):
            for csel in combinations(range(cols), k):
                g = gcd(g, _det_cofactor(arr, rsel, csel))
                if g == 1:
                    break
            if g == 1:
                break
        divisors.append(g)
        if g == 0:
            break
    diag = []
    for k in range(1, len(divisors)):
        prev, cur = divisors[k - 1], divisors[k]
        diag.append(0 if cur == 0 else cur // prev)
    diag.extend(0 for _ in range(size - len(diag)))
    return tuple(diag)


def _det_cofactor(arr: np.ndarray, rsel, csel) -> int:
    if len(rsel) == 0:
        return 1
    if len(rsel) == 1:
        return int(arr[rsel[0], csel[0]])
    total = 0
    rest = rsel[1:]
    for j, c in enumerate(csel):
        sub = tuple(x for x in csel if x != c)
        term = int(arr[rsel[0], c]) * _det_cofactor(arr, rest, sub)
        total += term if j % 2 == 0 else -term
    return total


def _complete_bipartite(a: int, b: int) -> BipartiteGraph:
    return BipartiteGraph(a, b, np.ones((a, b), dtype=np.int64))


def _count_spanning_trees_brute(g: BipartiteGraph) -> int:
    """Spanning trees by enumerating edge subsets of size N-1 (tiny graphs)."""
    edges = g.edges()
    n = g.n_vertices
    count = 0
    for subset in combinations(edges, n - 1):
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        acyclic = True
        for i, j in subset:
            ri, rj = find(i), find(g.n_left + j)
            if ri == rj:
                acyclic = False
                break
            parent[ri] = rj
        if acyclic:
            count += 1
    return count


def check_smith_form_oracles(seed: int = 991) -> CheckResult:
    """Smith form and tree counts against independent small-scale oracles."""
    problems: list[str] = []

    k23 = _complete_bipartite(2, 3)
    factors = sandpile_group(k23).factors
    if factors != (2, 6):
        problems.append(f"complete 2x3 invariant factors {factors} != (2, 6)")
    trees = spanning_tree_count(k23)
    brute = _count_spanning_trees_brute(k23)
    if trees != 12 or brute != 12:
        problems.append(f"complete 2x3 tree counts det={trees} brute={brute} != 12")

    k22 = _complete_bipartite(2, 2)
    factors = sandpile_group(k22).factors
    if factors != (4,):
        problems.append(f"complete 2x2 invariant factors {factors} != (4,)")

    diag = smith_normal_form(IntegerMatrix.from_rows([[2, 0], [0, 3]]))
    if diag != (1, 6):
        problems.append(f"diag(2,3) Smith form {diag} != (1, 6)")

    stream = SplitMix64(seed)
    for _ in range(60):
        rows = 2 + stream.next_below(3)
        cols = 2 + stream.next_below(3)
        entries = [
            [stream.next_below(11) - 5 for _ in range(cols)] for _ in range(rows)
        ]
        m = IntegerMatrix.from_rows(entries)
        got = smith_normal_form(m)
        want = _gcd_of_minors_diagonal(m)
        if got != want:
            problems.append(f"Smith form {got} != minors oracle {want} on {entries}")
            break
    return CheckResult(
        name="smith-form-oracles",
        passed=not problems,
        detail="; ".join(problems) if problems else
        "complete 2x3 / 2x2 graphs, diag(2,3), 60 random matrices vs gcd-of-minors",
    )


def check_dml_convergence() -> CheckResult:
    """Gaussian local estimate converges to the exact central pmf.

    Relative error at the central point must shrink along n in
    {100, 1000, 10000} and stay below 10/sqrt(n) at each.
    """
    alpha = Fraction(1, 2)
    rel_errors = []
    for n in (100, 1000, 10000):
        s = n // 2
        exact = comb(n, s) * alpha**s * (1 - alpha) ** (n - s)
        estimate = dml_estimate(n, 0.5, s)
        rel_errors.append(abs(estimate - float(exact)) / float(exact))
    shrinking = rel_errors[0] > rel_errors[1] > rel_errors[2]
    bounded = all(
        err <= 10.0 / sqrt(n) for err, n in zip(rel_errors, (100, 1000, 10000))
    )
    return CheckResult(
        name="gaussian-local-estimate-convergence",
        passed=shrinking and bounded,
        detail=f"relative errors {['%.2e' % e for e in rel_errors]}",
    )


def run_all() -> list[CheckResult]:
    return [
        check_schur_preservation(),
        check_conditional_mean_identity(),
        check_smith_form_oracles(),
        check_dml_convergence(),
    ]
