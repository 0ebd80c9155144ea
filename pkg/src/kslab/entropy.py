"""Exact joint distributions, entropy vectors, and the Shannon cone.

Probabilities are Fractions throughout so marginalization and cone
membership are exact; only entropy values themselves (which involve logs)
are floats.  Subsets of the k variables are bitmasks as in _masks.

The Shannon cone over k variables is generated by the elemental
inequalities: H(X_i | rest) >= 0 for each i, and I(X_i; X_j | X_S) >= 0
for each pair i < j and each S disjoint from {i, j}.  is_shannon decides
by exact rational linear programming whether a linear inequality over
subset entropies is a nonnegative combination of these generators, and in
either case returns a certificate that is re-verified before return:
combination weights that reproduce the inequality exactly, or a point
satisfying every generator while violating the inequality.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from ._masks import indices_of, mask_label, mask_of, nonempty_masks

__all__ = [
    "JointDistribution",
    "parse_distribution",
    "entropy_vector",
    "LinearInequality",
    "parse_inequality",
    "basic_inequality",
    "elemental_inequalities",
    "evaluate",
    "ShannonDecision",
    "is_shannon",
]


class JointDistribution:
    """Probability mass function over tuples of symbols, one per variable."""

    def __init__(self, k: int, pmf: dict):
        if k < 1:
            raise ValueError("need at least one variable")
        clean: dict = {}
        total = Fraction(0)
        for outcome, prob in pmf.items():
            outcome = tuple(str(sym) for sym in outcome)
            if len(outcome) != k:
                raise ValueError(f"outcome {outcome} has arity {len(outcome)}, expected {k}")
            prob = Fraction(prob)
            if prob < 0:
                raise ValueError(f"negative probability for {outcome}")
            if prob == 0:
                continue
            clean[outcome] = clean.get(outcome, Fraction(0)) + prob
            total += prob
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, expected 1")
        self.k = k
        self.pmf = clean

    @classmethod
    def uniform(cls, k: int, outcomes) -> "JointDistribution":
        outcomes = [tuple(o) for o in outcomes]
        if not outcomes:
            raise ValueError("need at least one outcome")
        if len(set(outcomes)) != len(outcomes):
            raise ValueError("duplicate outcomes")
        p = Fraction(1, len(outcomes))
        return cls(k, {o: p for o in outcomes})

    @classmethod
    def random_rational(
        cls, k: int, alphabet_sizes, denominator: int, seed: int
    ) -> "JointDistribution":
        """Empirical pmf of `denominator` uniform draws over the product space.

        Every probability is a multiple of 1/denominator, so downstream
        arithmetic stays exact and runs are reproducible from the seed.
        """

        if isinstance(alphabet_sizes, int):
            alphabet_sizes = (alphabet_sizes,) * k
        alphabet_sizes = tuple(alphabet_sizes)
        if len(alphabet_sizes) != k or any(a < 1 for a in alphabet_sizes):
            raise ValueError("need one positive alphabet size per variable")
        if denominator < 1:
            raise ValueError("denominator must be >= 1")
        rng = random.Random(seed)
        counts: dict = {}
        for _ in range(denominator):
            outcome = tuple(str(rng.randrange(a)) for a in alphabet_sizes)
            counts[outcome] = counts.get(outcome, 0) + 1
        return cls(k, {o: Fraction(c, denominator) for o, c in counts.items()})

    def marginal(self, mask: int) -> dict:
        """Projected pmf onto the variables in mask (1-based bit positions)."""

        if not 0 < mask < (1 << self.k):
            raise ValueError(f"mask {mask} out of range for k={self.k}")
        picks = [i - 1 for i in indices_of(mask)]
        out: dict = {}
        for outcome, prob in self.pmf.items():
            key = tuple(outcome[i] for i in picks)
            out[key] = out.get(key, Fraction(0)) + prob
        return out

    def to_text(self) -> str:
        lines = [f"k={self.k}"]
        for outcome in sorted(self.pmf):
            lines.append(" ".join(outcome) + " : " + str(self.pmf[outcome]))
        return "\n".join(lines) + "\n"


def parse_distribution(text: str) -> JointDistribution:
    """Inverse of JointDistribution.to_text; `#` starts a comment."""

    k = None
    pmf: dict = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if k is None:
            if not line.startswith("k="):
                raise ValueError(f"line {line_no}: expected k=<count> first, got {line!r}")
            k = int(line[2:])
            continue
        if ":" not in line:
            raise ValueError(f"line {line_no}: expected 'symbols... : probability'")
        left, right = line.rsplit(":", 1)
        outcome = tuple(left.split())
        prob = Fraction(right.strip())
        if outcome in pmf:
            raise ValueError(f"line {line_no}: duplicate outcome {outcome}")
        pmf[outcome] = prob
    if k is None:
        raise ValueError("empty distribution text")
    return JointDistribution(k, pmf)


def _entropy_bits(pmf_values) -> float:
    h = 0.0
    for prob in pmf_values:
        p = float(prob)
        if p > 0.0:
            h -= p * math.log2(p)
    return h


def entropy_vector(dist: JointDistribution) -> dict:
    """H(X_S) in bits for every nonempty subset mask S."""

    return {
        mask: _entropy_bits(dist.marginal(mask).values())
        for mask in nonempty_masks(dist.k)
    }


@dataclass(frozen=True)
class LinearInequality:
    """Assertion sum_S coeffs[S] * H(X_S) >= 0 over nonempty subset masks."""

    k: int
    coeffs: tuple

    def __init__(self, k: int, coeffs):
        if k < 1:
            raise ValueError("need at least one variable")
        items = []
        for mask, c in sorted(dict(coeffs).items()):
            if not 0 < mask < (1 << k):
                raise ValueError(f"mask {mask} out of range for k={k}")
            c = Fraction(c)
            if c != 0:
                items.append((mask, c))
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "coeffs", tuple(items))

    def coeff(self, mask: int) -> Fraction:
        for m, c in self.coeffs:
            if m == mask:
                return c
        return Fraction(0)

    def format(self) -> str:
        terms = " ".join(f"{mask_label(m)}:{c}" for m, c in self.coeffs)
        return f"k={self.k}; {terms}"


def parse_inequality(text: str) -> LinearInequality:
    """Parse 'k=3; {1}:1 {2}:1 {1,2}:-1'."""

    head, _, tail = text.partition(";")
    head = head.strip()
    if not head.startswith("k="):
        raise ValueError(f"expected k=<count>, got {head!r}")
    k = int(head[2:])
    coeffs: dict = {}
    for term in tail.split():
        subset, _, value = term.partition(":")
        if not (subset.startswith("{") and subset.endswith("}")) or not value:
            raise ValueError(f"bad term {term!r}, expected {{i,j}}:coeff")
        inner = subset[1:-1]
        mask = mask_of(int(i) for i in inner.split(",")) if inner else 0
        if mask == 0:
            raise ValueError(f"bad term {term!r}: subset must be nonempty")
        if mask in coeffs:
            raise ValueError(f"duplicate subset {subset}")
        coeffs[mask] = Fraction(value)
    return LinearInequality(k, coeffs)


def basic_inequality(k: int, i: int, given_mask: int = 0) -> LinearInequality:
    """H(X_i | X_J) >= 0 as a linear inequality; given_mask may be 0."""

    if not 1 <= i <= k:
        raise ValueError(f"variable {i} out of range for k={k}")
    i_bit = 1 << (i - 1)
    if given_mask & i_bit:
        raise ValueError(f"variable {i} cannot condition on itself")
    if not 0 <= given_mask < (1 << k):
        raise ValueError(f"mask {given_mask} out of range for k={k}")
    coeffs = {given_mask | i_bit: Fraction(1)}
    if given_mask:
        coeffs[given_mask] = Fraction(-1)
    return LinearInequality(k, coeffs)


def elemental_inequalities(k: int) -> tuple:
    """Generators of the Shannon cone, in a fixed order.

    First H(X_i | all others) >= 0 for i ascending, then
    I(X_i; X_j | X_S) >= 0 for i < j ascending and S ascending by mask.
    Their count is k + C(k,2) * 2^(k-2): 1, 3, 9, 28, 85 for k = 1..5.
    """

    if k < 1:
        raise ValueError("need at least one variable")
    full = (1 << k) - 1
    out = []
    for i in range(1, k + 1):
        out.append(basic_inequality(k, i, full & ~(1 << (i - 1))))
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            bi, bj = 1 << (i - 1), 1 << (j - 1)
            free = full & ~(bi | bj)
            sub = 0
            while True:
                coeffs = {
                    sub | bi: Fraction(1),
                    sub | bj: Fraction(1),
                    sub | bi | bj: Fraction(-1),
                }
                if sub:
                    coeffs[sub] = Fraction(-1)
                out.append(LinearInequality(k, coeffs))
                if sub == free:
                    break
                sub = (sub - free) & free
    return tuple(out)


def evaluate(inequality: LinearInequality, vector: dict) -> float:
    """Value of the inequality's left side on an entropy vector (floats)."""

    return sum(float(c) * vector[m] for m, c in inequality.coeffs)


@dataclass(frozen=True)
class ShannonDecision:
    """Outcome of a cone-membership test, with a verified certificate.

    member=True:  weights maps generator index (into
                  elemental_inequalities(k)) to a positive Fraction, and
                  the weighted generator sum equals the inequality.
    member=False: witness maps subset mask to a Fraction; the witness
                  point has g(witness) >= 0 for every generator but
                  inequality(witness) < 0.
    """

    k: int
    member: bool
    weights: dict | None
    witness: dict | None


def _bland_phase1(columns, rhs):
    """Minimal phase-1 simplex: find v >= 0 with columns @ v = rhs.

    columns is a list of length-m Fraction vectors.  Returns
    (solution dict col_index -> Fraction) on feasibility, else
    (None, y) with a Farkas vector y: y.rhs > 0 and y.col <= 0 for all
    columns.  Bland's rule makes cycling impossible, and everything is
    exact, so this terminates with a correct answer.
    """

    m = len(rhs)
    n = len(columns)
    signs = [1] * m
    rhs = list(rhs)
    cols = [list(c) for c in columns]
    for i in range(m):
        if rhs[i] < 0:
            signs[i] = -1
            rhs[i] = -rhs[i]
            for col in cols:
                col[i] = -col[i]
    # Tableau rows: [real columns | artificial identity | rhs].
    width = n + m + 1
    rows = []
    for i in range(m):
        row = [cols[j][i] for j in range(n)]
        row += [Fraction(1) if t == i else Fraction(0) for t in range(m)]
        row.append(rhs[i])
        rows.append(row)
    basis = [n + i for i in range(m)]
    # Reduced costs for phase-1 objective (sum of artificials).
    red = [Fraction(0)] * width
    for j in range(width):
        red[j] = (Fraction(1) if n <= j < n + m else Fraction(0)) - sum(
            rows[i][j] for i in range(m)
        )
    while True:
        enter = next((j for j in range(n + m) if red[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            if rows[i][enter] > 0:
                ratio = rows[i][width - 1] / rows[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            raise AssertionError("phase-1 objective is bounded, no unbounded ray exists")
        pivot = rows[leave][enter]
        rows[leave] = [v / pivot for v in rows[leave]]
        for i in range(m):
            if i != leave and rows[i][enter] != 0:
                f = rows[i][enter]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[leave])]
        if red[enter] != 0:
            f = red[enter]
            red = [a - f * b for a, b in zip(red, rows[leave])]
        basis[leave] = enter
    objective = sum(rows[i][width - 1] for i in range(m) if basis[i] >= n)
    if objective == 0:
        solution: dict = {}
        for i in range(m):
            if basis[i] < n and rows[i][width - 1] != 0:
                solution[basis[i]] = rows[i][width - 1]
        return solution, None
    # Infeasible: duals off the artificial columns give the Farkas vector.
    y = [(Fraction(1) - red[n + i]) * signs[i] for i in range(m)]
    return None, y


def is_shannon(inequality: LinearInequality) -> ShannonDecision:
    """Decide membership of the inequality in the Shannon cone.

    Both branches re-verify their certificate with exact arithmetic
    before returning, so a wrong answer cannot escape silently.
    """

    k = inequality.k
    generators = elemental_inequalities(k)
    masks = list(nonempty_masks(k))
    columns = [[g.coeff(m) for m in masks] for g in generators]
    target = [inequality.coeff(m) for m in masks]
    solution, farkas = _bland_phase1(columns, target)
    if solution is not None:
        for row_idx, mask in enumerate(masks):
            total = sum(columns[j][row_idx] * w for j, w in solution.items())
            if total != target[row_idx]:
                raise AssertionError(f"weights fail to reproduce coefficient of {mask}")
        return ShannonDecision(k, True, dict(sorted(solution.items())), None)
    witness = {m: -farkas[idx] for idx, m in enumerate(masks)}
    for g in generators:
        if sum(g.coeff(m) * witness[m] for m in masks) < 0:
            raise AssertionError("witness violates a generator")
    if sum(inequality.coeff(m) * witness[m] for m in masks) >= 0:
        raise AssertionError("witness does not violate the inequality")
    return ShannonDecision(k, False, None, witness)
