"""Empirical verification of complexity laws on exhaustive small grids.

Each law is an inequality between space-bounded complexities with an
additive slack and a space inflation, both scaled by one nonnegative
integer constant c.  verify_law finds the smallest c that makes the law
hold at every grid point and re-checks that c-1 fails, so a report is a
reproducible measurement, not a proof.  All logarithms in instantiated
bounds are ceil(log2(v + 2)) so arguments 0 and 1 are well defined.

Also here: the staged enumeration device (pairs below a complexity
threshold appear exactly once, at the first space bound that admits
them), typical sets (tuples whose conditional-complexity profile is
dominated by a base tuple's), the pigeonhole stabilization helper, and
the iteration lemma with its closed-form bound.

Constants produced by these grids are relative to the reference
interpreter and grid; they say nothing about asymptotics.  Reports carry
the caveat string verbatim.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path

from ._masks import indices_of, mask_label, nonempty_masks
from .entropy import (
    JointDistribution,
    LinearInequality,
    ShannonDecision,
    elemental_inequalities,
    entropy_vector,
)
from .kolmo import (
    INTERPRETER_TAG,
    ComplexityCache,
    ComplexityProfile,
    cached_ks,
    complexity_profile,
    encode_pair,
    encode_tuple,
)

__all__ = [
    "CAVEAT",
    "LAW_NAMES",
    "LawReport",
    "verify_law",
    "StageOrdinal",
    "staged_sets",
    "staged_enumeration",
    "TypicalSet",
    "typical_set",
    "gap_report",
    "profile_level_vector",
    "find_stable_level",
    "iterate_f",
    "lemma_bound",
    "lemma_search",
    "mutual_info_profile",
    "strings_up_to",
    "freeze_or_check",
    "BaselineMismatch",
    "baseline_name",
]

# Reports quote this verbatim: the grids are too small to distinguish
# growth rates, so the measured constants are not asymptotic claims.
CAVEAT = "n ≤ 3 cannot separate O(n) from O(n²)"

LAW_NAMES = ("pair_swap", "chain_easy", "symmetry", "basic", "shannon")

_MAX_GRID_POINTS = 500_000


def _clog2(v: int) -> int:
    """ceil(log2(v + 2)) for integer v >= 0, exactly."""

    if v < 0:
        raise ValueError("log argument must be >= 0")
    return (v + 1).bit_length()


def strings_up_to(n: int) -> list:
    """All bit strings of length <= n, shortest first, lexicographic within."""

    out = [""]
    for length in range(1, n + 1):
        out.extend("".join(t) for t in product("01", repeat=length))
    return out


@dataclass(frozen=True)
class LawReport:
    """Result of one law grid: the minimal constant and its evidence.

    minimal_c is the smallest integer for which the grid shows zero
    violations; violations_below is the violation count at minimal_c - 1
    (None when minimal_c is 0).  Vacuous points had some needed
    complexity NotFound at the cap and are excluded from the search but
    reported.  baseline_payload() drops the runtime fields so stored
    baselines compare the measurement, not the wall clock.
    """

    law: str
    n: int
    s_grid: tuple
    cap: int
    minimal_c: int
    violations: tuple
    violations_below: int | None
    points_total: int
    points_vacuous: int
    vacuous_points: tuple
    interpreter_tag: str
    caveat: str
    runtime_seconds: float
    ks_evaluations: int

    @property
    def vacuous_fraction(self) -> float:
        return self.points_vacuous / self.points_total if self.points_total else 0.0

    def baseline_payload(self) -> dict:
        return {
            "law": self.law,
            "n": self.n,
            "s_grid": list(self.s_grid),
            "cap": self.cap,
            "minimal_c": self.minimal_c,
            "violations": list(self.violations),
            "violations_below": self.violations_below,
            "points_total": self.points_total,
            "points_vacuous": self.points_vacuous,
            "vacuous_points": [list(v) for v in self.vacuous_points],
            "interpreter_tag": self.interpreter_tag,
            "caveat": self.caveat,
        }

    def baseline_text(self) -> str:
        """Canonical bytes for freeze_or_check; every surface must use this."""

        return json.dumps(self.baseline_payload(), sort_keys=True, ensure_ascii=False, indent=2) + "\n"

    def to_json(self) -> str:
        payload = self.baseline_payload()
        payload["runtime_seconds"] = round(self.runtime_seconds, 3)
        payload["ks_evaluations"] = self.ks_evaluations
        return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2) + "\n"

    # Fixed column order; one summary row per report.
    CSV_HEADER = "law,n,cap,s_grid,minimal_c,points_total,points_vacuous,interpreter_tag"

    def to_csv(self) -> str:
        grid = " ".join(str(s) for s in self.s_grid)
        return (
            f"{self.CSV_HEADER}\n"
            f'"{self.law}",{self.n},{self.cap},"{grid}",{self.minimal_c},'
            f"{self.points_total},{self.points_vacuous},{self.interpreter_tag}\n"
        )


def _pair_points(n: int) -> list:
    strings = strings_up_to(n)
    return [(x, y) for x in strings for y in strings]


def _tuple_points(k: int, n: int) -> list:
    strings = strings_up_to(n)
    return list(product(strings, repeat=k))


def _subtuple(point, mask: int) -> str:
    """Encoding of the sub-tuple picked by mask; the empty mask is ε."""

    if mask == 0:
        return ""
    return encode_tuple([point[i - 1] for i in indices_of(mask)])


def _validate_certificate(inequality: LinearInequality, certificate: ShannonDecision):
    if certificate is None or not certificate.member:
        raise ValueError("shannon law requires a Member certificate")
    if certificate.k != inequality.k:
        raise ValueError("certificate and inequality disagree on k")
    generators = elemental_inequalities(inequality.k)
    combined: dict = {}
    for idx, weight in (certificate.weights or {}).items():
        for mask, coeff in generators[idx].coeffs:
            combined[mask] = combined.get(mask, Fraction(0)) + weight * coeff
    lhs = {m: c for m, c in combined.items() if c != 0}
    rhs = {m: c for m, c in inequality.coeffs}
    if lhs != rhs:
        raise ValueError("certificate weights do not reproduce the inequality")


def verify_law(
    law: str,
    *,
    n: int,
    s_grid,
    cap: int,
    I=None,
    J=None,
    k: int | None = None,
    inequality: LinearInequality | None = None,
    certificate: ShannonDecision | None = None,
    cache: ComplexityCache | None = None,
) -> LawReport:
    """Find the minimal integer constant making a law hold on a full grid.

    Points are all tuples of bit strings of length <= n (pairs for the
    pair laws, k-tuples for basic/shannon) crossed with every s in
    s_grid.  The constant enters twice: as the additive slack and in the
    inflated space bound s' on the inequality's left side, so larger c
    only helps and the minimal c is found by doubling plus binary
    search.  Points with a NotFound complexity at c = 0 are vacuous:
    excluded from the search, reported in the result.
    """

    started = time.perf_counter()
    s_grid = tuple(sorted(set(int(s) for s in s_grid)))
    if not s_grid or s_grid[0] < 0:
        raise ValueError("s_grid must be nonempty with s >= 0")
    if n < 0:
        raise ValueError("n must be >= 0")

    neg_masks: list = []
    pos_masks: list = []
    if law in ("pair_swap", "chain_easy", "symmetry"):
        if n > 3:
            raise ValueError("pair laws are limited to n <= 3")
        points = _pair_points(n)
        label = law
    elif law == "basic":
        i_mask = sum(1 << (i - 1) for i in set(I or ()))
        j_mask = sum(1 << (j - 1) for j in set(J or ()))
        if k is None:
            raise ValueError("basic law needs k")
        if (i_mask | j_mask) >= (1 << k):
            raise ValueError("I and J must be subsets of {1..k}")
        if k >= 2 and n > 3:
            raise ValueError("tuple laws are limited to n <= 3 for k >= 2")
        points = _tuple_points(k, n)
        label = f"basic(I={mask_label(i_mask)},J={mask_label(j_mask)},k={k})"
    elif law == "shannon":
        if inequality is None:
            raise ValueError("shannon law needs an inequality")
        _validate_certificate(inequality, certificate)
        k = inequality.k
        if k >= 2 and n > 3:
            raise ValueError("tuple laws are limited to n <= 3 for k >= 2")
        points = _tuple_points(k, n)
        neg_masks = [(m, -c) for m, c in inequality.coeffs if c < 0]
        pos_masks = [(m, c) for m, c in inequality.coeffs if c > 0]
        label = f"shannon({inequality.format()})"
    else:
        raise ValueError(f"unknown law {law!r}, expected one of {LAW_NAMES}")

    if len(points) * len(s_grid) > _MAX_GRID_POINTS:
        raise ValueError(f"grid has {len(points) * len(s_grid)} points, limit {_MAX_GRID_POINTS}")

    calls = [0]

    def kv(y: str, x: str, s: int):
        calls[0] += 1
        return cached_ks(y, x, s, cap, cache).value

    if law == "shannon":

        def s_prime(s: int, c: int) -> int:
            return s + c * n * n * _clog2(n) + c * n * _clog2(s)

    else:

        def s_prime(s: int, c: int) -> int:
            return s + c * _clog2(s) + c * n

    def evaluate(point, s: int, sp: int, c: int):
        """(lhs, rhs) for the point, or None if a needed value is missing."""

        if law == "pair_swap":
            x, y = point
            rhs = kv(encode_pair(x, y), "", s)
            lhs = kv(encode_pair(y, x), "", sp)
            if rhs is None or lhs is None:
                return None
            return lhs, rhs + c
        if law == "chain_easy":
            x, y = point
            kx = kv(x, "", s)
            kyx = kv(y, x, s)
            lhs = kv(encode_pair(x, y), "", sp)
            if kx is None or kyx is None or lhs is None:
                return None
            return lhs, kx + kyx + c * _clog2(kx)
        if law == "symmetry":
            x, y = point
            kpair = kv(encode_pair(x, y), "", s)
            kx = kv(x, "", sp)
            kyx = kv(y, x, sp)
            if kpair is None or kx is None or kyx is None:
                return None
            return kx + kyx, kpair + c * _clog2(kpair)
        if law == "basic":
            union = kv(_subtuple(point, i_mask | j_mask), "", sp)
            inter = kv(_subtuple(point, i_mask & j_mask), "", sp)
            vi = kv(_subtuple(point, i_mask), "", s)
            vj = kv(_subtuple(point, j_mask), "", s)
            if None in (union, inter, vi, vj):
                return None
            return union + inter, vi + vj + c * _clog2(n)
        lhs = Fraction(0)
        for mask, coeff in neg_masks:
            v = kv(_subtuple(point, mask), "", sp)
            if v is None:
                return None
            lhs += coeff * v
        rhs = Fraction(c * _clog2(n))
        for mask, coeff in pos_masks:
            v = kv(_subtuple(point, mask), "", s)
            if v is None:
                return None
            rhs += coeff * v
        return lhs, rhs

    def sweep(c: int, skip: set, collect_vacuous: bool):
        violations = []
        vacuous = []
        for s in s_grid:
            sp = s_prime(s, c)
            for point in points:
                if (s, point) in skip:
                    continue
                result = evaluate(point, s, sp, c)
                if result is None:
                    if not collect_vacuous:
                        raise AssertionError("point turned vacuous away from c=0")
                    vacuous.append((s, point))
                    continue
                lhs, rhs = result
                if lhs > rhs:
                    violations.append(
                        {
                            "s": s,
                            "point": list(point),
                            "lhs": str(lhs),
                            "rhs": str(rhs),
                            "c": c,
                        }
                    )
        return violations, vacuous

    base_violations, vacuous0 = sweep(0, set(), True)
    skip = set(vacuous0)
    if not base_violations:
        minimal_c = 0
    else:
        hi = 1
        while sweep(hi, skip, False)[0]:
            hi *= 2
            if hi > (1 << 20):
                raise RuntimeError(f"{label}: no constant up to 2^20 satisfies the grid")
        lo = hi // 2  # lo fails (or is 0, which failed above); hi passes
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if sweep(mid, skip, False)[0]:
                lo = mid
            else:
                hi = mid
        minimal_c = hi

    final_violations, _ = sweep(minimal_c, skip, False)
    if final_violations:
        raise AssertionError("minimal c re-check produced violations")
    violations_below: int | None = None
    if minimal_c > 0:
        below, _ = sweep(minimal_c - 1, skip, False)
        violations_below = len(below)
        if violations_below == 0:
            raise AssertionError("c - 1 unexpectedly satisfies the grid")

    return LawReport(
        law=label,
        n=n,
        s_grid=s_grid,
        cap=cap,
        minimal_c=minimal_c,
        violations=tuple(),
        violations_below=violations_below,
        points_total=len(points) * len(s_grid),
        points_vacuous=len(vacuous0),
        vacuous_points=tuple((s, pt) for s, pt in vacuous0[:100]),
        interpreter_tag=INTERPRETER_TAG,
        caveat=CAVEAT,
        runtime_seconds=time.perf_counter() - started,
        ks_evaluations=calls[0],
    )


@dataclass(frozen=True)
class StageOrdinal:
    """Where a pair surfaces in the staged enumeration.

    ordinal is the pair's 0-based position across all stages in order;
    s_hit is the first space bound at which it qualified.  The invariant
    ordinal < total_enumerated holds by construction.
    """

    target: tuple
    threshold: int
    ordinal: int
    s_hit: int
    total_enumerated: int


def staged_sets(x: str, m: int, n: int, s_max: int, cache: ComplexityCache | None = None) -> list:
    """Newly qualifying y' per stage s = 0..s_max.

    Stage s lists, in (length, lexicographic) order, every y' of length
    <= n with KS^s(x, y') <= m that did not already qualify at s - 1;
    each candidate is checked at both bounds, so nothing is listed
    twice.  The cap of the underlying searches is m itself: qualifying
    means found at or below the threshold.  Stages start at s = 0
    because programs can succeed without any workspace.
    """

    if m < 0:
        raise ValueError("threshold must be >= 0")
    stages = []
    strings = strings_up_to(n)
    for s in range(s_max + 1):
        new = []
        for y in strings:
            pair = encode_pair(x, y)
            now = cached_ks(pair, "", s, m, cache).value
            if now is None:
                continue
            if s > 0:
                before = cached_ks(pair, "", s - 1, m, cache).value
                if before is not None:
                    continue
            new.append(y)
        stages.append(new)
    return stages


def staged_enumeration(
    x: str,
    m: int,
    n: int,
    target: tuple,
    stage_cap: int = 8,
    cache: ComplexityCache | None = None,
) -> StageOrdinal:
    """Run stages until the target pair appears; error past stage_cap."""

    tx, ty = target
    if tx != x:
        raise ValueError("target pair must have the enumerated x as first component")
    if len(ty) > n:
        raise ValueError("target second component exceeds the length bound")
    stages = staged_sets(x, m, n, stage_cap, cache)
    ordinal = 0
    for s, stage in enumerate(stages):
        for y in stage:
            if y == ty:
                total = sum(len(st) for st in stages[: s + 1])
                return StageOrdinal((x, ty), m, ordinal, s, total)
            ordinal += 1
    raise ValueError(
        f"pair ({x!r}, {ty!r}) never reaches threshold {m} within stage cap {stage_cap}"
    )


@dataclass(frozen=True)
class TypicalSet:
    """Tuples whose complexity profile is dominated by a base tuple's.

    members lists every tuple of strings (component lengths <= n) whose
    profile at the generous bound u_star is coordinatewise <= the base
    tuple's profile at u, with NotFound treated as infinity.  The base
    tuple is always a member because complexity never increases with
    space.
    """

    xs: tuple
    u: int
    u_star: int
    n: int
    cap: int
    members: tuple
    base_profile: ComplexityProfile


def _dominated(cand: ComplexityProfile, base: ComplexityProfile) -> bool:
    for key, base_entry in base.entries.items():
        cand_value = cand.entries[key].value
        if base_entry.value is None:
            continue
        if cand_value is None or cand_value > base_entry.value:
            return False
    return True


def typical_set(
    xs,
    u: int,
    n: int,
    cap: int,
    cache: ComplexityCache | None = None,
) -> TypicalSet:
    """All tuples profile-dominated by xs; see TypicalSet.

    The unbounded complexity a profile entry stands for is proxied by
    u_star = 4u + 1024; profiles here stabilize far below that, which
    tests confirm via find_stable_level.
    """

    xs = tuple(xs)
    k = len(xs)
    if not 1 <= k <= 2:
        raise ValueError("typical sets are limited to k <= 2")
    if n > 2:
        raise ValueError("typical sets are limited to n <= 2")
    if any(len(comp) > n for comp in xs):
        raise ValueError("base tuple exceeds the length bound")
    u_star = 4 * u + 1024
    base = complexity_profile(xs, u, cap, cache)
    members = []
    for cand in product(strings_up_to(n), repeat=k):
        prof = complexity_profile(cand, u_star, cap, cache)
        if _dominated(prof, base):
            members.append(cand)
    return TypicalSet(xs, u, u_star, n, cap, tuple(members), base)


def profile_level_vector(profile: ComplexityProfile) -> tuple:
    """Profile as a nonincreasing-in-s integer vector; NotFound maps to cap+1."""

    return tuple(
        profile.entries[key].value if profile.entries[key].value is not None else profile.cap + 1
        for key in sorted(profile.entries)
    )


def gap_report(ts: TypicalSet) -> str:
    """Entropy of the uniform distribution on the set vs the base profile.

    One row per profile coordinate (I | J): the conditional entropy
    H(X_I | X_J) of the uniform distribution over members, the base
    complexity KS(x_I | x_J), and their gap.  Output is a fixed-format
    text table, reproducible byte for byte on a given platform.
    """

    dist = JointDistribution.uniform(len(ts.xs), ts.members)
    hvec = entropy_vector(dist)

    def h(mask: int) -> float:
        return hvec[mask] if mask else 0.0

    lines = [
        f"base={','.join(ts.xs)} u={ts.u} u*={ts.u_star} n={ts.n} cap={ts.cap} "
        f"members={len(ts.members)} tag={INTERPRETER_TAG}",
        "I\tJ\tH_bits\tKS\tgap",
    ]
    for tmask, cmask in sorted(ts.base_profile.entries):
        entry = ts.base_profile.entries[(tmask, cmask)]
        cond_h = h(tmask | cmask) - h(cmask)
        ks_text = "NotFound" if entry.value is None else str(entry.value)
        gap = "" if entry.value is None else f"{entry.value - cond_h:+.6f}"
        lines.append(
            f"{mask_label(tmask)}\t{mask_label(cmask)}\t{cond_h:.6f}\t{ks_text}\t{gap}"
        )
    return "\n".join(lines) + "\n"


def find_stable_level(levels) -> int:
    """Smallest index k with levels[k] equal to levels[k+1].

    Input must be coordinatewise nonincreasing; then a list longer than
    1 + total decrease always contains an equal adjacent pair
    (pigeonhole), which is how profile sequences are shown to stabilize.
    """

    levels = [tuple(v) for v in levels]
    for idx in range(len(levels) - 1):
        cur, nxt = levels[idx], levels[idx + 1]
        if len(cur) != len(nxt):
            raise ValueError("level vectors must share a length")
        if any(b > a for a, b in zip(cur, nxt)):
            raise ValueError(f"levels increase at index {idx}")
        if cur == nxt:
            return idx
    raise ValueError("no stable adjacent pair; sequence too short")


def iterate_f(s: float, c: float, k: float, n: int) -> float:
    """n-fold iteration of f(v) = v + c*log2(v) + k starting at s >= 1."""

    if s < 1:
        raise ValueError("s must be >= 1")
    if c < 0 or k < 0:
        raise ValueError("c and k must be >= 0")
    if n < 1:
        raise ValueError("n must be >= 1")
    v = float(s)
    for _ in range(n):
        v = v + c * math.log2(v) + k
    return v


def lemma_bound(s: float, k: float, n: int, c1: float, c2: float) -> float:
    """Closed-form upper bound s + n*log2(s) + c1*(k+1)*(n+c2)*ln(n+c2)."""

    if c1 <= 0 or c2 <= 0:
        raise ValueError("c1 and c2 must be > 0")
    return s + n * math.log2(s) + c1 * (k + 1) * (n + c2) * math.log(n + c2)


def lemma_search(s_values, k_values, n_max: int, candidates=None) -> tuple:
    """Smallest (c1, c2) in lexicographic order covering the whole grid.

    Checks iterate_f(s, 1, k, n) <= lemma_bound(s, k, n, c1, c2) for all
    s in s_values, k in k_values, n in 1..n_max.  Iterations are shared
    across n for speed.  Raises if no candidate pair works.
    """

    if candidates is None:
        candidates = [(c1, c2) for c1 in range(1, 9) for c2 in range(1, 9)]
    log2 = math.log2
    ln = math.log
    for c1, c2 in candidates:
        ok = True
        for s in s_values:
            if not ok:
                break
            base = float(s)
            ls = log2(base)
            for k in k_values:
                v = base
                head = base  # s + n*log2(s) accumulates incrementally
                factor = c1 * (k + 1)
                bad = False
                for n in range(1, n_max + 1):
                    v = v + log2(v) + k
                    head += ls
                    if v > head + factor * (n + c2) * ln(n + c2):
                        bad = True
                        break
                if bad:
                    ok = False
                    break
        if ok:
            return (c1, c2)
    raise ValueError("no candidate (c1, c2) covers the grid")


def mutual_info_profile(a: str, b: str, s_grid, cap: int, cache: ComplexityCache | None = None):
    """[(s, KS^s(a) - KS^s(a|b))]; None where either term is NotFound.

    No monotonicity in s is asserted or implied.
    """

    if len(a) > 3 or len(b) > 3:
        raise ValueError("profile strings are limited to length 3")
    out = []
    for s in sorted(set(int(v) for v in s_grid)):
        ka = cached_ks(a, "", s, cap, cache).value
        kab = cached_ks(a, b, s, cap, cache).value
        out.append((s, None if ka is None or kab is None else ka - kab))
    return out


class BaselineMismatch(AssertionError):
    """Stored baseline differs from the regenerated content."""


def baseline_name(kind: str, report: LawReport) -> str:
    """File name keyed by law, grid, and interpreter tag."""

    grid_digest = hashlib.sha256(
        json.dumps([report.n, list(report.s_grid), report.cap]).encode()
    ).hexdigest()[:12]
    law_slug = "".join(ch if ch.isalnum() else "-" for ch in report.law).strip("-")
    while "--" in law_slug:
        law_slug = law_slug.replace("--", "-")
    return f"{kind}__{law_slug}__{grid_digest}__{report.interpreter_tag}.json"


def freeze_or_check(directory, name: str, content: str) -> str:
    """Golden-baseline gate: first run stores, later runs must match.

    Returns "created" or "matched"; raises BaselineMismatch otherwise.
    """

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / name
    if not path.exists():
        path.write_text(content, encoding="utf-8")
        return "created"
    stored = path.read_text(encoding="utf-8")
    if stored != content:
        raise BaselineMismatch(f"{path} no longer matches the regenerated content")
    return "matched"
