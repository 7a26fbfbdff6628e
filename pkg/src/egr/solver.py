"""Complete search for color-forcing verdicts on finite configurations.

A problem asks: does every r-coloring of the points contain some mono
target tuple colored all-same or some rainbow target tuple colored
all-distinct?  ``solve_gr`` answers by backtracking over points with
bitmask domains, most-constrained-first selection, and first-use color
symmetry breaking; FORCED means the search space closed with no
avoiding coloring, COUNTEREXAMPLE ships the avoiding coloring it
found.  Running out of budget raises; an undecided instance never
masquerades as a verdict.

``exhaustive_oracle`` re-derives small verdicts by plain enumeration so
the solver has an independent reference, and ``five_point_logic_scan``
enumerates every coloring of a five-point gadget to confirm the forced
chord-endpoint agreement that the gadget geometry encodes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .geometry import Configuration

FORCED = "FORCED"
COUNTEREXAMPLE = "COUNTEREXAMPLE"

ORACLE_CAP = 10**7
DEFAULT_BUDGET = 300.0


class BudgetExceeded(RuntimeError):
    """Search ran out of time before reaching a verdict."""


def _check_targets(name: str, targets, n: int) -> list[tuple[int, ...]]:
    out = []
    for t in targets:
        tt = tuple(int(i) for i in t)
        if len(tt) < 2:
            raise ValueError(f"{name} target {tt} needs at least 2 points")
        if len(set(tt)) != len(tt):
            raise ValueError(f"{name} target {tt} repeats a point")
        if any(i < 0 or i >= n for i in tt):
            raise ValueError(f"{name} target {tt} is out of range for {n} points")
        out.append(tt)
    return out


@dataclass
class ColoringProblem:
    cfg: Configuration
    mono_targets: list[tuple[int, ...]]
    rainbow_targets: list[tuple[int, ...]]
    r: int

    def __post_init__(self):
        n = len(self.cfg.points)
        self.mono_targets = _check_targets("mono", self.mono_targets, n)
        self.rainbow_targets = _check_targets("rainbow", self.rainbow_targets, n)
        self.r = int(self.r)
        if self.r < 1:
            raise ValueError(f"color count must be positive, got {self.r}")

    def to_json_dict(self) -> dict:
        return {
            "config": self.cfg.to_json_dict(),
            "mono": [list(t) for t in self.mono_targets],
            "rainbow": [list(t) for t in self.rainbow_targets],
            "r": self.r,
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "ColoringProblem":
        return cls(
            cfg=Configuration.from_json_dict(payload["config"]),
            mono_targets=[tuple(t) for t in payload["mono"]],
            rainbow_targets=[tuple(t) for t in payload["rainbow"]],
            r=payload["r"],
        )


@dataclass
class SearchStats:
    nodes: int = 0
    elapsed: float = 0.0


@dataclass
class SearchResult:
    verdict: str
    witness: list[int] | None
    stats: SearchStats = field(default_factory=SearchStats)

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": None if self.witness is None else [int(c) for c in self.witness],
            "stats": {"nodes": self.stats.nodes, "elapsed": self.stats.elapsed},
        }


def verify_coloring(problem: ColoringProblem, coloring) -> dict:
    """Replay a full coloring against every target.

    Returns the violated mono targets (colored all-same) and realized
    rainbow targets (colored all-distinct); ``clean`` means the
    coloring avoids everything and therefore certifies COUNTEREXAMPLE.
    """
    n = len(problem.cfg.points)
    cols = [int(c) for c in coloring]
    if len(cols) != n:
        raise ValueError(f"coloring covers {len(cols)} of {n} points")
    if any(c < 0 or c >= problem.r for c in cols):
        raise ValueError("coloring uses a color outside range")
    mono_bad = [t for t in problem.mono_targets if len({cols[i] for i in t}) == 1]
    rain_bad = [t for t in problem.rainbow_targets if len({cols[i] for i in t}) == len(t)]
    return {
        "mono_violations": mono_bad,
        "rainbow_violations": rain_bad,
        "clean": not mono_bad and not rain_bad,
    }


def solve_gr(problem: ColoringProblem, budget: float = DEFAULT_BUDGET) -> SearchResult:
    """Backtracking search for an avoiding coloring.

    Colors are interchangeable in every constraint, so each point may
    only take an already-used color or the lowest unused one; the
    variable order picks the smallest remaining domain (ties by index),
    which keeps the pruned tree isomorphic under color permutation and
    the verdict deterministic.
    """
    n = len(problem.cfg.points)
    r = problem.r
    full = (1 << r) - 1
    colors = [-1] * n
    domains = [full] * n
    use_count = [0] * r

    point_mono: list[list[tuple[int, ...]]] = [[] for _ in range(n)]
    point_rain: list[list[tuple[int, ...]]] = [[] for _ in range(n)]
    for t in problem.mono_targets:
        for p in t:
            point_mono[p].append(t)
    for t in problem.rainbow_targets:
        for p in t:
            point_rain[p].append(t)

    start = time.monotonic()
    deadline = start + budget
    stats = SearchStats()

    def propagate(idx: int, trail: list[tuple[int, int]]) -> bool:
        c = colors[idx]
        for t in point_mono[idx]:
            free = -1
            nfree = 0
            allsame = True
            for p in t:
                cp = colors[p]
                if cp < 0:
                    nfree += 1
                    free = p
                    if nfree > 1:
                        break
                elif cp != c:
                    allsame = False
                    break
            if not allsame or nfree > 1:
                continue
            if nfree == 0:
                return False
            bit = 1 << c
            if domains[free] & bit:
                trail.append((free, domains[free]))
                domains[free] &= ~bit
                if not domains[free]:
                    return False
        for t in point_rain[idx]:
            free = -1
            nfree = 0
            used = 0
            distinct = True
            for p in t:
                cp = colors[p]
                if cp < 0:
                    nfree += 1
                    free = p
                    if nfree > 1:
                        break
                else:
                    bit = 1 << cp
                    if used & bit:
                        distinct = False
                        break
                    used |= bit
            if not distinct or nfree > 1:
                continue
            if nfree == 0:
                return False
            narrowed = domains[free] & used
            if narrowed != domains[free]:
                trail.append((free, domains[free]))
                domains[free] = narrowed
                if not narrowed:
                    return False
        return True

    def pick() -> int:
        best, best_size = -1, r + 1
        for i in range(n):
            if colors[i] < 0:
                size = domains[i].bit_count()
                if size < best_size:
                    best, best_size = i, size
                    if size <= 1:
                        break
        return best

    def dfs() -> bool:
        idx = pick()
        if idx < 0:
            return True
        used_mask = 0
        for c in range(r):
            if use_count[c]:
                used_mask |= 1 << c
        fresh = (~used_mask) & full
        allowed = domains[idx] & (used_mask | (fresh & -fresh))
        cand = allowed
        while cand:
            bit = cand & -cand
            cand ^= bit
            c = bit.bit_length() - 1
            stats.nodes += 1
            if stats.nodes % 2048 == 0 and time.monotonic() > deadline:
                raise BudgetExceeded(
                    f"no verdict after {stats.nodes} nodes within {budget} s"
                )
            colors[idx] = c
            use_count[c] += 1
            trail: list[tuple[int, int]] = []
            if propagate(idx, trail) and dfs():
                return True
            for p, dom in reversed(trail):
                domains[p] = dom
            colors[idx] = -1
            use_count[c] -= 1
        return False

    try:
        found = dfs()
    except BudgetExceeded:
        stats.elapsed = time.monotonic() - start
        raise
    stats.elapsed = time.monotonic() - start
    if found:
        witness = list(colors)
        report = verify_coloring(problem, witness)
        if not report["clean"]:
            raise AssertionError("search returned a non-avoiding coloring")
        return SearchResult(verdict=COUNTEREXAMPLE, witness=witness, stats=stats)
    return SearchResult(verdict=FORCED, witness=None, stats=stats)


def _digit_matrix(codes: np.ndarray, n: int, r: int) -> np.ndarray:
    digits = np.empty((len(codes), n), dtype=np.int64)
    rest = codes.copy()
    for j in range(n):
        rest, digits[:, j] = np.divmod(rest, r)
    return digits


def exhaustive_oracle(problem: ColoringProblem, cap: int = ORACLE_CAP) -> SearchResult:
    """Enumerate every coloring; independent reference for solve_gr."""
    n = len(problem.cfg.points)
    r = problem.r
    total = r**n
    if total > cap:
        raise ValueError(f"{r}^{n} = {total} colorings exceed the oracle cap {cap}")
    start = time.monotonic()
    stats = SearchStats()
    chunk = 1 << 14
    for lo in range(0, total, chunk):
        codes = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        digits = _digit_matrix(codes, n, r)
        avoid = np.ones(len(codes), dtype=bool)
        for t in problem.mono_targets:
            same = np.ones(len(codes), dtype=bool)
            for p in t[1:]:
                same &= digits[:, p] == digits[:, t[0]]
            avoid &= ~same
        for t in problem.rainbow_targets:
            distinct = np.ones(len(codes), dtype=bool)
            for a_i in range(len(t)):
                for b_i in range(a_i + 1, len(t)):
                    distinct &= digits[:, t[a_i]] != digits[:, t[b_i]]
            avoid &= ~distinct
        if avoid.any():
            row = int(np.argmax(avoid))
            stats.nodes += row + 1
            stats.elapsed = time.monotonic() - start
            witness = [int(c) for c in digits[row]]
            return SearchResult(verdict=COUNTEREXAMPLE, witness=witness, stats=stats)
        stats.nodes += len(codes)
    stats.elapsed = time.monotonic() - start
    return SearchResult(verdict=FORCED, witness=None, stats=stats)


def five_point_logic_scan(r: int) -> dict:
    """Exhaust all r-colorings of the five-point gadget A,B,P,M,N.

    Hypotheses: the gap endpoints A and B get distinct colors and none
    of the four congruent triangles NPA, NPB, NMA, NMB is colored
    monochromatic or rainbow.  Under these, the chord endpoints M and P
    must agree; the scan counts colorings either way.
    """
    if not 3 <= r <= 5:
        raise ValueError(f"scan supports 3 <= r <= 5, got {r}")
    a, b, p, m, nn = 0, 1, 2, 3, 4
    triangles = [(nn, p, a), (nn, p, b), (nn, m, a), (nn, m, b)]
    codes = np.arange(r**5, dtype=np.int64)
    digits = _digit_matrix(codes, 5, r)
    hyp = digits[:, a] != digits[:, b]
    for t in triangles:
        i, j, k = t
        mono = (digits[:, i] == digits[:, j]) & (digits[:, j] == digits[:, k])
        rainbow = (
            (digits[:, i] != digits[:, j])
            & (digits[:, j] != digits[:, k])
            & (digits[:, i] != digits[:, k])
        )
        hyp &= ~mono & ~rainbow
    agree = digits[:, m] == digits[:, p]
    return {
        "violations": int((hyp & ~agree).sum()),
        "conforming": int((hyp & agree).sum()),
    }
