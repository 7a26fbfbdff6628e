"""Color-palette combinatorics on quadruples of color sets.

A palette is the set of colors available at a point (a nonempty
frozenset of ints).  ``has_sdr`` decides whether a family of palettes
admits a system of distinct representatives; when it does not,
``hall_violating_subset`` names a subfamily whose union is too small.

``classify_quadruple`` sorts a quadruple of palettes, each of size at
least two, into MONO (a color common to all four), RAINBOW (an SDR
exists), or exactly one of two residual shapes, each witnessed by an
index reordering plus an injective color renaming:

  TYPE_A: ({1,2}, {2,3}, {1,3}, subset of {1,2,3})
  TYPE_B: ({1,2}, {1,2}, {1,2}, superset of {3,4} avoiding 1 and 2)

``classification_scan`` proves exhaustively, for small color counts,
that no quadruple escapes these cases.  ``propagate_disjointness``
replays the consistency rules that tie the quadruples of two copies
sharing a face: both must land in the same shape, and when they share
three positions, the unshared palette is disjoint from a shared one on
the left exactly when the same holds on the right.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .geometry import ConstraintViolation, GeometryError

MONO = "MONO"
RAINBOW = "RAINBOW"
TYPE_A = "TYPE_A"
TYPE_B = "TYPE_B"

SCAN_MAX_COLORS = 5


def as_palette(colors) -> frozenset:
    out = frozenset(int(c) for c in colors)
    if not out:
        raise ConstraintViolation("empty_palette", "palettes must be nonempty")
    return out


def has_sdr(palettes):
    """A tuple of distinct representatives, one per palette, or None.

    Augmenting-path matching; None means Hall's condition fails and
    ``hall_violating_subset`` will produce a witness subfamily.
    """
    sets = [frozenset(p) for p in palettes]
    owner: dict = {}

    def augment(i, seen) -> bool:
        for c in sorted(sets[i]):
            if c in seen:
                continue
            seen.add(c)
            if c not in owner or augment(owner[c], seen):
                owner[c] = i
                return True
        return False

    for i in range(len(sets)):
        if not augment(i, set()):
            return None
    rep = {i: c for c, i in owner.items()}
    return tuple(rep[i] for i in range(len(sets)))


def hall_violating_subset(palettes):
    """Smallest index subfamily whose palette union is undersized."""
    sets = [frozenset(p) for p in palettes]
    for size in range(1, len(sets) + 1):
        for combo in itertools.combinations(range(len(sets)), size):
            union = frozenset().union(*(sets[i] for i in combo))
            if len(union) < size:
                return combo
    return None


def _is_type_a(quad) -> bool:
    return (
        quad[0] == {1, 2}
        and quad[1] == {2, 3}
        and quad[2] == {1, 3}
        and quad[3] <= {1, 2, 3}
    )


def _is_type_b(quad) -> bool:
    return (
        quad[0] == quad[1] == quad[2] == frozenset({1, 2})
        and {3, 4} <= quad[3]
        and not quad[3] & {1, 2}
    )


@dataclass(frozen=True)
class QuadClass:
    """Classification outcome with its replayable witness.

    For TYPE_A and TYPE_B, ``index_perm`` lists which input palette
    lands in each normal-form slot and ``color_map`` renames colors;
    ``normal_form`` replays both.  MONO carries a shared color, RAINBOW
    a representative per palette.
    """

    kind: str
    index_perm: tuple | None = None
    color_map: dict | None = None
    sdr: tuple | None = None
    common: int | None = None

    def normal_form(self, c1, c2, c3, c4):
        if self.index_perm is None or self.color_map is None:
            raise GeometryError(f"{self.kind} carries no relabeling witness")
        quads = (frozenset(c1), frozenset(c2), frozenset(c3), frozenset(c4))
        return tuple(
            frozenset(self.color_map[c] for c in quads[i]) for i in self.index_perm
        )


def _search_witness(sets):
    """Brute-force relabeling onto a normal form, small unions first.

    Index reorderings times injective color renamings; unions beyond
    the exhaustible size can only be the second shape, whose witness is
    then assembled directly from the three coinciding pairs.
    """
    union = sorted(frozenset().union(*sets))
    if len(union) <= SCAN_MAX_COLORS:
        for pattern, kind in ((_is_type_a, TYPE_A), (_is_type_b, TYPE_B)):
            for idx in itertools.permutations(range(4)):
                picked = [sets[i] for i in idx]
                for names in itertools.permutations(range(1, len(union) + 1)):
                    cmap = dict(zip(union, names))
                    mapped = tuple(frozenset(cmap[c] for c in s) for s in picked)
                    if pattern(mapped):
                        return QuadClass(kind=kind, index_perm=idx, color_map=cmap)
        return None
    for idx in itertools.permutations(range(4)):
        picked = [sets[i] for i in idx]
        trio = picked[0]
        if not (len(trio) == 2 and picked[1] == trio and picked[2] == trio):
            continue
        rest = picked[3]
        if rest & trio or len(rest) < 2:
            continue
        a, b = sorted(trio)
        others = sorted(rest)
        cmap = {a: 1, b: 2, others[0]: 3, others[1]: 4}
        for c in union:
            if c not in cmap:
                cmap[c] = 5 + len(cmap) - 4
        return QuadClass(kind=TYPE_B, index_perm=idx, color_map=cmap)
    return None


def classify_quadruple(c1, c2, c3, c4) -> QuadClass:
    """Place four palettes of size >= 2 into one of the four kinds."""
    sets = tuple(as_palette(c) for c in (c1, c2, c3, c4))
    for s in sets:
        if len(s) < 2:
            raise ConstraintViolation(
                "palette_size", f"classification needs palettes of size >= 2, got {set(s)}"
            )
    common = sets[0] & sets[1] & sets[2] & sets[3]
    if common:
        return QuadClass(kind=MONO, common=min(common))
    sdr = has_sdr(sets)
    if sdr is not None:
        return QuadClass(kind=RAINBOW, sdr=sdr)
    out = _search_witness(sets)
    if out is None:
        raise GeometryError(f"quadruple {tuple(set(s) for s in sets)} fits neither shape")
    nf = out.normal_form(*sets)
    if not (_is_type_a(nf) if out.kind == TYPE_A else _is_type_b(nf)):
        raise GeometryError("relabeling witness fails to replay")
    return out


def _classify_or_none(sets):
    if any(len(s) < 2 for s in sets):
        return None
    try:
        return classify_quadruple(*sets)
    except GeometryError:
        return None


def classification_scan(r: int) -> dict:
    """Classify every quadruple of size->=2 subsets of {1..r}.

    Ordered quadruples are counted through their sorted multiset, so
    each distinct multiset is classified once and weighted by its
    number of arrangements.  ``unclassifiable`` must come back 0.
    """
    if not 2 <= r <= SCAN_MAX_COLORS:
        raise ValueError(f"scan supports 2 <= r <= {SCAN_MAX_COLORS}, got {r}")
    ground = range(1, r + 1)
    pool = [
        frozenset(c)
        for size in range(2, r + 1)
        for c in itertools.combinations(ground, size)
    ]
    counts = {MONO: 0, RAINBOW: 0, TYPE_A: 0, TYPE_B: 0, "unclassifiable": 0}
    for multiset in itertools.combinations_with_replacement(pool, 4):
        mult = math.factorial(4)
        for _, group in itertools.groupby(multiset):
            mult //= math.factorial(len(list(group)))
        try:
            kind = classify_quadruple(*multiset).kind
        except GeometryError:
            kind = "unclassifiable"
        counts[kind] += mult
    counts["total"] = len(pool) ** 4
    assert sum(counts[k] for k in (MONO, RAINBOW, TYPE_A, TYPE_B, "unclassifiable")) == counts["total"]
    return counts


def _check_sharing(shared, left, right):
    try:
        pairs = sorted((int(k), int(v)) for k, v in dict(shared).items())
    except (TypeError, ValueError, AttributeError) as err:
        raise GeometryError(f"sharing map must be position pairs: {err}") from None
    keys = [k for k, _ in pairs]
    vals = [v for _, v in pairs]
    if any(not 0 <= p <= 3 for p in keys + vals):
        raise GeometryError(f"sharing positions must lie in 0..3, got {pairs}")
    if len(set(keys)) != len(keys) or len(set(vals)) != len(vals):
        raise GeometryError(f"sharing map repeats a position: {pairs}")
    for k, v in pairs:
        if left[k] != right[v]:
            raise GeometryError(
                f"position {k} is declared shared with {v} but palettes differ"
            )
    return dict(pairs)


def propagate_disjointness(quad, quad_prime, shared) -> list:
    """Consistency report for two palette quadruples sharing positions.

    ``shared`` maps positions of ``quad`` to equal-palette positions of
    ``quad_prime``.  When both quadruples classify as TYPE_A or TYPE_B,
    two rules apply: the kinds must agree, and with exactly three
    shared positions the unshared palette's disjointness from each
    shared palette must match on the two sides.  Returns the violation
    records; an empty list is a clean report.
    """
    left = tuple(as_palette(c) for c in quad)
    right = tuple(as_palette(c) for c in quad_prime)
    pairs = _check_sharing(shared, left, right)

    records = []
    cl = _classify_or_none(left)
    cr = _classify_or_none(right)
    in_scope = (
        cl is not None
        and cr is not None
        and cl.kind in (TYPE_A, TYPE_B)
        and cr.kind in (TYPE_A, TYPE_B)
    )
    if not in_scope:
        return records
    if cl.kind != cr.kind:
        records.append(
            {"rule": "same_type", "left_kind": cl.kind, "right_kind": cr.kind}
        )
    if len(pairs) == 3:
        free = next(p for p in range(4) if p not in pairs)
        free_r = next(p for p in range(4) if p not in pairs.values())
        for k, v in pairs.items():
            l_disjoint = not left[free] & left[k]
            r_disjoint = not right[free_r] & right[v]
            if l_disjoint != r_disjoint:
                records.append(
                    {
                        "rule": "type_b_biconditional",
                        "position": k,
                        "position_prime": v,
                        "left_disjoint": l_disjoint,
                        "right_disjoint": r_disjoint,
                    }
                )
    return records
