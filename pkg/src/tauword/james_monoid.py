"""Word combinatorics and point-set checks for reduced products of words.

A finite based Alexandrov model is a finite poset with a basepoint; its open
sets are the up-sets, the minimal open neighbourhood of x is up(x), and {x}
is closed iff x is minimal.  Words over the non-basepoint points form the
free monoid; the length-n stage carries the quotient topology from the n-th
power of the model, where a tuple maps to the word obtained by dropping
basepoint entries.

Everything here is exhaustive and exact: fibers are enumerated, standard
neighbourhoods are built as unions of boxes, saturation is checked against
the fiber partition, and the quotient topology is compared with the subspace
topology induced from higher stages via minimal open sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Optional, Sequence


class ModelError(ValueError):
    pass


class SpecMismatchError(ValueError):
    """A standard-neighbourhood spec does not fit the word."""


class SizeBoundError(ValueError):
    """Model or stage exceeds the exhaustive-check bounds."""


class EmptyFiberError(ValueError):
    """Requested ambient length is shorter than the word."""


Word = tuple[str, ...]
Tuple_ = tuple[str, ...]

EMPTY_WORD: Word = ()


@dataclass(frozen=True)
class FiniteSpaceModel:
    """Finite poset with basepoint; opens are up-sets of the stored order."""

    points: tuple[str, ...]
    base: str
    le: frozenset[tuple[str, str]]  # reflexive-transitive order relation

    def up(self, x: str) -> frozenset[str]:
        return frozenset(y for y in self.points if (x, y) in self.le)

    def down(self, x: str) -> frozenset[str]:
        return frozenset(y for y in self.points if (y, x) in self.le)

    def letters(self) -> tuple[str, ...]:
        return tuple(p for p in self.points if p != self.base)

    def opens(self) -> list[frozenset[str]]:
        """All open sets (up-sets), smallest first."""
        out = []
        pts = self.points
        for bits in range(1 << len(pts)):
            s = frozenset(p for i, p in enumerate(pts) if bits >> i & 1)
            if all(self.up(x) <= s for x in s):
                out.append(s)
        return sorted(out, key=lambda s: (len(s), sorted(s)))

    def is_open(self, s) -> bool:
        s = frozenset(s)
        return s <= frozenset(self.points) and all(self.up(x) <= s for x in s)

    @property
    def is_t1(self) -> bool:
        # finite T1 = discrete = trivial order
        return all(x == y for x, y in self.le)

    @property
    def base_is_closed(self) -> bool:
        return self.down(self.base) == frozenset([self.base])


def model(points: Sequence[str], base: str, strict_pairs: Sequence[tuple[str, str]]) -> FiniteSpaceModel:
    """Build a model from generating order pairs (x, y) meaning x <= y.

    The reflexive-transitive closure is taken; antisymmetry is then checked.
    """
    pts = tuple(points)
    if len(set(pts)) != len(pts):
        raise ModelError("duplicate points")
    if base not in pts:
        raise ModelError(f"basepoint {base!r} not among the points")
    rel = {(p, p) for p in pts}
    for x, y in strict_pairs:
        if x not in pts or y not in pts:
            raise ModelError(f"order pair ({x!r}, {y!r}) uses unknown points")
        rel.add((x, y))
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), list(rel)):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    for x, y in rel:
        if x != y and (y, x) in rel:
            raise ModelError(f"order is not antisymmetric: {x!r} <= {y!r} <= {x!r}")
    return FiniteSpaceModel(pts, base, frozenset(rel))


def parse_model(text: str) -> FiniteSpaceModel:
    """Parse ``points: e a b; base: e; le: e<a, a<b`` (';' or newlines)."""
    sections: dict[str, str] = {}
    for chunk in text.replace("\n", ";").split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" not in chunk:
            raise ModelError(f"cannot parse section {chunk!r}")
        key, value = chunk.split(":", 1)
        sections[key.strip()] = value.strip()
    if "points" not in sections or "base" not in sections:
        raise ModelError("model file needs 'points:' and 'base:' sections")
    points = sections["points"].split()
    base = sections["base"]
    pairs = []
    for pair in sections.get("le", "").split(","):
        pair = pair.strip()
        if not pair:
            continue
        if "<" not in pair:
            raise ModelError(f"order pair {pair!r} must look like x<y")
        x, y = (t.strip() for t in pair.split("<", 1))
        pairs.append((x, y))
    return model(points, base, pairs)


def render_model(m: FiniteSpaceModel) -> str:
    pairs = sorted((x, y) for x, y in m.le if x != y)
    le = ", ".join(f"{x}<{y}" for x, y in pairs)
    return f"points: {' '.join(m.points)}; base: {m.base}; le: {le}"


# ---------------------------------------------------------------------------
# Words, the quotient maps, fibers
# ---------------------------------------------------------------------------


def q_tuple(m: FiniteSpaceModel, t: Sequence[str]) -> Word:
    """Drop basepoint entries, preserving order."""
    for x in t:
        if x not in m.points:
            raise ModelError(f"tuple entry {x!r} is not a model point")
    return tuple(x for x in t if x != m.base)


def concat_words(a: Word, b: Word) -> Word:
    return tuple(a) + tuple(b)


def words_up_to(m: FiniteSpaceModel, n: int) -> list[Word]:
    letters = m.letters()
    out: list[Word] = []
    for length in range(n + 1):
        out.extend(itertools.product(letters, repeat=length))
    return out


def fiber(m: FiniteSpaceModel, w: Word, n: int) -> set[Tuple_]:
    """All n-tuples mapping to w: insert n - |w| basepoint entries."""
    if n < len(w):
        raise EmptyFiberError(f"ambient length {n} < word length {len(w)}")
    out = set()
    for positions in itertools.combinations(range(n), len(w)):
        t = [m.base] * n
        for p, letter in zip(positions, w):
            t[p] = letter
        out.add(tuple(t))
    return out


def standard_nbhd(
    m: FiniteSpaceModel,
    w: Word,
    letter_opens: Sequence,
    base_open,
    n: int,
) -> tuple[frozenset[Tuple_], frozenset[Word]]:
    """Union of product boxes over the fiber of w, and its word image.

    letter_opens[j] is an open set containing w[j] but not the basepoint;
    base_open is an open set containing the basepoint and fills the
    remaining slots.
    """
    us = [frozenset(u) for u in letter_opens]
    v = frozenset(base_open)
    if len(us) != len(w):
        raise SpecMismatchError(f"{len(us)} opens for a word of length {len(w)}")
    if n < len(w):
        raise SpecMismatchError(f"ambient length {n} < word length {len(w)}")
    for j, u in enumerate(us):
        if not m.is_open(u):
            raise SpecMismatchError(f"U_{j + 1} is not open")
        if m.base in u:
            raise SpecMismatchError(f"U_{j + 1} contains the basepoint")
        if w[j] not in u:
            raise SpecMismatchError(f"letter {w[j]!r} not in U_{j + 1}")
    if not m.is_open(v):
        raise SpecMismatchError("V is not open")
    if m.base not in v:
        raise SpecMismatchError("V does not contain the basepoint")
    tuples: set[Tuple_] = set()
    for positions in itertools.combinations(range(n), len(w)):
        slots: list[frozenset[str]] = [v] * n
        for j, p in enumerate(positions):
            slots[p] = us[j]
        tuples.update(itertools.product(*slots))
    n_set = frozenset(tuples)
    return n_set, frozenset(q_tuple(m, t) for t in n_set)


def check_saturated(m: FiniteSpaceModel, tuples, n: int) -> bool:
    """True iff the tuple set is a union of fibers of the length-n quotient."""
    tuples = frozenset(tuples)
    image = {q_tuple(m, t) for t in tuples}
    preimage: set[Tuple_] = set()
    for w in image:
        preimage.update(fiber(m, w, n))
    return preimage == tuples


# ---------------------------------------------------------------------------
# Quotient topology on the length-filtered stages
# ---------------------------------------------------------------------------


def word_successors(m: FiniteSpaceModel, w: Word, n: int) -> set[Word]:
    """One-step specializations of w inside the length-n stage.

    Single-slot moves generate the saturation preorder: replace a letter by
    something in its minimal open, delete a letter whose minimal open
    contains the basepoint, or insert a letter from the basepoint's minimal
    open when a slot is free.  Simultaneous product-order moves decompose
    into these without exceeding the ambient length.
    """
    out: set[Word] = set()
    for i, x in enumerate(w):
        for y in m.up(x):
            if y == x:
                continue
            if y == m.base:
                out.add(w[:i] + w[i + 1 :])
            else:
                out.add(w[:i] + (y,) + w[i + 1 :])
    if len(w) < n:
        for y in m.up(m.base):
            if y == m.base:
                continue
            for i in range(len(w) + 1):
                out.add(w[:i] + (y,) + w[i:])
    return out


def minimal_open(m: FiniteSpaceModel, w: Word, n: int) -> frozenset[Word]:
    """Minimal open set of w in the quotient topology of the length-n stage."""
    seen = {w}
    frontier = [w]
    while frontier:
        nxt = []
        for u in frontier:
            for v in word_successors(m, u, n):
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return frozenset(seen)


def quotient_min_opens(m: FiniteSpaceModel, n: int) -> dict[Word, frozenset[Word]]:
    return {w: minimal_open(m, w, n) for w in words_up_to(m, n)}


def stage_closed_in_next(m: FiniteSpaceModel, n: int) -> bool:
    """Is the length-<=n stage closed in the length-(n+1) quotient stage?

    Equivalent to the set of basepoint-free (n+1)-tuples being an up-set,
    checked exhaustively.
    """
    letters = m.letters()
    for t in itertools.product(letters, repeat=n + 1):
        for i, x in enumerate(t):
            for y in m.up(x):
                if y == m.base:
                    return False
    return True


@dataclass(frozen=True)
class TopologyReport:
    n: int
    agree: bool
    stable: bool
    certificate: Optional[tuple[Word, frozenset[Word], frozenset[Word]]]
    stage_t1: bool
    base_closed: bool
    model_t1: bool
    closed_in_next: bool


def topologies_agree(
    m: FiniteSpaceModel, n: int, max_points: int = 4, max_n: int = 3
) -> TopologyReport:
    """Compare the quotient topology on the length-n stage with the subspace
    topology induced by the length-(n+1) quotient (and length-(n+2) as a
    stability check), via minimal open sets.

    Also reports whether the stage is T1, whether the basepoint is closed,
    and whether the stage is closed in the next one.
    """
    if len(m.points) > max_points or n > max_n:
        raise SizeBoundError(
            f"bounds exceeded: {len(m.points)} points (max {max_points}), n={n} (max {max_n})"
        )
    stage = set(words_up_to(m, n))
    quotient = quotient_min_opens(m, n)
    agree = True
    stable = True
    certificate = None
    for k, flag in ((n + 1, "agree"), (n + 2, "stable")):
        for w in sorted(stage):
            sub = frozenset(u for u in minimal_open(m, w, k) if len(u) <= n)
            if sub != quotient[w]:
                if flag == "agree":
                    agree = False
                stable = False
                if certificate is None:
                    certificate = (w, quotient[w], sub)
        if not stable:
            break
    stage_t1 = all(quotient[w] == frozenset([w]) for w in stage)
    return TopologyReport(
        n=n,
        agree=agree,
        stable=stable,
        certificate=certificate,
        stage_t1=stage_t1,
        base_closed=m.base_is_closed,
        model_t1=m.is_t1,
        closed_in_next=stage_closed_in_next(m, n),
    )


# ---------------------------------------------------------------------------
# Exhaustive model enumeration (for sweeps) and fast saturation checks
# ---------------------------------------------------------------------------

_POINT_NAMES = ("e", "a", "b", "c")


def all_models(max_points: int = 4) -> list[FiniteSpaceModel]:
    """Every labeled poset on at most max_points points with basepoint 'e'."""
    out = []
    for size in range(1, max_points + 1):
        pts = _POINT_NAMES[:size]
        pairs = [(x, y) for x in pts for y in pts if x != y]
        for bits in range(1 << len(pairs)):
            rel = {pairs[i] for i in range(len(pairs)) if bits >> i & 1}
            if not _is_strict_order(rel):
                continue
            out.append(FiniteSpaceModel(pts, "e", frozenset(rel | {(p, p) for p in pts})))
    return out


def _is_strict_order(rel: set[tuple[str, str]]) -> bool:
    for x, y in rel:
        if (y, x) in rel:
            return False
    for x, y in rel:
        for y2, z in rel:
            if y == y2 and (x, z) not in rel:
                return False
    return True


def canonical_key(m: FiniteSpaceModel):
    """Canonical form under relabelings of the non-basepoint points."""
    others = m.letters()
    best = None
    for perm in itertools.permutations(others):
        relabel = {m.base: "e"}
        relabel.update({p: _POINT_NAMES[i + 1] for i, p in enumerate(perm)})
        key = (len(m.points), tuple(sorted((relabel[x], relabel[y]) for x, y in m.le)))
        if best is None or key < best:
            best = key
    return best


@dataclass
class _StageTables:
    """Bitmask tables for one (model, ambient length) pair."""

    tuples: list[Tuple_]
    word_of: list[Word]
    fiber_mask: dict[Word, int]
    slot_masks: list[dict[frozenset[str], int]] = field(default_factory=list)


def stage_tables(m: FiniteSpaceModel, n: int) -> _StageTables:
    tuples = list(itertools.product(m.points, repeat=n))
    word_of = [q_tuple(m, t) for t in tuples]
    fiber_mask: dict[Word, int] = {}
    for i, w in enumerate(word_of):
        fiber_mask[w] = fiber_mask.get(w, 0) | (1 << i)
    tables = _StageTables(tuples, word_of, fiber_mask)
    opens = m.opens()
    for slot in range(n):
        masks: dict[frozenset[str], int] = {}
        for o in opens:
            mask = 0
            for i, t in enumerate(tuples):
                if t[slot] in o:
                    mask |= 1 << i
            masks[o] = mask
        tables.slot_masks.append(masks)
    return tables


def nbhd_mask(tables: _StageTables, w: Word, us: Sequence[frozenset[str]], v: frozenset[str], n: int) -> int:
    mask = 0
    for positions in itertools.combinations(range(n), len(w)):
        box = (1 << len(tables.tuples)) - 1
        pos_set = set(positions)
        j = 0
        for slot in range(n):
            if slot in pos_set:
                box &= tables.slot_masks[slot][us[j]]
                j += 1
            else:
                box &= tables.slot_masks[slot][v]
        mask |= box
    return mask


def mask_saturated(tables: _StageTables, mask: int) -> bool:
    acc = 0
    for fmask in tables.fiber_mask.values():
        if fmask & mask:
            acc |= fmask
    return acc == mask


def sweep_standard_nbhds(m: FiniteSpaceModel, n: int) -> tuple[int, int]:
    """Check saturation of every standard neighbourhood at ambient length n.

    Returns (number checked, number saturated).  'Every' means every word of
    length <= n over the non-basepoint letters and every choice of opens
    U_j containing the j-th letter but not the basepoint, V containing the
    basepoint.
    """
    tables = stage_tables(m, n)
    opens = m.opens()
    opens_base = [o for o in opens if m.base in o]
    checked = saturated = 0
    for w in words_up_to(m, n):
        per_letter = [[o for o in opens if w[j] in o and m.base not in o] for j in range(len(w))]
        for us in itertools.product(*per_letter):
            for v in opens_base:
                mask = nbhd_mask(tables, w, us, v, n)
                checked += 1
                if mask_saturated(tables, mask):
                    saturated += 1
    return checked, saturated


def word_nbhd_stats(m: FiniteSpaceModel, w: Word, n: int) -> dict:
    """Tabulate every standard neighbourhood of one word at ambient length n."""
    tables = stage_tables(m, n)
    opens = m.opens()
    per_letter = [[o for o in opens if w[j] in o and m.base not in o] for j in range(len(w))]
    specs = saturated = 0
    smallest = largest = None
    for us in itertools.product(*per_letter):
        for v in (o for o in opens if m.base in o):
            mask = nbhd_mask(tables, w, us, v, n)
            size = mask.bit_count()
            specs += 1
            saturated += mask_saturated(tables, mask)
            smallest = size if smallest is None else min(smallest, size)
            largest = size if largest is None else max(largest, size)
    return {
        "specs": specs,
        "saturated": saturated,
        "smallest": smallest or 0,
        "largest": largest or 0,
    }


def fiber_counts_by_pass(m: FiniteSpaceModel, n: int) -> dict[Word, int]:
    """Count fiber sizes by a single pass over the full n-th power."""
    counts: dict[Word, int] = {}
    for t in itertools.product(m.points, repeat=n):
        w = q_tuple(m, t)
        counts[w] = counts.get(w, 0) + 1
    return counts


def expected_fiber_count(n: int, length: int) -> int:
    return comb(n, length)
