"""Exact rational arithmetic for the middle-third complementary intervals.

The open intervals removed when building the middle-third Cantor set form a
countable dense linear order (order type of the rationals).  Component k of
level n has length 3^-n; enumerating levels in order and slots left to right
gives the pairing m <-> (level, slot) with m = 2^(level-1) + slot - 1 used to
place the factors of a transfinite concatenation.

Also provides canonical order embeddings of the supported countable orders
into the components, and extension of a bijection between two embedded
sources to a bijection of all components (hence of their indices).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union


@dataclass(frozen=True, slots=True, order=False)
class CantorComponent:
    """Removed open interval I(level, slot) with exact rational endpoints."""

    level: int
    slot: int
    lo: Fraction
    hi: Fraction

    def __lt__(self, other: "CantorComponent") -> bool:
        return self.lo < other.lo

    def __le__(self, other: "CantorComponent") -> bool:
        return self.lo <= other.lo

    def __str__(self) -> str:
        return f"I({self.level},{self.slot}) = ({self.lo}, {self.hi})"


def component(level: int, slot: int) -> CantorComponent:
    """The slot-th removed interval of the given level, counted left to right."""
    if level < 1 or not 1 <= slot <= 2 ** (level - 1):
        raise ValueError(f"no component at level {level}, slot {slot}")
    base = _base_of_slot(level, slot)
    third = Fraction(1, 3**level)
    return CantorComponent(level, slot, base + third, base + 2 * third)


def _base_of_slot(level: int, slot: int) -> Fraction:
    # left endpoint of the parent closed interval: ternary digits in {0, 2}
    # given by the binary expansion of slot-1, most significant first
    base = Fraction(0)
    bits = level - 1
    rem = slot - 1
    for i in range(1, bits + 1):
        if rem >> (bits - i) & 1:
            base += Fraction(2, 3**i)
    return base


def theta(m: int) -> CantorComponent:
    """Component number m in the level-major enumeration."""
    if m < 1:
        raise ValueError("component numbers start at 1")
    level = m.bit_length()
    slot = m - 2 ** (level - 1) + 1
    return component(level, slot)


def theta_inv(c: CantorComponent) -> int:
    return 2 ** (c.level - 1) + c.slot - 1


def compare(m1: int, m2: int) -> int:
    """-1, 0, or 1 as component m1 lies left of, equals, or lies right of m2."""
    if m1 == m2:
        return 0
    return -1 if theta(m1).lo < theta(m2).lo else 1


def position_key(m: int) -> Fraction:
    """Sort key ordering component numbers by position in the unit interval."""
    return theta(m).lo


def least_component_in(
    lo: Optional[Fraction], hi: Optional[Fraction], max_level: int = 100000
) -> CantorComponent:
    """Smallest-numbered component contained in [lo, hi] (None = 0 resp. 1).

    Levels are searched in order, and within a level the leftmost admissible
    slot is found arithmetically (smallest base >= lo - 3^-n with ternary
    digits in {0, 2}), so deeply nested placements do not require scanning.
    """
    x = lo if lo is not None else Fraction(0)
    y = hi if hi is not None else Fraction(1)
    width = y - x
    if width <= 0:
        raise ValueError(f"empty interval [{x}, {y}]")
    start = 1
    while Fraction(1, 3**start) > width and start <= max_level:
        start += 1  # a level-n component needs room of width 3^-n
    for level in range(start, max_level + 1):
        third = Fraction(1, 3**level)
        base = _min_base_geq(x - third, level - 1)
        if base is not None and base + 2 * third <= y:
            slot = _slot_of_base(base, level)
            return component(level, slot)
    raise RuntimeError(f"no component found in [{x}, {y}] up to level {max_level}")


def _min_base_geq(target: Fraction, digits: int) -> Optional[Fraction]:
    # minimal sum of d_i / 3^i, d_i in {0, 2}, i = 1..digits, that is >= target
    if target <= 0:
        return Fraction(0)
    base = Fraction(0)
    rem = target
    for i in range(1, digits + 1):
        tail_max = Fraction(1, 3**i) - Fraction(1, 3**digits)  # all-2 suffix
        if rem <= tail_max:
            continue  # digit 0 suffices
        base += Fraction(2, 3**i)
        rem -= Fraction(2, 3**i)
    return base if rem <= 0 else None


def _slot_of_base(base: Fraction, level: int) -> int:
    bits = level - 1
    rem = base
    slot = 0
    for i in range(1, bits + 1):
        slot <<= 1
        if rem >= Fraction(2, 3**i):
            slot |= 1
            rem -= Fraction(2, 3**i)
    return slot + 1


# ---------------------------------------------------------------------------
# Countable order specs and their canonical embeddings.
# ---------------------------------------------------------------------------


class OrderSpec:
    """A countable linear order on index set 1..size (or all of N if infinite).

    ``key(i)`` maps an index to a totally ordered value; indices are compared
    through their keys.
    """

    size: Optional[int] = None
    name = "order"

    def key(self, i: int):
        raise NotImplementedError

    def cmp(self, i: int, j: int) -> int:
        a, b = self.key(i), self.key(j)
        return -1 if a < b else (0 if a == b else 1)

    def check_index(self, i: int) -> None:
        if i < 1 or (self.size is not None and i > self.size):
            raise ValueError(f"index {i} outside source of {self}")

    def __str__(self) -> str:
        return self.name


class FiniteChain(OrderSpec):
    def __init__(self, size: int):
        if size < 0:
            raise ValueError("size must be nonnegative")
        self.size = size
        self.name = f"chain({size})"

    def key(self, i: int):
        return i


class ExplicitFinite(OrderSpec):
    """Finite order given by a list of comparable values (e.g. ints, Fractions)."""

    def __init__(self, values: Sequence):
        self.values = list(values)
        self.size = len(self.values)
        self.name = f"explicit({self.size})"
        for a in range(self.size):
            for b in range(self.size):
                if (self.values[a] < self.values[b]) == (self.values[b] < self.values[a]) and a != b:
                    raise ValueError("comparator is not a total order on the values")

    def key(self, i: int):
        return self.values[i - 1]


class Omega(OrderSpec):
    name = "omega"

    def key(self, i: int):
        return i


class OmegaPlusOmega(OrderSpec):
    """Two increasing copies, the first entirely below the second.

    Odd indices enumerate the first copy, even indices the second.
    """

    name = "omega+omega"

    def key(self, i: int):
        return (0, (i + 1) // 2) if i % 2 == 1 else (1, i // 2)


class IntegersZeta(OrderSpec):
    """Order type of the integers; indices zigzag 0, 1, -1, 2, -2, ..."""

    name = "zeta"

    def key(self, i: int):
        if i == 1:
            return 0
        return i // 2 if i % 2 == 0 else -(i // 2)


class Rationals(OrderSpec):
    """Order type of the rationals; indices enumerate 0, +-1, +-1/2, ...

    Positive rationals come from the Stern diatomic sequence, each exactly
    once; the enumeration interleaves 0, positives, and negatives.
    """

    name = "rationals"

    def key(self, i: int) -> Fraction:
        if i == 1:
            return Fraction(0)
        q = _stern_rational(i // 2)
        return q if i % 2 == 0 else -q


def _fusc(n: int) -> int:
    a, b = 1, 0
    while n:
        if n & 1:
            b += a
        else:
            a += b
        n >>= 1
    return b


def _stern_rational(n: int) -> Fraction:
    return Fraction(_fusc(n), _fusc(n + 1))


_SENTINEL_HI = Fraction(1, 3)  # images stay strictly left of component 1


class Embedding:
    """Canonical order embedding of a source order into the components.

    Elements are placed in index order; element i goes to the least-numbered
    component fitting strictly between the images of its already-placed
    neighbours, with the fixed ceiling component(1, 1) = (1/3, 2/3) as a
    global upper bound.  The ceiling keeps images of upper-unbounded sources
    bounded above by a component.  Deterministic and memoized; placing index
    n touches only the n-1 earlier placements.

    The memo is internal mutable state: use an instance from one thread, or
    guard it externally.
    """

    def __init__(self, spec: OrderSpec):
        self.spec = spec
        self._images: list[int] = []  # component number of source index i at i-1
        self._components: list[CantorComponent] = []
        self._membership: dict[int, Optional[int]] = {}

    def ensure(self, count: int) -> None:
        if self.spec.size is not None:
            count = min(count, self.spec.size)
        while len(self._images) < count:
            self._place_next()

    def _place_next(self) -> None:
        i = len(self._images) + 1
        lower: Optional[CantorComponent] = None
        upper: Optional[CantorComponent] = None
        for j in range(1, i):
            c = self._components[j - 1]
            side = self.spec.cmp(j, i)
            if side < 0 and (lower is None or c.lo > lower.lo):
                lower = c
            elif side > 0 and (upper is None or c.lo < upper.lo):
                upper = c
            elif side == 0:
                raise ValueError(f"source indices {j} and {i} compare equal")
        x = lower.hi if lower is not None else None
        y = upper.lo if upper is not None else _SENTINEL_HI
        placed = least_component_in(x, y)
        self._images.append(theta_inv(placed))
        self._components.append(placed)

    def __call__(self, i: int) -> CantorComponent:
        self.spec.check_index(i)
        self.ensure(i)
        return self._components[i - 1]

    def image_index(self, i: int) -> int:
        """Component number of the image of source index i."""
        self.spec.check_index(i)
        self.ensure(i)
        return self._images[i - 1]

    def index_of_component(self, m: int, max_steps: int = 200000) -> Optional[int]:
        """Source index mapped to component m, or None if m is never hit.

        Decided by simulating placements with a per-source stopping rule:
        finite sources are exhausted; for omega, zeta, and omega+omega the
        image frontiers are monotone, so a candidate is excluded once the
        relevant frontier passes it; the rationals source provably hits every
        component left of the ceiling.
        """
        if m in self._membership:
            return self._membership[m]
        result = self._decide_membership(m, max_steps)
        self._membership[m] = result
        return result

    def _decide_membership(self, m: int, max_steps: int) -> Optional[int]:
        target = theta(m)
        if target.hi > _SENTINEL_HI:
            return None  # images live strictly left of the ceiling
        for i, img in enumerate(self._images, start=1):
            if img == m:
                return i
        spec = self.spec
        if spec.size is not None:
            self.ensure(spec.size)
            for i, img in enumerate(self._images, start=1):
                if img == m:
                    return i
            return None
        for _ in range(max_steps):
            if self._excluded(target):
                return None
            self._place_next()
            if self._images[-1] == m:
                return len(self._images)
        raise RuntimeError(f"membership of component {m} undecided after {max_steps} steps")

    def _excluded(self, target: CantorComponent) -> bool:
        images = self._components
        if not images:
            return False
        spec = self.spec
        if isinstance(spec, Omega):
            return max(images).lo > target.lo
        if isinstance(spec, IntegersZeta):
            return min(images).lo < target.lo < max(images).lo
        if isinstance(spec, OmegaPlusOmega):
            first = [c for i, c in enumerate(images, start=1) if i % 2 == 1]
            second = [c for i, c in enumerate(images, start=1) if i % 2 == 0]
            if first and target.lo < max(first).lo:
                return True  # below the first copy's ascending frontier
            if len(second) >= 2 and second[0].lo < target.lo < max(second).lo:
                return True  # strictly inside the second copy's span
            return False
        if isinstance(spec, Rationals):
            return False  # every component left of the ceiling is eventually hit
        raise RuntimeError(f"no membership rule for source {spec}")


def back_and_forth_embed(spec: OrderSpec) -> Embedding:
    """Canonical order embedding of the given countable order."""
    return Embedding(spec)


PsiLike = Union[dict, Sequence, Callable[[int], int]]


def _as_callable(psi: PsiLike) -> Callable[[int], int]:
    if callable(psi):
        return psi
    if isinstance(psi, dict):
        return lambda i: psi[i]
    return lambda i: psi[i - 1]


class ExtendedBijection:
    """Bijection of all components extending nu o psi o mu^-1.

    Component numbers in the image of mu map through psi; the rest are
    matched to the complement of nu's image in increasing numeric order.
    phi is the induced bijection of component numbers.
    """

    def __init__(self, mu: Embedding, nu: Embedding, psi: Callable[[int], int]):
        self.mu = mu
        self.nu = nu
        self.psi = psi
        self._phi_cache: dict[int, int] = {}

    def phi(self, n: int) -> int:
        if n in self._phi_cache:
            return self._phi_cache[n]
        i = self.mu.index_of_component(n)
        if i is not None:
            result = self.nu.image_index(self.psi(i))
        else:
            rank = sum(
                1 for j in range(1, n + 1) if self.mu.index_of_component(j) is None
            )
            result = self._nth_complement_of_nu(rank)
        self._phi_cache[n] = result
        return result

    def component_map(self, c: CantorComponent) -> CantorComponent:
        return theta(self.phi(theta_inv(c)))

    def _nth_complement_of_nu(self, rank: int) -> int:
        count = 0
        j = 0
        while count < rank:
            j += 1
            if self.nu.index_of_component(j) is None:
                count += 1
        return j


def extend_bijection(
    mu: Embedding, nu: Embedding, psi: PsiLike
) -> tuple[ExtendedBijection, Callable[[int], int]]:
    """Extend a bijection of embedded sources to all components.

    Returns the component-level bijection and the induced map of component
    numbers.  For finite sources, psi is checked to be a bijection of the
    index sets; the commuting square Psi o mu = nu o psi holds by
    construction on every queried index.
    """
    psi_fn = _as_callable(psi)
    if mu.spec.size is not None or nu.spec.size is not None:
        if mu.spec.size != nu.spec.size:
            raise ValueError("psi cannot be a bijection: source sizes differ")
        size = mu.spec.size or 0
        image = sorted(psi_fn(i) for i in range(1, size + 1))
        if image != list(range(1, size + 1)):
            raise ValueError("psi is not a bijection of the source index sets")
    ext = ExtendedBijection(mu, nu, psi_fn)
    return ext, ext.phi
