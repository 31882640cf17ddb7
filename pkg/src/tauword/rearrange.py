"""Finitely described bijections of the positive integers.

Three constructors (disjoint finite cycles, periodic block permutations,
and compositions) plus the two special rules used in rearrangement experiments:
the 4-periodic swap that turns a flattened commutator sequence into
consecutive inverse pairs, and the sparse embedding k = 2^j - 1 that places a
given bijection on a thin set and fixes everything else.

Every spec evaluates anywhere, has a computable inverse, and (except sparse
embeddings) is eventually a residue-offset map: beyond a bound, phi(k) =
k + offset[(k-1) mod P].  That structure is what lets an infinite product
expression stay finitely described after rearrangement.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm


class MalformedBijectionError(ValueError):
    """Overlapping cycles, non-permutation residues, and similar."""


@dataclass(frozen=True)
class EventualStructure:
    """phi(k) = k + offsets[(k-1) % period] for all k > bound."""

    bound: int
    period: int
    offsets: tuple[int, ...]

    def offset_at(self, k: int) -> int:
        return self.offsets[(k - 1) % self.period]


class BijectionSpec:
    def evaluate(self, k: int) -> int:
        raise NotImplementedError

    def inverse(self) -> "BijectionSpec":
        raise NotImplementedError

    def eventual_structure(self) -> EventualStructure:
        raise NotImplementedError

    def preserving_bound(self, at_least: int) -> int:
        """A bound B >= at_least with {1..B} mapped onto itself.

        Beyond its bound the spec permutes each period-block, so any aligned
        multiple of the period works.
        """
        st = self.eventual_structure()
        base = max(at_least, st.bound, 1)
        return -(-base // st.period) * st.period

    def to_json(self) -> dict:
        raise NotImplementedError

    def __call__(self, k: int) -> int:
        return self.evaluate(k)


@dataclass(frozen=True)
class FiniteSupport(BijectionSpec):
    """Product of disjoint cycles of positive integers, identity elsewhere."""

    cycles: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for cycle in self.cycles:
            for x in cycle:
                if x < 1:
                    raise MalformedBijectionError(f"cycle entry {x} must be positive")
                if x in seen:
                    raise MalformedBijectionError(f"cycles overlap at {x}")
                seen.add(x)

    def _table(self) -> dict[int, int]:
        table = {}
        for cycle in self.cycles:
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                table[a] = b
        return table

    def evaluate(self, k: int) -> int:
        if k < 1:
            raise ValueError("domain is the positive integers")
        return self._table().get(k, k)

    def inverse(self) -> "FiniteSupport":
        return FiniteSupport(tuple(tuple(reversed(c)) for c in self.cycles))

    def eventual_structure(self) -> EventualStructure:
        bound = max((x for c in self.cycles for x in c), default=0)
        return EventualStructure(bound, 1, (0,))

    def to_json(self) -> dict:
        return {"kind": "finite", "cycles": [list(c) for c in self.cycles]}


@dataclass(frozen=True)
class BlockPermute(BijectionSpec):
    """Permutes each block {jP+1, ..., (j+1)P} by a fixed residue permutation.

    k with residue c = (k-1) mod P maps to the position with residue perm[c]
    in the same block.
    """

    period: int
    perm: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.period < 1:
            raise MalformedBijectionError("period must be positive")
        if sorted(self.perm) != list(range(self.period)):
            raise MalformedBijectionError(
                f"perm {self.perm} is not a permutation of 0..{self.period - 1}"
            )

    def evaluate(self, k: int) -> int:
        if k < 1:
            raise ValueError("domain is the positive integers")
        block, c = divmod(k - 1, self.period)
        return block * self.period + self.perm[c] + 1

    def inverse(self) -> "BlockPermute":
        inv = [0] * self.period
        for c, target in enumerate(self.perm):
            inv[target] = c
        return BlockPermute(self.period, tuple(inv))

    def eventual_structure(self) -> EventualStructure:
        offsets = tuple(self.perm[c] - c for c in range(self.period))
        return EventualStructure(0, self.period, offsets)

    def to_json(self) -> dict:
        return {"kind": "block", "period": self.period, "perm": list(self.perm)}


@dataclass(frozen=True)
class Compose(BijectionSpec):
    """Composition, evaluated right to left: Compose([f, g])(k) = f(g(k))."""

    parts: tuple[BijectionSpec, ...]

    def evaluate(self, k: int) -> int:
        for part in reversed(self.parts):
            k = part.evaluate(k)
        return k

    def inverse(self) -> "Compose":
        return Compose(tuple(p.inverse() for p in reversed(self.parts)))

    def eventual_structure(self) -> EventualStructure:
        # in application order, each stage must see inputs beyond its own
        # bound; inputs shrink by at most the minimum offset of earlier stages
        applied = [p.eventual_structure() for p in reversed(self.parts)]
        period = 1
        for st in applied:
            period = lcm(period, st.period)
        bound = 0
        shift = 0
        for st in applied:
            bound = max(bound, st.bound - shift)
            shift += min(st.offsets)
        bound = -(-bound // period) * period  # align so offsets index by (k-1) % period
        offsets = tuple(
            self.evaluate(bound + 1 + t) - (bound + 1 + t) for t in range(period)
        )
        structure = EventualStructure(bound, period, offsets)
        for k in range(bound + 1, bound + 3 * period + 1):
            assert self.evaluate(k) == k + structure.offset_at(k)
        return structure

    def to_json(self) -> dict:
        return {"kind": "compose", "of": [p.to_json() for p in self.parts]}


def identity() -> FiniteSupport:
    return FiniteSupport(())


def transposition(a: int, b: int) -> FiniteSupport:
    return FiniteSupport(((a, b),))


def eh_shuffle() -> BlockPermute:
    """The 4-periodic swap of each block's middle two positions.

    Applied to the flattened factor sequence a, b, a^-1, b^-1, a', b', ... of
    a product of commutators, it produces consecutive inverse pairs
    a, a^-1, b, b^-1, ..., so every projection collapses to the identity.
    """
    return BlockPermute(4, (0, 2, 1, 3))


class SparseEmbed:
    """Bijection acting as ``2^k - 1 -> 2^{inner(k)} - 1`` and fixing the rest.

    The complement of {2^k - 1} is matched to itself in increasing order,
    i.e. pointwise fixed: the canonical completion of the partial rule.
    """

    def __init__(self, inner: BijectionSpec):
        self.inner = inner

    def evaluate(self, k: int) -> int:
        if k < 1:
            raise ValueError("domain is the positive integers")
        j = (k + 1).bit_length() - 1
        if k == 2**j - 1:
            return 2 ** self.inner.evaluate(j) - 1
        return k

    def inverse(self) -> "SparseEmbed":
        return SparseEmbed(self.inner.inverse())

    def preserving_bound(self, at_least: int) -> int:
        # 2^K - 1 works whenever the inner bijection maps {1..K} onto itself
        k = 1
        while 2**k - 1 < at_least:
            k += 1
        k = self.inner.preserving_bound(k)
        return 2**k - 1

    def __call__(self, k: int) -> int:
        return self.evaluate(k)


def sparse_embed(inner: BijectionSpec) -> SparseEmbed:
    return SparseEmbed(inner)


def is_bijection(phi, bound: int) -> bool:
    """Bounded verification that phi permutes {1..bound}.

    Exact when the image of {1..bound} is {1..bound} (block-aligned bounds,
    finite support inside the bound).  Otherwise tolerates boundary effects:
    injectivity on {1..bound} plus coverage of {1..bound - d} where d is the
    largest displacement observed.
    """
    values = [phi.evaluate(k) if hasattr(phi, "evaluate") else phi(k) for k in range(1, bound + 1)]
    if len(set(values)) != bound or min(values) < 1:
        return False
    if sorted(values) == list(range(1, bound + 1)):
        return True
    d = max(abs(v - k) for k, v in enumerate(values, start=1))
    covered = set(values)
    return all(m in covered for m in range(1, bound - d + 1))


def bijection_from_json(obj: dict) -> BijectionSpec:
    kind = obj.get("kind")
    if kind == "finite":
        return FiniteSupport(tuple(tuple(c) for c in obj["cycles"]))
    if kind == "block":
        return BlockPermute(obj["period"], tuple(obj["perm"]))
    if kind == "compose":
        return Compose(tuple(bijection_from_json(p) for p in obj["of"]))
    raise MalformedBijectionError(f"unknown bijection kind {kind!r}")
