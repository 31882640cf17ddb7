"""Finitely described loop expressions over the circle alphabet l1, l2, ...

An expression is a letter power, a finite concatenation, an inverse, or an
infinite product of a null family of factors.  Infinite products come in two
flavours that share the same factor data: an omega product concatenates its
factors in index order 1, 2, 3, ..., while a tau product places factor m on
the m-th removed middle-third interval and reads the factors in the left to
right order of those intervals (a dense order).

Factor data is a finite prefix of explicit factors followed by a tail rule:
either all remaining factors are the identity, or they are produced by
template bodies cycled round-robin, whose letter leaves are affine in the
instance number with positive slope.  That slope keeps the family null: any
fixed letter occurs in only finitely many factors, and the set of factors
touching letters <= n is computable, which is what makes projections into
the free groups exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Iterable, Optional, Union

from . import orders
from .free_words import (
    IDENTITY,
    ReducedWord,
    concat_all,
    delete_letter,
    commutator_decompose,
    invert,
    reduce,
)
from .specker import SpeckerVector, vector


class ValidationError(ValueError):
    def __init__(self, report: list[str]):
        super().__init__("; ".join(report))
        self.report = report


class ClosureError(ValueError):
    """The expression class is not closed under the requested rearrangement."""


class HypothesisViolationError(ValueError):
    """An operation's kernel hypothesis (zero winding vector) fails."""


class WordExpr:
    """Base class for expression nodes."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Letter(WordExpr):
    index: int
    exp: int = 1


@dataclass(frozen=True, slots=True)
class SymLetter(WordExpr):
    """Template leaf: instance j is the letter base + coef*j."""

    base: int
    coef: int
    exp: int = 1


@dataclass(frozen=True, slots=True)
class Concat(WordExpr):
    factors: tuple[WordExpr, ...] = ()


@dataclass(frozen=True, slots=True)
class Inverse(WordExpr):
    of: WordExpr


@dataclass(frozen=True, slots=True)
class Trivial:
    pass


@dataclass(frozen=True, slots=True)
class Template:
    """Tail factors bodies[t % len(bodies)] instantiated at t // len(bodies)."""

    bodies: tuple[WordExpr, ...]


TailRule = Union[Trivial, Template]


@dataclass(frozen=True, slots=True)
class SeqSpec:
    prefix: tuple[WordExpr, ...]
    tail: TailRule


@dataclass(frozen=True, slots=True)
class OmegaProd(WordExpr):
    spec: SeqSpec


@dataclass(frozen=True, slots=True)
class TauProd(WordExpr):
    spec: SeqSpec


def identity_expr() -> Concat:
    return Concat(())


def word_to_expr(w: ReducedWord) -> WordExpr:
    letters = tuple(Letter(l, e) for l, e in w.syllables)
    return letters[0] if len(letters) == 1 else Concat(letters)


def commutator_expr(a: WordExpr, b: WordExpr) -> Concat:
    return Concat((a, b, Inverse(a), Inverse(b)))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate(e: WordExpr) -> list[str]:
    """Return a list of invariant violations (empty means valid)."""
    report: list[str] = []
    _validate(e, "expr", report, in_body=False, in_finite=False)
    return report


def ensure_valid(e: WordExpr) -> None:
    report = validate(e)
    if report:
        raise ValidationError(report)


def _validate(e: WordExpr, path: str, report: list[str], in_body: bool, in_finite: bool) -> None:
    if isinstance(e, Letter):
        if in_body:
            report.append(f"{path}: constant letter in tail")
        if e.index < 1:
            report.append(f"{path}: letter index {e.index} must be positive")
        if e.exp == 0:
            report.append(f"{path}: letter exponent must be nonzero")
    elif isinstance(e, SymLetter):
        if not in_body:
            report.append(f"{path}: symbolic letter outside a template body")
        if e.coef < 1:
            report.append(f"{path}: constant letter in tail (coef {e.coef} < 1)")
        if e.base < 1:
            report.append(f"{path}: symbolic base {e.base} must be positive")
        if e.exp == 0:
            report.append(f"{path}: letter exponent must be nonzero")
    elif isinstance(e, Concat):
        for i, f in enumerate(e.factors):
            _validate(f, f"{path}.factors[{i}]", report, in_body, in_finite)
    elif isinstance(e, Inverse):
        _validate(e.of, f"{path}.of", report, in_body, in_finite)
    elif isinstance(e, (OmegaProd, TauProd)):
        if in_body or in_finite:
            report.append(f"{path}: nested infinite product")
            return
        spec = e.spec
        for i, f in enumerate(spec.prefix):
            _validate(f, f"{path}.prefix[{i}]", report, in_body=False, in_finite=True)
        if isinstance(spec.tail, Template):
            if not spec.tail.bodies:
                report.append(f"{path}.tail: template with no bodies")
            for q, body in enumerate(spec.tail.bodies):
                _validate(body, f"{path}.tail.bodies[{q}]", report, in_body=True, in_finite=True)
        elif not isinstance(spec.tail, Trivial):
            report.append(f"{path}.tail: unknown tail rule {type(spec.tail).__name__}")
    else:
        report.append(f"{path}: unknown node {type(e).__name__}")


# ---------------------------------------------------------------------------
# Built-in expressions
# ---------------------------------------------------------------------------


def ell_infinity() -> OmegaProd:
    """The omega-ordered concatenation whose m-th factor is the letter lm."""
    return OmegaProd(SeqSpec((), Template((SymLetter(1, 1, 1),))))


def ell_tau() -> TauProd:
    """The same factors read in the dense middle-third-interval order."""
    return TauProd(SeqSpec((), Template((SymLetter(1, 1, 1),))))


def commutator_product() -> OmegaProd:
    """Product whose k-th factor is the commutator of l(2k-1) and l(2k)."""
    return OmegaProd(
        SeqSpec((), Template((commutator_expr(SymLetter(1, 2, 1), SymLetter(2, 2, 1)),)))
    )


def flattened_commutator_product() -> OmegaProd:
    """The same product with each commutator spread over four factors.

    Factor sequence: a1, b1, a1^-1, b1^-1, a2, b2, ... where ak = l(2k-1),
    bk = l(2k); this is the sequence rearrangement bijections act on.
    """
    return OmegaProd(
        SeqSpec(
            (),
            Template(
                (
                    SymLetter(1, 2, 1),
                    SymLetter(2, 2, 1),
                    SymLetter(1, 2, -1),
                    SymLetter(2, 2, -1),
                )
            ),
        )
    )


BUILTINS = {
    "ell_infinity": ell_infinity,
    "ell_tau": ell_tau,
    "commutator_product": commutator_product,
    "flattened_commutator_product": flattened_commutator_product,
}


# ---------------------------------------------------------------------------
# Factor access and projections
# ---------------------------------------------------------------------------


def instantiate(body: WordExpr, j: int) -> WordExpr:
    """Replace symbolic leaves with concrete letters at instance j."""
    if isinstance(body, SymLetter):
        return Letter(body.base + body.coef * j, body.exp)
    if isinstance(body, Letter):
        return body
    if isinstance(body, Concat):
        return Concat(tuple(instantiate(f, j) for f in body.factors))
    if isinstance(body, Inverse):
        return Inverse(instantiate(body.of, j))
    raise TypeError(f"cannot instantiate {type(body).__name__}")


def factor_at(spec: SeqSpec, m: int) -> WordExpr:
    """Factor m (1-based) of an infinite product's factor sequence."""
    if m < 1:
        raise ValueError("factors are indexed from 1")
    r = len(spec.prefix)
    if m <= r:
        return spec.prefix[m - 1]
    if isinstance(spec.tail, Trivial):
        return identity_expr()
    bodies = spec.tail.bodies
    t = m - r - 1
    return instantiate(bodies[t % len(bodies)], t // len(bodies))


def finite_min_letter(e: WordExpr) -> Optional[int]:
    """Smallest letter index in a finite (fully instantiated) expression."""
    if isinstance(e, Letter):
        return e.index
    if isinstance(e, Concat):
        values = [v for f in e.factors if (v := finite_min_letter(f)) is not None]
        return min(values) if values else None
    if isinstance(e, Inverse):
        return finite_min_letter(e.of)
    raise TypeError(f"not a finite expression: {type(e).__name__}")


def contributing_factors(spec: SeqSpec, n: int) -> dict[int, WordExpr]:
    """All factor indices whose factor uses some letter <= n."""
    out: dict[int, WordExpr] = {}
    r = len(spec.prefix)
    for i, f in enumerate(spec.prefix, start=1):
        m = finite_min_letter(f)
        if m is not None and m <= n:
            out[i] = f
    if isinstance(spec.tail, Template):
        bodies = spec.tail.bodies
        slots: set[int] = set()
        for q, body in enumerate(bodies):
            for base, coef in _body_leaf_shapes(body):
                top = (n - base) // coef
                for j in range(top + 1):
                    slots.add(j * len(bodies) + q)
        for t in slots:
            out[r + 1 + t] = instantiate(bodies[t % len(bodies)], t // len(bodies))
    return out


def _body_leaf_shapes(body: WordExpr) -> Iterable[tuple[int, int]]:
    if isinstance(body, SymLetter):
        yield body.base, body.coef
    elif isinstance(body, Concat):
        for f in body.factors:
            yield from _body_leaf_shapes(f)
    elif isinstance(body, Inverse):
        yield from _body_leaf_shapes(body.of)


def project(e: WordExpr, n: int, *, _validated: bool = False) -> ReducedWord:
    """The image of the expression in the free group on l1..ln.

    Letters above n are deleted; omega factors contribute in index order, tau
    factors in the left-to-right order of their middle-third intervals.
    Compatible with the deletion tower: deleting above n from the level-(n+1)
    projection gives the level-n projection.
    """
    if n < 1:
        raise ValueError("projection level must be positive")
    if not _validated:
        ensure_valid(e)
    return _project(e, n)


def _project(e: WordExpr, n: int) -> ReducedWord:
    if isinstance(e, Letter):
        return reduce([(e.index, e.exp)]) if e.index <= n else IDENTITY
    if isinstance(e, Concat):
        return concat_all([_project(f, n) for f in e.factors])
    if isinstance(e, Inverse):
        return invert(_project(e.of, n))
    if isinstance(e, OmegaProd):
        factors = contributing_factors(e.spec, n)
        return concat_all([_project(factors[m], n) for m in sorted(factors)])
    if isinstance(e, TauProd):
        factors = contributing_factors(e.spec, n)
        order = sorted(factors, key=orders.position_key)
        return concat_all([_project(factors[m], n) for m in order])
    raise TypeError(f"cannot project {type(e).__name__}")


def eta(e: WordExpr, *, _validated: bool = False) -> SpeckerVector:
    """Total exponent sum of every letter, as an eventually periodic vector.

    Coordinate n agrees with the exponent sum of letter n in any projection
    at level m >= n; the result is exact over all (infinitely many) factors.
    """
    if not _validated:
        ensure_valid(e)
    consts: dict[int, int] = {}
    aps: list[tuple[int, int, int]] = []
    _collect_eta(e, 1, consts, aps)
    start = max(
        [i for i in consts] + [base for base, _, _ in aps], default=0
    )
    period = 1
    for _, coef, _ in aps:
        period = lcm(period, coef)

    def coord(n: int) -> int:
        total = consts.get(n, 0)
        for base, coef, exp in aps:
            if n >= base and (n - base) % coef == 0:
                total += exp
        return total

    prefix = [coord(n) for n in range(1, start + 1)]
    cycle = [coord(n) for n in range(start + 1, start + period + 1)]
    return vector(prefix, cycle)


def _collect_eta(e: WordExpr, sign: int, consts: dict[int, int], aps: list) -> None:
    if isinstance(e, Letter):
        consts[e.index] = consts.get(e.index, 0) + sign * e.exp
        if consts[e.index] == 0:
            del consts[e.index]
    elif isinstance(e, SymLetter):
        aps.append((e.base, e.coef, sign * e.exp))
    elif isinstance(e, Concat):
        for f in e.factors:
            _collect_eta(f, sign, consts, aps)
    elif isinstance(e, Inverse):
        _collect_eta(e.of, -sign, consts, aps)
    elif isinstance(e, (OmegaProd, TauProd)):
        for f in e.spec.prefix:
            _collect_eta(f, sign, consts, aps)
        if isinstance(e.spec.tail, Template):
            for body in e.spec.tail.bodies:
                _collect_eta(body, sign, consts, aps)
    else:
        raise TypeError(f"cannot collect {type(e).__name__}")


@dataclass(frozen=True, slots=True)
class EqualityResult:
    equal: bool
    witness_level: Optional[int] = None
    left: Optional[ReducedWord] = None
    right: Optional[ReducedWord] = None

    def __bool__(self) -> bool:
        return self.equal


def equal_up_to(a: WordExpr, b: WordExpr, n_max: int) -> EqualityResult:
    """Compare projections at every level up to n_max.

    A failure is a conclusive inequality (with the smallest failing level and
    both words); agreement at all levels is evidence, not proof.
    """
    ensure_valid(a)
    ensure_valid(b)
    for n in range(1, n_max + 1):
        wa = _project(a, n)
        wb = _project(b, n)
        if wa != wb:
            return EqualityResult(False, n, wa, wb)
    return EqualityResult(True)


# ---------------------------------------------------------------------------
# Rearrangement
# ---------------------------------------------------------------------------


def apply_bijection(p: WordExpr, phi) -> WordExpr:
    """Rearranged product: factor k of the result is factor phi(k) of p.

    Products with trivial tails accept any bijection with a computable
    inverse (only finitely many factors matter).  Template tails require phi
    to be eventually a residue-offset map (finite support, block permutation,
    or composition); the rearranged tail is represented by refining the
    bodies into lcm(period, body count) interleaved bodies.
    """
    if not isinstance(p, (OmegaProd, TauProd)):
        raise TypeError("rearrangement applies to infinite products")
    ensure_valid(p)
    spec = p.spec
    r = len(spec.prefix)
    make = OmegaProd if isinstance(p, OmegaProd) else TauProd

    if isinstance(spec.tail, Trivial):
        inverse = phi.inverse()
        cut = max((inverse.evaluate(m) for m in range(1, r + 1)), default=0)
        from .rearrange import is_bijection

        if not is_bijection(phi, phi.preserving_bound(max(cut, r, 8))):
            raise ClosureError("bijection check failed on the essential range")
        new_prefix = tuple(factor_at(spec, phi.evaluate(k)) for k in range(1, cut + 1))
        return make(SeqSpec(new_prefix, Trivial()))

    if not hasattr(phi, "eventual_structure"):
        raise ClosureError(
            "template tails require an eventually residue-offset bijection"
        )
    st = phi.eventual_structure()
    bodies = spec.tail.bodies
    q_count = len(bodies)
    big = lcm(st.period, q_count)
    low = max(st.bound, r + max(0, -min(st.offsets)))
    cut = (low // big + 1) * big
    from .rearrange import is_bijection

    if not is_bijection(phi, cut):
        raise ClosureError("bijection check failed below the tail cut")
    new_prefix = tuple(factor_at(spec, phi.evaluate(k)) for k in range(1, cut + 1))
    new_bodies = []
    for t0 in range(big):
        s0 = t0 + cut + st.offsets[t0 % st.period] - r
        assert s0 >= 0
        new_bodies.append(_reindex(bodies[s0 % q_count], s0 // q_count, big // q_count))
    return make(SeqSpec(new_prefix, Template(tuple(new_bodies))))


def _reindex(body: WordExpr, shift: int, scale: int) -> WordExpr:
    """Body whose instance u equals the original's instance shift + scale*u."""
    if isinstance(body, SymLetter):
        return SymLetter(body.base + body.coef * shift, body.coef * scale, body.exp)
    if isinstance(body, Concat):
        return Concat(tuple(_reindex(f, shift, scale) for f in body.factors))
    if isinstance(body, Inverse):
        return Inverse(_reindex(body.of, shift, scale))
    raise TypeError(f"cannot reindex {type(body).__name__}")


# ---------------------------------------------------------------------------
# Commutator factorization
# ---------------------------------------------------------------------------


def commutator_factorization(e: WordExpr, depth: int = 12) -> SeqSpec:
    """Factor an expression with zero winding vector into commutator stages.

    The returned factor sequence has stage n a finite product of commutators
    of words in letters >= n, and its projections agree with the input's at
    every level up to the requested depth.  Stage n is produced by peeling
    the letter-n syllables: with beta_0 the depth-level projection,
    beta_n deletes letter n from beta_{n-1}, and the quotient
    beta_{n-1} beta_n^-1 has zero exponent sums, so it decomposes into
    explicit commutators.  An input already in factored form (a product of
    commutator blocks whose stage-n factor stays in letters >= n) is
    returned unchanged.
    """
    ensure_valid(e)
    if not eta(e, _validated=True).is_zero:
        raise HypothesisViolationError("winding vector is nonzero")
    if isinstance(e, OmegaProd) and _already_factored(e.spec):
        return e.spec
    beta = project(e, depth, _validated=True)
    stages: list[WordExpr] = []
    for n in range(1, depth + 1):
        beta_next = delete_letter(beta, n)
        gamma = concat_all([beta, invert(beta_next)])
        pairs = commutator_decompose(gamma)
        stages.append(
            Concat(tuple(commutator_expr(word_to_expr(a), word_to_expr(b)) for a, b in pairs))
        )
        beta = beta_next
    assert beta.is_identity
    return SeqSpec(tuple(stages), Trivial())


def _already_factored(spec: SeqSpec) -> bool:
    for i, f in enumerate(spec.prefix, start=1):
        m = finite_min_letter(f)
        if not _is_commutator_blocks(f) or (m is not None and m < i):
            return False
    if isinstance(spec.tail, Trivial):
        return True
    r = len(spec.prefix)
    q_count = len(spec.tail.bodies)
    for q, body in enumerate(spec.tail.bodies):
        if not _is_commutator_blocks(body):
            return False
        for base, coef in _body_leaf_shapes(body):
            if base < r + 1 + q or coef < q_count:
                return False
    return True


def _is_commutator_blocks(e: WordExpr) -> bool:
    """A concatenation of commutator blocks x y x^-1 y^-1, flat or nested."""
    if not isinstance(e, Concat):
        return False
    fs = e.factors
    i = 0
    while i < len(fs):
        if isinstance(fs[i], Concat) and _is_inverse_quad(fs[i].factors):
            i += 1
        elif _is_inverse_quad(fs[i : i + 4]):
            i += 4
        else:
            return False
    return True


def _is_inverse_quad(fs) -> bool:
    if len(fs) != 4:
        return False
    a, b, ia, ib = fs
    return (
        isinstance(ia, Inverse) and ia.of == a and isinstance(ib, Inverse) and ib.of == b
    )


# ---------------------------------------------------------------------------
# Canonical JSON form
# ---------------------------------------------------------------------------


def to_json(e: WordExpr) -> dict:
    if isinstance(e, Letter):
        return {"type": "letter", "index": e.index, "exp": e.exp}
    if isinstance(e, SymLetter):
        return {"type": "letter", "base": e.base, "coef": e.coef, "exp": e.exp}
    if isinstance(e, Concat):
        return {"type": "concat", "factors": [to_json(f) for f in e.factors]}
    if isinstance(e, Inverse):
        return {"type": "inverse", "of": to_json(e.of)}
    if isinstance(e, (OmegaProd, TauProd)):
        kind = "omega" if isinstance(e, OmegaProd) else "tau"
        if isinstance(e.spec.tail, Trivial):
            tail: dict = {"kind": "trivial"}
        elif len(e.spec.tail.bodies) == 1:
            tail = {"kind": "template", "body": to_json(e.spec.tail.bodies[0])}
        else:
            tail = {
                "kind": "template",
                "bodies": [to_json(b) for b in e.spec.tail.bodies],
            }
        return {
            "type": kind,
            "prefix": [to_json(f) for f in e.spec.prefix],
            "tail": tail,
        }
    raise TypeError(f"cannot serialize {type(e).__name__}")


def from_json(obj: dict) -> WordExpr:
    kind = obj.get("type")
    if kind == "letter":
        if "index" in obj:
            return Letter(int(obj["index"]), int(obj.get("exp", 1)))
        return SymLetter(int(obj["base"]), int(obj["coef"]), int(obj.get("exp", 1)))
    if kind == "concat":
        return Concat(tuple(from_json(f) for f in obj["factors"]))
    if kind == "inverse":
        return Inverse(from_json(obj["of"]))
    if kind in ("omega", "tau"):
        tail_obj = obj["tail"]
        if tail_obj["kind"] == "trivial":
            tail: TailRule = Trivial()
        elif tail_obj["kind"] == "template":
            if "bodies" in tail_obj:
                tail = Template(tuple(from_json(b) for b in tail_obj["bodies"]))
            else:
                tail = Template((from_json(tail_obj["body"]),))
        else:
            raise ValidationError([f"unknown tail kind {tail_obj['kind']!r}"])
        spec = SeqSpec(tuple(from_json(f) for f in obj["prefix"]), tail)
        return OmegaProd(spec) if kind == "omega" else TauProd(spec)
    raise ValidationError([f"unknown expression type {kind!r}"])
