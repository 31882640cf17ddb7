"""Shared deterministic generators for fuzzed inputs."""

from __future__ import annotations

import random

from tauword import free_words as fw
from tauword import rearrange as ra
from tauword import word_expr as we


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


def nonzero(rng: random.Random, lo: int = -3, hi: int = 3) -> int:
    while True:
        e = rng.randint(lo, hi)
        if e:
            return e


def random_raw_syllables(rng, max_syllables=10, max_letter=6):
    return [
        (rng.randint(1, max_letter), rng.randint(-3, 3))
        for _ in range(rng.randint(0, max_syllables))
    ]


def random_word(rng, max_syllables=10, max_letter=6) -> fw.ReducedWord:
    return fw.reduce(
        (rng.randint(1, max_letter), nonzero(rng)) for _ in range(rng.randint(0, max_syllables))
    )


def random_zero_sum_word(rng, max_pairs=10, max_letter=6) -> fw.ReducedWord:
    """Word with zero exponent sum for every letter (paired syllables, shuffled)."""
    syls = []
    for _ in range(rng.randint(0, max_pairs)):
        letter = rng.randint(1, max_letter)
        e = nonzero(rng)
        syls.append((letter, e))
        syls.append((letter, -e))
    rng.shuffle(syls)
    return fw.reduce(syls)


def random_finite_expr(rng, depth=2, max_letter=8) -> we.WordExpr:
    if depth == 0 or rng.random() < 0.4:
        return we.Letter(rng.randint(1, max_letter), nonzero(rng))
    if rng.random() < 0.3:
        return we.Inverse(random_finite_expr(rng, depth - 1, max_letter))
    return we.Concat(
        tuple(random_finite_expr(rng, depth - 1, max_letter) for _ in range(rng.randint(0, 3)))
    )


def random_template_body(rng) -> we.WordExpr:
    leaves = []
    for _ in range(rng.randint(1, 3)):
        leaf = we.SymLetter(rng.randint(1, 4), rng.randint(1, 3), nonzero(rng, -2, 2))
        leaves.append(we.Inverse(leaf) if rng.random() < 0.3 else leaf)
    return leaves[0] if len(leaves) == 1 else we.Concat(tuple(leaves))


def random_zero_eta_body(rng) -> we.WordExpr:
    coef = rng.randint(1, 3)
    if rng.random() < 0.6:
        a = we.SymLetter(rng.randint(1, 3), coef, nonzero(rng, -2, 2))
        b = we.SymLetter(rng.randint(1, 3), coef, nonzero(rng, -2, 2))
        return we.commutator_expr(a, b)
    leaf = we.SymLetter(rng.randint(1, 3), coef, nonzero(rng, -2, 2))
    return we.Concat((leaf, we.Inverse(leaf)))


def zero_sum_word_expr(rng) -> we.WordExpr:
    w = random_zero_sum_word(rng, max_pairs=4)
    return we.Concat(tuple(we.Letter(l, e) for l, e in w.syllables))


def random_seq_spec(rng, zero_eta=False) -> we.SeqSpec:
    if zero_eta:
        prefix = tuple(zero_sum_word_expr(rng) for _ in range(rng.randint(0, 2)))
    else:
        prefix = tuple(random_finite_expr(rng) for _ in range(rng.randint(0, 3)))
    if rng.random() < 0.35:
        tail: we.TailRule = we.Trivial()
    else:
        maker = random_zero_eta_body if zero_eta else random_template_body
        tail = we.Template(tuple(maker(rng) for _ in range(rng.randint(1, 2))))
    return we.SeqSpec(prefix, tail)


def random_product(rng, zero_eta=False) -> we.WordExpr:
    spec = random_seq_spec(rng, zero_eta)
    return we.OmegaProd(spec) if rng.random() < 0.5 else we.TauProd(spec)


def random_expr(rng) -> we.WordExpr:
    roll = rng.random()
    if roll < 0.5:
        return random_product(rng)
    if roll < 0.65:
        return we.Inverse(random_product(rng))
    if roll < 0.8:
        return we.Concat(
            (random_finite_expr(rng), random_product(rng), random_finite_expr(rng))
        )
    return random_finite_expr(rng, depth=3)


def random_zero_eta_expr(rng) -> we.WordExpr:
    roll = rng.random()
    if roll < 0.55:
        return random_product(rng, zero_eta=True)
    if roll < 0.75:
        return we.Concat((zero_sum_word_expr(rng), random_product(rng, zero_eta=True)))
    return zero_sum_word_expr(rng)


def random_bijection(rng, max_support=12) -> ra.BijectionSpec:
    def atom():
        if rng.random() < 0.5:
            pool = list(range(1, max_support + 1))
            rng.shuffle(pool)
            cycles = []
            while len(pool) >= 2 and rng.random() < 0.7:
                size = rng.randint(2, min(4, len(pool)))
                cycles.append(tuple(pool[:size]))
                del pool[:size]
            return ra.FiniteSupport(tuple(cycles))
        period = rng.randint(2, 4)
        perm = list(range(period))
        rng.shuffle(perm)
        return ra.BlockPermute(period, tuple(perm))

    if rng.random() < 0.3:
        return ra.Compose(tuple(atom() for _ in range(rng.randint(2, 3))))
    return atom()
