import json

import pytest

from tauword import rearrange as ra

from conftest import make_rng, random_bijection


def test_evaluate_examples():
    assert ra.identity().evaluate(7) == 7
    phi = ra.FiniteSupport(((1, 3),))
    assert phi.evaluate(1) == 3
    assert phi.evaluate(2) == 2
    assert phi.evaluate(3) == 1
    eh = ra.eh_shuffle()
    assert eh.evaluate(2) == 3
    assert eh.evaluate(3) == 2
    assert eh.evaluate(4) == 4


def test_eh_shuffle_values():
    eh = ra.eh_shuffle()
    assert [eh.evaluate(k) for k in range(1, 7)] == [1, 3, 2, 4, 5, 7]
    for j in range(1, 50):
        assert eh.evaluate(4 * j - 3) == 4 * j - 3
        assert eh.evaluate(4 * j - 2) == 4 * j - 1
        assert eh.evaluate(4 * j - 1) == 4 * j - 2
        assert eh.evaluate(4 * j) == 4 * j
    assert ra.is_bijection(eh, 1000)


def test_malformed_specs():
    with pytest.raises(ra.MalformedBijectionError):
        ra.FiniteSupport(((1, 2), (2, 3)))
    with pytest.raises(ra.MalformedBijectionError):
        ra.FiniteSupport(((0, 1),))
    with pytest.raises(ra.MalformedBijectionError):
        ra.BlockPermute(3, (0, 0, 2))


def test_compose_right_to_left():
    f = ra.FiniteSupport(((1, 2),))
    g = ra.FiniteSupport(((2, 3),))
    fg = ra.Compose((f, g))
    # g first: 2 -> 3, then f: 3 -> 3
    assert fg.evaluate(2) == 3
    # g: 1 -> 1, then f: 1 -> 2
    assert fg.evaluate(1) == 2


def test_compose_with_inverse_is_identity():
    rng = make_rng(401)
    for _ in range(60):
        phi = random_bijection(rng)
        both = ra.Compose((phi, phi.inverse()))
        for k in rng.sample(range(1, 2000), 500 // 60 + 5):
            assert both.evaluate(k) == k
    phi = random_bijection(make_rng(402))
    both = ra.Compose((phi.inverse(), phi))
    assert all(both.evaluate(k) == k for k in range(1, 501))


def test_block_permute_preserves_blocks_setwise():
    rng = make_rng(403)
    for _ in range(50):
        period = rng.randint(2, 5)
        perm = list(range(period))
        rng.shuffle(perm)
        phi = ra.BlockPermute(period, tuple(perm))
        for j in range(6):
            block = set(range(j * period + 1, (j + 1) * period + 1))
            assert {phi.evaluate(k) for k in block} == block


def test_eventual_structure_matches_evaluation():
    rng = make_rng(404)
    for _ in range(120):
        phi = random_bijection(rng)
        st = phi.eventual_structure()
        for k in range(st.bound + 1, st.bound + 4 * st.period + 1):
            assert phi.evaluate(k) == k + st.offset_at(k)


def test_inverse_fuzzed():
    rng = make_rng(405)
    for _ in range(80):
        phi = random_bijection(rng)
        inv = phi.inverse()
        for k in range(1, 60):
            assert inv.evaluate(phi.evaluate(k)) == k


def test_sparse_embed_identity_inner():
    psi = ra.sparse_embed(ra.identity())
    assert all(psi.evaluate(k) == k for k in range(1, 501))


def test_sparse_embed_transposition():
    psi = ra.sparse_embed(ra.transposition(1, 2))
    assert psi.evaluate(1) == 3
    assert psi.evaluate(3) == 1
    fixed = [k for k in range(1, 200) if k not in (1, 3)]
    assert all(psi.evaluate(k) == k for k in fixed)
    assert ra.is_bijection(psi, 512)


def test_sparse_embed_rule():
    rng = make_rng(406)
    for _ in range(30):
        inner = random_bijection(rng, max_support=6)
        psi = ra.sparse_embed(inner)
        for k in range(1, 10):
            assert psi.evaluate(2**k - 1) == 2 ** inner.evaluate(k) - 1
        inv = psi.inverse()
        for k in range(1, 300):
            assert inv.evaluate(psi.evaluate(k)) == k


def test_is_bijection_fuzzed():
    rng = make_rng(407)
    for _ in range(100):
        phi = random_bijection(rng)
        st = phi.eventual_structure()
        bound = (max(st.bound, 20) // st.period + 1) * st.period
        assert ra.is_bijection(phi, bound)


def test_is_bijection_rejects_non_injective():
    class Collapse:
        def evaluate(self, k):
            return max(1, k - 1)

    assert not ra.is_bijection(Collapse(), 10)


def test_json_round_trip():
    rng = make_rng(408)
    for _ in range(60):
        phi = random_bijection(rng)
        again = ra.bijection_from_json(json.loads(json.dumps(phi.to_json())))
        assert again == phi
    assert ra.bijection_from_json({"kind": "finite", "cycles": [[1, 3]]}) == ra.transposition(1, 3)
    assert ra.bijection_from_json({"kind": "block", "period": 4, "perm": [0, 2, 1, 3]}) == ra.eh_shuffle()
    with pytest.raises(ra.MalformedBijectionError):
        ra.bijection_from_json({"kind": "mystery"})
