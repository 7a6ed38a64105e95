import random
from fractions import Fraction

import pytest

from pfcond import identities as ids
from pfcond.campaign import CATALOGUE, VerifyConfig, make_instance, rand_matrix, rand_skew
from pfcond.identities import HypothesisError
from pfcond.matrix import Matrix, PairSet, block_embed, det_exact, keep_indices, mask_skew, minor_delete_rc, new_skew
from pfcond.pfaffian import pf_delete, pf_eliminate, pf_minor

MATRIX_IDENTITIES = [name for name, ident in CATALOGUE.items() if ident.kind in ("pf", "det")]


def det2(a, b, c, d):
    return a * d - b * c


def det3(m):
    return det_exact(Matrix(m))


@pytest.mark.parametrize("name", MATRIX_IDENTITIES)
def test_residual_zero_on_random_instances(name):
    cfg = VerifyConfig(name, trials=40, seed=11)
    for t in range(cfg.trials):
        rep = make_instance(cfg, t)
        r = CATALOGUE[name].evaluate(**rep.params)
        assert (r == (0, 0)) if isinstance(r, tuple) else r == 0, rep.to_json()


def test_four_by_four_mask_closed_form(rng):
    # expanding both sides puts a minus sign inside the second term
    for _ in range(100):
        a = {(i, j): Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for i in range(1, 5) for j in range(i + 1, 5)}
        A = new_skew(4, [(i, j, v) for (i, j), v in a.items()])
        E = PairSet([(1, 2), (3, 4)])
        EA = mask_skew(A, E)
        lhs = pf_eliminate(A) * pf_eliminate(EA)
        head = pf_eliminate(mask_skew(A, PairSet([(3, 4)]))) * pf_eliminate(mask_skew(A, PairSet([(1, 2)])))
        corrected = head + a[1, 2] * a[3, 4] * (a[2, 3] * a[1, 4] - a[2, 4] * a[1, 3])
        assert lhs == corrected
        assert ids.residual_cor33(A, E) == (0, 0)
        assert ids.residual_thm31(A, E, 1) == 0 and ids.residual_thm31(A, E, 2) == 0


def test_four_by_four_mask_plus_sign_is_wrong():
    A = new_skew(4, [(1, 2, 1), (1, 3, 1), (1, 4, 1), (2, 3, 1), (2, 4, 1), (3, 4, 1)])
    E = PairSet([(1, 2), (3, 4)])
    lhs = pf_eliminate(A) * pf_eliminate(mask_skew(A, E))
    head = pf_eliminate(mask_skew(A, PairSet([(3, 4)]))) * pf_eliminate(mask_skew(A, PairSet([(1, 2)])))
    plus_form = head + (1 * 1 + 1 * 1)
    assert lhs != plus_form


def test_three_by_three_diagonal_mask_closed_forms(rng):
    # 3x3, E = diagonal, p = 2, both right-hand forms
    for _ in range(100):
        a = {(i, j): Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for i in range(1, 4) for j in range(1, 4)}
        M = [[a[i, j] for j in range(1, 4)] for i in range(1, 4)]
        z = lambda cells: [[0 if (i + 1, j + 1) in cells else M[i][j] for j in range(3)] for i in range(3)]
        lhs = det3(M) * det3(z({(1, 1), (2, 2), (3, 3)})) - det3(z({(2, 2)})) * det3(z({(1, 1), (3, 3)}))
        rhs42 = -a[1, 1] * a[2, 2] * det2(a[2, 1], a[2, 3], a[3, 1], a[3, 3]) * det2(a[1, 2], a[1, 3], a[3, 2], 0) \
            - a[2, 2] * a[3, 3] * det2(a[1, 1], a[1, 3], a[2, 1], a[2, 3]) * det2(0, a[1, 2], a[3, 1], a[3, 2])
        rhs43 = -a[1, 1] * a[2, 2] * det2(a[1, 2], a[1, 3], a[3, 2], a[3, 3]) * det2(a[2, 1], a[2, 3], a[3, 1], 0) \
            - a[2, 2] * a[3, 3] * det2(a[1, 1], a[1, 2], a[3, 1], a[3, 2]) * det2(0, a[1, 3], a[2, 1], a[2, 3])
        assert lhs == rhs42 == rhs43
        E = PairSet([(1, 1), (2, 2), (3, 3)], skew=False)
        A = Matrix(M)
        assert ids.residual_thm42(A, E, 2) == ids.residual_thm43(A, E, 2) == ids.residual_cor44_det(A, E, 2) == 0


def test_dodgson_three_by_three():
    M = Matrix([[2, 1, 3], [0, 5, 1], [4, 2, 7]])
    assert ids.residual_dodgson(M) == 0
    with pytest.raises(HypothesisError):
        ids.residual_dodgson(Matrix([[1]]))


def test_godsil_minor_parts(rng):
    # deleting two rows of the same block gives 0; mixed deletions give signed minors
    for n in (2, 3, 4, 5):
        M = rand_matrix(rng, n, 9)
        S = block_embed(M)
        sign = -1 if ((n - 1) * (n - 2) // 2) % 2 else 1
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue
                assert pf_delete(S, [i, j]) == 0
                assert pf_delete(S, [i, n + j]) == sign * det_exact(minor_delete_rc(M, i, j))
                assert pf_delete(S, [n + i, j]) == sign * det_exact(minor_delete_rc(M, j, i))


def test_identity_hypotheses_are_checked(rng):
    A = rand_skew(rng, 6, 9)
    with pytest.raises(HypothesisError):
        ids.residual_wenzel(A, [1, 2], [3])
    with pytest.raises(HypothesisError):
        ids.residual_wenzel(rand_skew(rng, 5, 9), [1], [3])
    with pytest.raises(HypothesisError):
        ids.residual_plucker4(A, 2, 1, 3, 4)
    with pytest.raises(HypothesisError):
        ids.residual_expansion(A, [1, 2], [2, 3], 1)
    with pytest.raises(HypothesisError):
        ids.residual_thm31(A, PairSet([(1, 2)]), 2)
    with pytest.raises(HypothesisError):
        ids.residual_thm31(A, PairSet([(1, 9)]), 1)
    with pytest.raises(HypothesisError):
        ids.residual_thm31(rand_skew(rng, 5, 9), PairSet([(1, 2)]), 1)
    with pytest.raises(HypothesisError):
        ids.residual_thm42(Matrix([[1, 2, 3]]), PairSet([(1, 1)], skew=False), 1)


def test_wenzel_with_overlapping_sets(rng):
    A = rand_skew(rng, 8, 9)
    assert ids.residual_wenzel(A, [1, 2, 3], [2, 3, 4, 5, 6]) == 0
    assert ids.residual_wenzel(A, [1], [1]) == 0


def test_expansion_any_position(rng):
    A = rand_skew(rng, 10, 9)
    for s in range(1, 7):
        assert ids.residual_expansion(A, [2, 9], [1, 3, 4, 6, 7, 10], s) == 0


def test_interleaved_parity_condition(rng):
    # with mixed parities of i_l + j_l the unsigned form picks up a sign error
    E = PairSet([(1, 2), (3, 5)])
    with pytest.raises(HypothesisError):
        ids.check_interleaved(E)
    with pytest.raises(HypothesisError):
        ids.check_interleaved(PairSet([(1, 3), (2, 4)]))
    found = False
    for _ in range(20):
        A = rand_skew(rng, 6, 9)
        assert ids.residual_thm31(A, E, 1) == 0
        EA = mask_skew(A, E)
        head = ids._thm31_head(A, E, 1, EA)
        unsigned = A[1, 2] * A[3, 5] * (pf_delete(EA, {1, 5}) * pf_delete(A, {2, 3}) - pf_delete(EA, {1, 3}) * pf_delete(A, {2, 5}))
        found = found or head != unsigned
    assert found
    ids.check_interleaved(PairSet([(1, 2), (3, 4)]))
    ids.check_interleaved(PairSet([(1, 3), (4, 6)]))


def test_interleaved_mask_both_forms(rng):
    for E in ([(1, 2), (3, 4)], [(1, 2), (3, 4), (5, 6), (7, 8)], [(1, 3), (4, 6)], [(2, 5), (6, 7)]):
        A = rand_skew(rng, 8, 9)
        assert ids.residual_cor33(A, PairSet(E)) == (0, 0)


def test_pair_subdivision_variants(rng):
    A = rand_skew(rng, 6, 9)
    for i, j in [(1, 2), (5, 3), (2, 6)]:
        assert ids.residual_lemma24(A, i, j) == 0
    B = new_skew(4, [(1, 2, Fraction(9, 4)), (1, 3, 1), (2, 4, -2), (3, 4, -Fraction(49, 25)), (1, 4, 5)])
    assert ids.residual_lemma24(B, 1, 2, literal=True) == 0
    assert ids.residual_lemma24(B, 3, 4, literal=True) == 0
    with pytest.raises(HypothesisError):
        ids.residual_lemma24(B, 1, 3 + 1, literal=True)


def test_subdivided_matrix_for_mask(rng):
    for n, E in [(4, [(1, 2), (3, 4)]), (6, [(1, 4), (2, 5), (3, 6)]), (6, [(2, 3)])]:
        A = rand_skew(rng, n, 9)
        E = PairSet(E)
        bar = ids.bar_matrix_for_mask(A, E)
        assert bar.n == n + 2 * len(E)
        assert pf_minor(bar, range(1, n + 1)) == pf_eliminate(mask_skew(A, E))
        assert pf_eliminate(bar) == pf_eliminate(A)
        assert keep_indices(bar, range(1, n + 1)) == mask_skew(A, E)


def test_flipped_f_factor_is_detected(monkeypatch):
    monkeypatch.setattr(ids, "_f_factor", lambda *a: -ids._sign_pair(a[0], a[1], a[4]) * ids._sign_pair(a[0], a[2], a[3]))
    rng = random.Random(3)
    hits = 0
    for _ in range(50):
        A = rand_skew(rng, 8, 9)
        E = PairSet(rng.sample([(i, j) for i in range(1, 9) for j in range(i + 1, 9)], 3))
        hits += ids.residual_thm31(A, E, 1) != 0
    assert hits > 0


def test_flipped_parity_factor_is_detected(monkeypatch):
    original = ids._parity_factor
    monkeypatch.setattr(ids, "_parity_factor", lambda *a: -original(*a))
    rng = random.Random(4)
    hits = 0
    for _ in range(50):
        M = rand_matrix(rng, 5, 9)
        E = PairSet(rng.sample([(i, j) for i in range(1, 6) for j in range(1, 6)], 3), skew=False)
        hits += ids.residual_thm42(M, E, 1) != 0
    assert hits > 0
