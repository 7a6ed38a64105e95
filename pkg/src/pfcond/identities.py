"""Residual checks for the Pfaffian and determinant identities.

Every ``residual_*`` function returns ``LHS - RHS`` as an exact rational;
on valid input the result is exactly zero.  Pfaffians of ``A_{S}`` below
mean "delete the rows and columns in S" (:func:`pf_delete`), while
``Pf_A(I)`` keeps exactly ``I`` (:func:`pf_minor`).
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from .matrix import (
    Matrix,
    PairSet,
    SkewMatrix,
    block_embed,
    det_exact,
    mask_general,
    mask_skew,
    minor_delete_rc,
)
from .pfaffian import pf_delete, pf_eliminate, pf_minor, s_sign

ZERO = Fraction(0)


class HypothesisError(ValueError):
    """Raised when an instance violates the hypotheses of an identity."""


def _sign_pair(n: int, x: int, y: int) -> int:
    """``s([n], xy)``."""
    return s_sign(range(1, n + 1), (x, y))


def _f_factor(n: int, ip: int, jp: int, il: int, jl: int) -> int:
    return _sign_pair(n, ip, jl) * _sign_pair(n, jp, il)


def _g_factor(n: int, ip: int, jp: int, il: int, jl: int) -> int:
    return _sign_pair(n, ip, il) * _sign_pair(n, jp, jl)


def _parity_factor(ip: int, jp: int, il: int, jl: int) -> int:
    return -1 if (ip + jp + il + jl) % 2 else 1


def _even_order(A: SkewMatrix) -> None:
    if A.n % 2:
        raise HypothesisError(f"identity needs an even order, got {A.n}")


# --- Plücker-type identities ----------------------------------------------------


def residual_wenzel(A: SkewMatrix, I1: Iterable[int], I2: Iterable[int]) -> Fraction:
    """Wenzel / Dress-Wenzel: ``sum_tau (-1)^tau Pf_A(I1 ^ {i_tau}) Pf_A(I2 ^ {i_tau})``."""
    _even_order(A)
    I1, I2 = set(I1), set(I2)
    if len(I1) % 2 == 0 or len(I2) % 2 == 0:
        raise HypothesisError("both index sets must have odd cardinality")
    for i in I1 | I2:
        if not 1 <= i <= A.n:
            raise HypothesisError(f"index {i} outside [1, {A.n}]")
    total = ZERO
    for tau, i in enumerate(sorted(I1 ^ I2), start=1):
        term = pf_minor(A, I1 ^ {i}) * pf_minor(A, I2 ^ {i})
        total += term if tau % 2 == 0 else -term
    return total


def residual_expansion(A: SkewMatrix, alpha: Iterable[int], beta: Iterable[int], s: int) -> Fraction:
    """Row expansion of ``Pf_A(alpha) Pf_A(alpha beta)`` along ``i_s``."""
    _even_order(A)
    alpha, beta = set(alpha), sorted(set(beta))
    if alpha & set(beta):
        raise HypothesisError("alpha and beta overlap")
    if len(alpha) % 2 or len(beta) % 2:
        raise HypothesisError("alpha and beta must both be even sets")
    if not 1 <= s <= len(beta):
        raise HypothesisError(f"s={s} not in [1, {len(beta)}]")
    whole = alpha | set(beta)
    if whole and (min(whole) < 1 or max(whole) > A.n):
        raise HypothesisError("index out of range")
    i_s = beta[s - 1]
    rhs = ZERO
    for l, i_l in enumerate(beta, start=1):
        if l == s:
            continue
        term = pf_minor(A, alpha | {i_s, i_l}) * pf_minor(A, whole - {i_s, i_l})
        rhs += term if (l + s + 1) % 2 == 0 else -term
    return pf_minor(A, alpha) * pf_minor(A, whole) - rhs


def residual_plucker4(A: SkewMatrix, i: int, j: int, k: int, l: int) -> Fraction:
    """Four-index Pfaffian relation with delete-set minors."""
    if not 1 <= i < j < k < l <= A.n:
        raise HypothesisError("need 1 <= i < j < k < l <= n")
    _even_order(A)
    lhs = pf_delete(A, (i, j, k, l)) * pf_eliminate(A)
    rhs = (
        pf_delete(A, (i, j)) * pf_delete(A, (k, l))
        - pf_delete(A, (i, k)) * pf_delete(A, (j, l))
        + pf_delete(A, (i, l)) * pf_delete(A, (j, k))
    )
    return lhs - rhs


def residual_dodgson(M: Matrix) -> Fraction:
    """Dodgson condensation on the first and last rows/columns."""
    if not M.is_square or M.n_rows < 2:
        raise HypothesisError("Dodgson's rule needs a square matrix of order >= 2")
    n = M.n_rows
    inner = M.submatrix(range(2, n), range(2, n))
    lhs = det_exact(inner) * det_exact(M)
    rhs = det_exact(minor_delete_rc(M, 1, 1)) * det_exact(minor_delete_rc(M, n, n)) - det_exact(
        minor_delete_rc(M, 1, n)
    ) * det_exact(minor_delete_rc(M, n, 1))
    return lhs - rhs


def residual_godsil(M: Matrix) -> Fraction:
    """``Pf([[0, M], [-M^T, 0]]) - (-1)^(n(n-1)/2) det M``."""
    if not M.is_square:
        raise HypothesisError("square matrix required")
    n = M.n_rows
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return pf_eliminate(block_embed(M)) - sign * det_exact(M)


# --- arc subdivision ------------------------------------------------------------------


def _split_weight(w: Fraction, literal: bool) -> tuple[Fraction, Fraction, Fraction]:
    if not literal:
        return (w, Fraction(1), Fraction(1))
    num, den = w.numerator, w.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn != num or rd * rd != den:
        raise HypothesisError(f"weight {w} is not a perfect square; the square-root split is not rational")
    r = Fraction(rn, rd)
    return (r, Fraction(1), r)


def subdivide_arcs(A: SkewMatrix, pairs: Sequence[tuple[int, int]], literal: bool = False) -> SkewMatrix:
    """Replace the arc between each ``(i_l, j_l)`` with a three-arc path.

    The arc is read off the sign of ``a_{i_l j_l}`` (the corresponding
    directed graph of ``A``): it runs from ``i_l`` to ``j_l`` when the entry is
    nonnegative and from ``j_l`` to ``i_l`` otherwise.  The path through the
    new vertices ``n+2l-1, n+2l`` carries weights ``(w, 1, 1)``, or
    ``(sqrt w, 1, sqrt w)`` with ``literal=True``.  The original entries are
    zeroed, so keeping only ``[n]`` gives the masked matrix.
    """
    n = A.n
    k = len(pairs)
    N = n + 2 * k
    grid = [[ZERO] * N for _ in range(N)]
    for r in range(n):
        grid[r][:n] = A.rows[r]

    def arc(t, h, w):
        grid[t - 1][h - 1] = w
        grid[h - 1][t - 1] = -w

    for l, (i, j) in enumerate(pairs, start=1):
        if not (1 <= i <= n and 1 <= j <= n and i != j):
            raise HypothesisError(f"pair ({i},{j}) is not an off-diagonal position")
        a = A[i, j]
        tail, head = (i, j) if a >= 0 else (j, i)
        w1, w2, w3 = _split_weight(abs(a), literal)
        if a == 0 and literal:
            w1, w2, w3 = ZERO, Fraction(1), ZERO
        grid[i - 1][j - 1] = grid[j - 1][i - 1] = ZERO
        u, v = n + 2 * l - 1, n + 2 * l
        arc(tail, u, w1)
        arc(u, v, w2)
        arc(v, head, w3)
    return SkewMatrix._trusted(tuple(map(tuple, grid)), N)


def residual_lemma24(A: SkewMatrix, i: int, j: int, literal: bool = False) -> Fraction:
    """``Pf(A(G-bar)) - Pf(A)`` for a single subdivided arc."""
    return pf_eliminate(subdivide_arcs(A, [(i, j)], literal=literal)) - pf_eliminate(A)


# --- replacing-Pfaffian identities --------------------------------------------------------


def _check_mask(A: SkewMatrix, E: PairSet, p: int) -> None:
    _even_order(A)
    if len(E) == 0:
        raise HypothesisError("E must be nonempty")
    if not E.skew:
        raise HypothesisError("E must be a skew pair set")
    if E.max_index() > A.n:
        raise HypothesisError("pair index exceeds matrix order")
    if not 1 <= p <= len(E):
        raise HypothesisError(f"p={p} not in [1, {len(E)}]")


def _thm31_sum(A, E, p, EA, transposed: bool) -> Fraction:
    n = A.n
    ip, jp = E[p]
    total = ZERO
    for l in range(1, len(E) + 1):
        if l == p:
            continue
        il, jl = E[l]
        a_l = A[il, jl]
        if a_l == 0:
            continue
        f = _f_factor(n, ip, jp, il, jl)
        g = _g_factor(n, ip, jp, il, jl)
        if transposed:
            first = f and pf_delete(EA, {jp, il}) * pf_delete(A, {ip, jl})
            second = g and pf_delete(EA, {jp, jl}) * pf_delete(A, {ip, il})
        else:
            first = f and pf_delete(EA, {ip, jl}) * pf_delete(A, {jp, il})
            second = g and pf_delete(EA, {ip, il}) * pf_delete(A, {jp, jl})
        total += a_l * (f * first - g * second)
    return A[ip, jp] * total


def _thm31_head(A, E, p, EA) -> Fraction:
    return pf_eliminate(EA) * pf_eliminate(A) - pf_eliminate(mask_skew(A, E.without(p))) * pf_eliminate(
        mask_skew(A, E.only(p))
    )


def residual_thm31(A: SkewMatrix, E: PairSet, p: int) -> Fraction:
    """Replacing-Pfaffian identity for ``Pf(E(A)) Pf(A)`` expanded at pair ``p``."""
    _check_mask(A, E, p)
    EA = mask_skew(A, E)
    return _thm31_head(A, E, p, EA) - _thm31_sum(A, E, p, EA, transposed=False)


def residual_cor32(A: SkewMatrix, E: PairSet, p: int) -> Fraction:
    """Transposed-index companion of :func:`residual_thm31`."""
    _check_mask(A, E, p)
    EA = mask_skew(A, E)
    return _thm31_head(A, E, p, EA) - _thm31_sum(A, E, p, EA, transposed=True)


def check_interleaved(E: PairSet) -> None:
    """Require ``i_1 < j_1 < i_2 < j_2 < ...`` and every ``i_l + j_l`` of equal parity.

    Dropping the sign factors ``f(1,l) = g(1,l) = (-1)^(i_1+j_1+i_l+j_l)`` is
    only sound under the parity condition, so it is checked too.
    """
    flat = [x for pair in E for x in pair]
    if any(a >= b for a, b in zip(flat, flat[1:])):
        raise HypothesisError(f"pairs {list(E)} are not interleaved as i1<j1<i2<j2<...")
    i1, j1 = E[1]
    for il, jl in E:
        if (il + jl - i1 - j1) % 2:
            raise HypothesisError(
                f"pair ({il},{jl}) has sign factor -1 relative to ({i1},{j1}); the unsigned form does not apply"
            )


def residual_cor33(A: SkewMatrix, E: PairSet) -> tuple[Fraction, Fraction]:
    """Both unsigned forms at ``p = 1`` for an interleaved ``E``."""
    _check_mask(A, E, 1)
    check_interleaved(E)
    EA = mask_skew(A, E)
    head = _thm31_head(A, E, 1, EA)
    i1, j1 = E[1]
    s1 = s2 = ZERO
    for l in range(2, len(E) + 1):
        il, jl = E[l]
        a_l = A[il, jl]
        s1 += a_l * (pf_delete(EA, {i1, jl}) * pf_delete(A, {j1, il}) - pf_delete(EA, {i1, il}) * pf_delete(A, {j1, jl}))
        s2 += a_l * (pf_delete(EA, {j1, il}) * pf_delete(A, {i1, jl}) - pf_delete(EA, {j1, jl}) * pf_delete(A, {i1, il}))
    a1 = A[i1, j1]
    return head - a1 * s1, head - a1 * s2


# --- determinant identities -----------------------------------------------------------------


def _check_general(M: Matrix, E: PairSet, p: int) -> None:
    if not M.is_square:
        raise HypothesisError("square matrix required")
    if len(E) == 0:
        raise HypothesisError("E must be nonempty")
    if not 1 <= p <= len(E):
        raise HypothesisError(f"p={p} not in [1, {len(E)}]")
    if E.max_index() > M.n_rows:
        raise HypothesisError("pair index exceeds matrix order")


def _det_head(M: Matrix, E: PairSet, p: int, EM: Matrix) -> Fraction:
    return det_exact(EM) * det_exact(M) - det_exact(mask_general(M, E.without(p))) * det_exact(
        mask_general(M, E.only(p))
    )


def _det_sum(M: Matrix, E: PairSet, p: int, EM: Matrix, swapped: bool) -> Fraction:
    ip, jp = E[p]
    total = ZERO
    for l in range(1, len(E) + 1):
        if l == p:
            continue
        il, jl = E[l]
        a_l = M[il, jl]
        if a_l == 0:
            continue
        if swapped:
            term = det_exact(minor_delete_rc(EM, il, jp)) * det_exact(minor_delete_rc(M, ip, jl))
        else:
            term = det_exact(minor_delete_rc(EM, ip, jl)) * det_exact(minor_delete_rc(M, il, jp))
        total += _parity_factor(ip, jp, il, jl) * a_l * term
    return M[ip, jp] * total


def residual_thm42(M: Matrix, E: PairSet, p: int) -> Fraction:
    """``det(E[A]) det(A)`` expanded at pair ``p`` with minors ``E[A]_{i_p j_l}``, ``A_{i_l j_p}``."""
    _check_general(M, E, p)
    EM = mask_general(M, E)
    return _det_head(M, E, p, EM) + _det_sum(M, E, p, EM, swapped=False)


def residual_thm43(M: Matrix, E: PairSet, p: int) -> Fraction:
    """As :func:`residual_thm42` with minors ``E[A]_{i_l j_p}``, ``A_{i_p j_l}``."""
    _check_general(M, E, p)
    EM = mask_general(M, E)
    return _det_head(M, E, p, EM) + _det_sum(M, E, p, EM, swapped=True)


def residual_cor44_det(M: Matrix, E: PairSet, p: int) -> Fraction:
    """Alternating sum obtained by subtracting the two expansions; zero."""
    _check_general(M, E, p)
    EM = mask_general(M, E)
    ip, jp = E[p]
    total = ZERO
    for il, jl in E:
        a_l = M[il, jl]
        if a_l == 0:
            continue
        term = det_exact(minor_delete_rc(EM, ip, jl)) * det_exact(minor_delete_rc(M, il, jp)) - det_exact(
            minor_delete_rc(EM, il, jp)
        ) * det_exact(minor_delete_rc(M, ip, jl))
        total += (-1 if (il + jl) % 2 else 1) * a_l * term
    return total


# --- helpers used by the suite -----------------------------------------------------------------


def bar_matrix_for_mask(A: SkewMatrix, E: PairSet) -> SkewMatrix:
    """Order ``n + 2k`` matrix with every masked arc subdivided."""
    return subdivide_arcs(A, list(E))


__all__ = [
    "HypothesisError",
    "residual_wenzel",
    "residual_expansion",
    "residual_plucker4",
    "residual_dodgson",
    "residual_godsil",
    "residual_lemma24",
    "subdivide_arcs",
    "residual_thm31",
    "residual_cor32",
    "residual_cor33",
    "check_interleaved",
    "residual_thm42",
    "residual_thm43",
    "residual_cor44_det",
    "bar_matrix_for_mask",
]
