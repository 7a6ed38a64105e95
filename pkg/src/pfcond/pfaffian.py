"""Pfaffian evaluation and sign combinatorics.

Two independent evaluators are provided: :func:`pf_definition` sums over
all perfect pairings and is meant as an oracle for small orders, while
:func:`pf_eliminate` is a cubic-time fraction-free skew elimination.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Sequence

from .matrix import Matrix, SkewMatrix, det_exact, keep_indices

PF_DEFINITION_MAX_ORDER = 12


def perm_sign(word: Sequence[int], n: int | None = None) -> int:
    """Sign of ``word`` read as a permutation of ``[n]``; 0 if a letter repeats."""
    if n is None:
        n = len(word)
    if len(word) != n:
        raise ValueError(f"word of length {len(word)} is not a permutation of [{n}]")
    for x in word:
        if not 1 <= x <= n:
            raise ValueError(f"letter {x} outside [1, {n}]")
    if len(set(word)) != n:
        return 0
    seen = [False] * (n + 1)
    sign = 1
    for start in range(1, n + 1):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = word[x - 1]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def s_sign(alpha: Sequence[int], beta: Sequence[int]) -> int:
    """Knuth's ``s(alpha, beta)``.

    Zero if either word repeats a letter or ``beta`` uses a letter missing
    from ``alpha``; otherwise the sign of the permutation taking ``alpha``
    to ``beta`` followed by the rest of ``alpha``.
    """
    if len(set(alpha)) != len(alpha) or len(set(beta)) != len(beta):
        return 0
    pos = {x: k for k, x in enumerate(alpha, start=1)}
    if any(x not in pos for x in beta):
        return 0
    bset = set(beta)
    target = list(beta) + [x for x in alpha if x not in bset]
    return perm_sign([pos[x] for x in target], len(alpha))


def iter_partitions(n: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """All partitions of ``[n]`` into pairs, each pair ``(s, t)`` with ``s < t``."""
    if n % 2:
        return

    def rec(rest: tuple[int, ...]):
        if not rest:
            yield ()
            return
        s = rest[0]
        for k in range(1, len(rest)):
            t = rest[k]
            for tail in rec(rest[1:k] + rest[k + 1:]):
                yield ((s, t),) + tail

    yield from rec(tuple(range(1, n + 1)))


def _integer_skew(A: Matrix) -> tuple[list[list[int]], int]:
    """Scale by the common denominator ``L``; Pf scales by ``L**(n/2)``."""
    rows = A.rows
    den = 1
    for row in rows:
        for x in row:
            if x.denominator != 1:
                den = lcm(den, x.denominator)
    if den == 1:
        return [[x.numerator for x in row] for row in rows], 1
    return [[x.numerator * (den // x.denominator) for x in row] for row in rows], den


def pf_definition(A: SkewMatrix) -> Fraction:
    """Pfaffian as the signed sum over all ``(n-1)!!`` pairings.

    Each pairing contributes ``sgn(s1 t1 s2 t2 ...) * prod a_{s t}``; the
    sign is carried incrementally while the pairing is built.  Odd order
    gives 0 and the empty matrix gives 1.
    """
    n = A.n_rows
    if n % 2:
        return Fraction(0)
    if n > PF_DEFINITION_MAX_ORDER:
        raise ValueError(
            f"pf_definition is capped at order {PF_DEFINITION_MAX_ORDER} (got {n}); use pf_eliminate"
        )
    B, den = _integer_skew(A)

    def rec(rest: tuple[int, ...]) -> int:
        if not rest:
            return 1
        s = rest[0]
        row = B[s]
        total = 0
        sign = 1
        for k in range(1, len(rest)):
            t = rest[k]
            if row[t]:
                total += sign * row[t] * rec(rest[1:k] + rest[k + 1:])
            sign = -sign
        return total

    return Fraction(rec(tuple(range(n))), den ** (n // 2))


def pf_integer(B: list[list[int]]) -> int:
    """Fraction-free Pfaffian of an integer skew matrix (destroys ``B``).

    After step ``t`` the active entry ``B[i][j]`` holds the Pfaffian of the
    principal submatrix on the first ``2t`` pivoted indices plus ``i, j``.
    Each update is a four-term Pfaffian identity divided exactly by the
    previous pivot.
    """
    n = len(B)
    if n % 2:
        return 0
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(0, n, 2):
        rowk = B[k]
        j = k + 1
        while j < n and rowk[j] == 0:
            j += 1
        if j == n:
            return 0
        if j != k + 1:
            b = k + 1
            B[b], B[j] = B[j], B[b]
            for row in B:
                row[b], row[j] = row[j], row[b]
            sign = -sign
        piv = rowk[k + 1]
        if k + 2 == n:
            return sign * piv
        rowb = B[k + 1]
        for i in range(k + 2, n):
            rowi = B[i]
            aki, bki = rowk[i], rowb[i]
            for jj in range(i + 1, n):
                v = (piv * rowi[jj] - aki * rowb[jj] + rowk[jj] * bki) // prev
                rowi[jj] = v
                B[jj][i] = -v
        prev = piv
    raise AssertionError("unreachable")


def pf_eliminate(A: SkewMatrix) -> Fraction:
    """Pfaffian by skew elimination with leftmost nonzero pivoting, O(n^3)."""
    n = A.n_rows
    if n % 2:
        return Fraction(0)
    B, den = _integer_skew(A)
    return Fraction(pf_integer(B), den ** (n // 2))


pf = pf_eliminate


def pf_minor(A: SkewMatrix, I: Iterable[int]) -> Fraction:
    """``Pf_A(I)``: Pfaffian of the principal submatrix that keeps exactly ``I``."""
    return pf_eliminate(keep_indices(A, I))


def pf_delete(A: SkewMatrix, S: Iterable[int]) -> Fraction:
    """``Pf(A_S)``: Pfaffian after deleting the rows and columns in ``S``."""
    drop = set(S)
    for i in drop:
        if not 1 <= i <= A.n_rows:
            raise IndexError(f"index {i} out of range for order {A.n_rows}")
    return pf_eliminate(keep_indices(A, [i for i in range(1, A.n_rows + 1) if i not in drop]))


def cayley_residual(A: SkewMatrix) -> Fraction:
    """``det(A) - Pf(A)**2``; always zero."""
    return det_exact(A) - pf_eliminate(A) ** 2
