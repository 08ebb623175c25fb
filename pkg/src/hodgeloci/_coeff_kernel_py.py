"""Pure-Python twin of the compiled period-coefficient kernel.

Enumerates all deformation exponent tuples ``a`` with total degree at most
``trunc`` and returns, for each tuple that passes the fractional-pair
condition, the signed integer numerator and denominator of its coefficient:

    num/den = (-1)^E * prod_i ({(b_i+1)/d})_[(b_i+1)/d]  /  a!

with b = beta + sum_alpha a_alpha * alpha.  Writing b_i + 1 = q_i*d + r_i,
the pair condition says r_{2e} + r_{2e+1} == d for every consecutive pair,
each Pochhammer factor contributes prod_{t<q_i}(r_i + t*d) over d^{q_i},
and E = sum of q over even slots.  Both kernels must return identical term
lists, in lexicographically ascending order of ``a``.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple


def coefficient_terms(beta: Sequence[int], d: int, alphas: Sequence[Sequence[int]],
                      trunc: int) -> List[Tuple[Tuple[int, ...], int, int]]:
    nv = len(beta)
    half = nv // 2
    m = len(alphas)
    alphas = [tuple(a) for a in alphas]

    # q_total never exceeds k + |a| at surviving tuples; k + trunc is safe
    k = (sum(beta) + nv) // d
    dpow = [1] * (k + trunc + 1)
    for i in range(1, k + trunc + 1):
        dpow[i] = dpow[i - 1] * d

    out: List[Tuple[Tuple[int, ...], int, int]] = []
    a = [0] * m
    bc = [beta[j] + 1 for j in range(nv)]  # b_j + 1, maintained incrementally

    def emit(afact: int) -> None:
        for e in range(half):
            if bc[2 * e] % d + bc[2 * e + 1] % d != d:
                return
        num = 1
        qsum = 0
        esum = 0
        for j in range(nv):
            bj = bc[j]
            q, r = divmod(bj, d)
            qsum += q
            if not j & 1:
                esum += q
            for t in range(q):
                num *= r + t * d
        out.append((tuple(a), -num if esum & 1 else num, dpow[qsum] * afact))

    def descend(idx: int, rem: int, afact: int) -> None:
        if idx == m:
            emit(afact)
            return
        alpha = alphas[idx]
        for v in range(rem + 1):
            if v:
                afact *= v
                for j in range(nv):
                    bc[j] += alpha[j]
            a[idx] = v
            descend(idx + 1, rem - v, afact)
        for j in range(nv):
            bc[j] -= rem * alpha[j]
        a[idx] = 0

    descend(0, trunc, 1)
    return out
