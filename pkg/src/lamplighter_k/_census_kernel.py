"""Compiled canonical-representative counter behind ``orbits.census``."""

import numpy as np
from numba import njit


@njit(cache=True)
def _translate_less(P, f, full, n, re, own, tmp):
    # key(f⁻¹·full[:n]) < key(full[:n]), keys = (#codes below identity, sorted codes)
    for i in range(n):
        tmp[i] = P[f, full[i]]
    for i in range(1, n):
        v = tmp[i]
        j = i - 1
        while j >= 0 and tmp[j] > v:
            tmp[j + 1] = tmp[j]
            j -= 1
        tmp[j + 1] = v
    tb = 0
    ob = 0
    for i in range(n):
        if tmp[i] < re:
            tb += 1
        if own[i] < re:
            ob += 1
    if tb != ob:
        return tb < ob
    for i in range(n):
        if tmp[i] != own[i]:
            return tmp[i] < own[i]
    return False


@njit(cache=True)
def count_canonical(P, others, ei, re, k, prune):
    """Count k-sets {e} ∪ S, S ⊆ others, that are minimal among their translates f⁻¹R.

    ``P[i, j]`` orders like ball[i]⁻¹·ball[j]; ``ei`` is the identity's ball index and
    ``re`` its code.  ``prune`` cuts a branch as soon as a prefix is beaten, which is
    sound only when no code lies below ``re``.
    """
    m = others.shape[0]
    s = k - 1
    if s == 0:
        return 1
    if s > m:
        return 0
    full = np.empty(k, np.int64)
    own = np.empty(k, np.int64)
    tmp = np.empty(k, np.int64)
    idx = np.empty(s, np.int64)
    full[0] = ei
    total = 0
    depth = 0
    idx[0] = 0
    while depth >= 0:
        if idx[depth] > m - s + depth:
            depth -= 1
            if depth >= 0:
                idx[depth] += 1
            continue
        full[depth + 1] = others[idx[depth]]
        n = depth + 2
        leaf = depth == s - 1
        if leaf or prune:
            for i in range(n):
                own[i] = P[ei, full[i]]
            for i in range(1, n):
                v = own[i]
                j = i - 1
                while j >= 0 and own[j] > v:
                    own[j + 1] = own[j]
                    j -= 1
                own[j + 1] = v
            beaten = False
            for j in range(1, n):
                if _translate_less(P, full[j], full, n, re, own, tmp):
                    beaten = True
                    break
            if beaten:
                idx[depth] += 1
                continue
        if leaf:
            total += 1
            idx[depth] += 1
        else:
            depth += 1
            idx[depth] = idx[depth - 1] + 1
    return total
