# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels; see _kernels_py for the shared conventions."""
import numpy as np

cdef int UNIFORM = 0
cdef int QUANTUM = 1
cdef int FIXED = 2


def enumerate_wins(int game, int n):
    if game not in (1, 2, 3):
        raise ValueError(f"unknown game {game}")
    if n < 0 or 2 * n > 62:
        raise ValueError(f"round count {n} too large to enumerate")
    cdef unsigned long long mask, limit = 1ULL << (2 * n)
    cdef long long wins = 0
    cdef int i, a, b, total, product, inverse
    mask = 0
    while mask < limit:
        total = 0
        product = 1
        inverse = 1
        for i in range(n):
            a = -1 if (mask >> (2 * i)) & 1 else 1
            b = -1 if (mask >> (2 * i + 1)) & 1 else 1
            total += a + b
            product *= a * b
            if b != -a:
                inverse = 0
        if game == 1:
            wins += total == 0
        elif game == 2:
            wins += product == 1
        else:
            wins += (product == 1) and (inverse != 0)
        mask += 1
    return wins


cdef inline signed char _answer(int kind, double u, signed char q, signed char[:] fixed, double p_plus) nogil:
    if kind == UNIFORM:
        return 1 if u < 0.5 else -1
    if kind == QUANTUM:
        return 1 if u < p_plus else -1
    return fixed[q]


def play_rounds(signed char[:, :] q_a, signed char[:, :] q_b, double[:, :] u_a, double[:, :] u_b,
                int kind_a, int kind_b, signed char[:] fixed_a, signed char[:] fixed_b,
                double[:] table, signed char[:, :] out_a, signed char[:, :] out_b):
    cdef Py_ssize_t t, i
    cdef Py_ssize_t trials = q_a.shape[0], rounds = q_a.shape[1]
    cdef signed char a, b
    cdef double p
    with nogil:
        for t in range(trials):
            for i in range(rounds):
                a = _answer(kind_a, u_a[t, i], q_a[t, i], fixed_a, table[0])
                if kind_b == QUANTUM:
                    if kind_a == QUANTUM:
                        p = table[1] if a == 1 else table[2]
                    else:
                        p = table[3]
                else:
                    p = 0.0
                b = _answer(kind_b, u_b[t, i], q_b[t, i], fixed_b, p)
                out_a[t, i] = a
                out_b[t, i] = b


def score_rounds(int game, signed char[:, :] q_a, signed char[:, :] q_b,
                 signed char[:, :] a, signed char[:, :] b):
    cdef Py_ssize_t t, i
    cdef Py_ssize_t trials = a.shape[0], rounds = a.shape[1]
    cdef long long wins = 0, product_hits = 0, inverse_hits = 0, violations = 0
    cdef int total, product, inverse, broken
    with nogil:
        for t in range(trials):
            if game == 3:
                broken = 0
                for i in range(rounds):
                    if q_a[t, i] == q_b[t, i]:
                        broken = 1
                if broken:
                    violations += 1
                    continue
            total = 0
            product = 1
            inverse = 1
            for i in range(rounds):
                total += a[t, i] + b[t, i]
                product *= a[t, i] * b[t, i]
                if b[t, i] != -a[t, i]:
                    inverse = 0
            product_hits += product == 1
            inverse_hits += inverse != 0
            if game == 1:
                wins += total == 0
            elif game == 2:
                wins += product == 1
            else:
                wins += (product == 1) and (inverse != 0)
    return wins, product_hits, inverse_hits, violations
