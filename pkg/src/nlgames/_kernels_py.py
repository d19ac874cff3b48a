"""Pure-Python kernels. Same API and results as the compiled ``_kernels``.

Codes shared with the compiled module:

* games: 1, 2, 3
* questions: 0 = X, 1 = XBAR
* player kinds: 0 uniform random, 1 quantum (shared pair), 2 fixed map
* quantum table: [P(a=+1), P(b=+1 | a=+1), P(b=+1 | a=-1), P(b=+1) unmeasured pair]
"""
import numpy as np

UNIFORM, QUANTUM, FIXED = 0, 1, 2


def enumerate_wins(game, n):
    """Count winning answer tuples among all 4**n of them.

    Bit 2i of the tuple index is Alice's round-i answer, bit 2i+1 Bob's;
    a set bit means -1.
    """
    if game not in (1, 2, 3):
        raise ValueError(f"unknown game {game}")
    wins = 0
    for mask in range(1 << (2 * n)):
        total = 0
        product = 1
        inverse = True
        for i in range(n):
            a = -1 if (mask >> (2 * i)) & 1 else 1
            b = -1 if (mask >> (2 * i + 1)) & 1 else 1
            total += a + b
            product *= a * b
            if b != -a:
                inverse = False
        if game == 1:
            wins += total == 0
        elif game == 2:
            wins += product == 1
        else:
            wins += product == 1 and inverse
    return wins


def _answer(kind, u, q, fixed, p_plus):
    if kind == UNIFORM:
        return 1 if u < 0.5 else -1
    if kind == QUANTUM:
        return 1 if u < p_plus else -1
    return fixed[q]


def play_rounds(q_a, q_b, u_a, u_b, kind_a, kind_b, fixed_a, fixed_b, table, out_a, out_b):
    """Fill ``out_a``/``out_b`` (int8, trials x rounds) with the players' answers."""
    qa, qb, ua, ub = q_a.tolist(), q_b.tolist(), u_a.tolist(), u_b.tolist()
    fa, fb = [int(v) for v in fixed_a], [int(v) for v in fixed_b]
    p_first, p_after_plus, p_after_minus, p_alone = (float(v) for v in table)
    res_a = []
    res_b = []
    for t in range(len(qa)):
        row_a = []
        row_b = []
        for i in range(len(qa[t])):
            a = _answer(kind_a, ua[t][i], qa[t][i], fa, p_first)
            if kind_b == QUANTUM:
                if kind_a == QUANTUM:
                    p = p_after_plus if a == 1 else p_after_minus
                else:
                    p = p_alone
            else:
                p = 0.0
            b = _answer(kind_b, ub[t][i], qb[t][i], fb, p)
            row_a.append(a)
            row_b.append(b)
        res_a.append(row_a)
        res_b.append(row_b)
    out_a[...] = np.asarray(res_a, dtype=np.int8).reshape(out_a.shape)
    out_b[...] = np.asarray(res_b, dtype=np.int8).reshape(out_b.shape)


def score_rounds(game, q_a, q_b, a, b):
    """Return (wins, product_hits, inverse_hits, promise_violations) over trials.

    A trial breaking the promise counts only as a violation.
    """
    wins = product_hits = inverse_hits = violations = 0
    qa, qb, aa, bb = q_a.tolist(), q_b.tolist(), a.tolist(), b.tolist()
    for t in range(len(aa)):
        if game == 3 and any(x == y for x, y in zip(qa[t], qb[t])):
            violations += 1
            continue
        total = 0
        product = 1
        inverse = True
        for x, y in zip(aa[t], bb[t]):
            total += x + y
            product *= x * y
            if y != -x:
                inverse = False
        product_hits += product == 1
        inverse_hits += inverse
        if game == 1:
            wins += total == 0
        elif game == 2:
            wins += product == 1
        else:
            wins += product == 1 and inverse
    return wins, product_hits, inverse_hits, violations
