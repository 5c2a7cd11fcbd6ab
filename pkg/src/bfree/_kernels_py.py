"""Pure-Python fallback for the enumeration kernels.

Same contracts as the compiled module ``bfree._kernels``: depth-first search
over admissible words carrying one occupied-residue bitmask per constraining
element, pruned as soon as some modulus has every residue class occupied.
Budget exhaustion returns ``None``; the wrappers in ``bfree.words`` and
``bfree.thermo`` translate that into an error.
"""

from __future__ import annotations

import math

BACKEND_NAME = "python"


def _exp2(x: float) -> float:
    return math.pow(2.0, x)


_MAX_N = 64


def count_words(n: int, bs: list[int], max_nodes: int) -> int | None:
    """Count admissible words of length n; None if the node budget is hit."""
    if n < 1 or n > _MAX_N - 1:
        raise ValueError(f"kernel supports 1 <= n <= {_MAX_N - 1}")
    bs = [b for b in bs if b <= n]
    k_n = len(bs)
    full = [(1 << b) - 1 for b in bs]
    bits_at = [[1 << (i % b) for b in bs] for i in range(n)]
    masks = [0] * k_n
    nodes = 0

    def rec(i: int) -> int:
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            return -1
        if i == n:
            return 1
        total = rec(i + 1)
        if total < 0:
            return -1
        row = bits_at[i]
        changed = []
        ok = True
        for k in range(k_n):
            bit = row[k]
            m = masks[k]
            if not (m & bit):
                if (m | bit) == full[k]:
                    ok = False
                    break
                masks[k] = m | bit
                changed.append(k)
        if ok:
            sub = rec(i + 1)
            if sub < 0:
                for k in changed:
                    masks[k] ^= bits_at[i][k]
                return -1
            total += sub
        for k in changed:
            masks[k] ^= bits_at[i][k]
        return total

    out = rec(0)
    return None if out < 0 else out


def partition_stats(
    n: int,
    bs: list[int],
    v00: float,
    v01: float,
    v10: float,
    v11: float,
    max_nodes: int,
) -> tuple[float, float] | None:
    """(log2 of sum over admissible words of 2**sup-Birkhoff, max sup-Birkhoff).

    The sup over infinite continuations of a length-n word adds one symbol
    past the right edge, so masks track elements up to n+1 and each leaf adds
    the best admissible extension value.
    """
    if n < 1 or n > _MAX_N - 1:
        raise ValueError(f"kernel supports 1 <= n <= {_MAX_N - 1}")
    bs = [b for b in bs if b <= n + 1]
    k_n = len(bs)
    full = [(1 << b) - 1 for b in bs]
    bits_at = [[1 << (i % b) for b in bs] for i in range(n + 1)]
    masks = [0] * k_n
    v = ((v00, v01), (v10, v11))
    state = {"nodes": 0, "m": -math.inf, "acc": 0.0, "c": 0.0, "best": -math.inf}

    def leaf(last: int, bsum: float) -> None:
        ext = v[last][0]
        row = bits_at[n]
        for k in range(k_n):
            m = masks[k]
            bit = row[k]
            if not (m & bit) and (m | bit) == full[k]:
                break
        else:
            ext = max(ext, v[last][1])
        x = bsum + ext
        if x > state["best"]:
            state["best"] = x
        m = state["m"]
        if x <= m:
            y = _exp2(x - m) - state["c"]
            t = state["acc"] + y
            state["c"] = (t - state["acc"]) - y
            state["acc"] = t
        else:
            if state["acc"] > 0.0:
                scale = _exp2(m - x)
                state["acc"] *= scale
                state["c"] *= scale
            y = 1.0 - state["c"]
            t = state["acc"] + y
            state["c"] = (t - state["acc"]) - y
            state["acc"] = t
            state["m"] = x

    def rec(i: int, last: int, bsum: float) -> bool:
        state["nodes"] += 1
        if state["nodes"] > max_nodes:
            return False
        if i == n:
            leaf(last, bsum)
            return True
        nb0 = bsum + v[last][0] if i > 0 else 0.0
        if not rec(i + 1, 0, nb0):
            return False
        row = bits_at[i]
        changed = []
        ok = True
        for k in range(k_n):
            bit = row[k]
            m = masks[k]
            if not (m & bit):
                if (m | bit) == full[k]:
                    ok = False
                    break
                masks[k] = m | bit
                changed.append(k)
        if ok:
            nb1 = bsum + v[last][1] if i > 0 else 0.0
            good = rec(i + 1, 1, nb1)
            for k in changed:
                masks[k] ^= bits_at[i][k]
            if not good:
                return False
        else:
            for k in changed:
                masks[k] ^= bits_at[i][k]
        return True

    if not rec(0, 0, 0.0):
        return None
    log2_z = state["m"] + math.log2(state["acc"])
    return log2_z, state["best"]


def _lex_less(a: int, b: int, n: int) -> bool:
    """Word-lexicographic order on position masks (bit j = position j)."""
    for j in range(n):
        x = (a >> j) & 1
        y = (b >> j) & 1
        if x != y:
            return x < y
    return False


def max_ones_exact(n: int, bs: list[int], max_nodes: int) -> tuple[int, int] | None:
    """Maximize the free-set size over one residue class choice per element.

    Returns (count, witness mask); the witness has ones exactly on the free
    set and ties are broken toward the lexicographically smallest word.
    """
    if n < 1 or n > _MAX_N:
        raise ValueError(f"kernel supports 1 <= n <= {_MAX_N}")
    bs = [b for b in bs if b <= n]
    k_n = len(bs)
    window = (1 << n) - 1
    class_masks = []
    for b in bs:
        row = []
        for r in range(b):
            m = 0
            for j in range(r, n, b):
                m |= 1 << j
            row.append(m)
        class_masks.append(row)
    best = [-1, 0]
    nodes = 0

    def rec(k: int, free: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            return False
        cnt = free.bit_count()
        if cnt < best[0]:
            return True
        if k == k_n:
            if cnt > best[0] or (cnt == best[0] and _lex_less(free, best[1], n)):
                best[0] = cnt
                best[1] = free
            return True
        for cm in class_masks[k]:
            if not rec(k + 1, free & ~cm):
                return False
        return True

    if not rec(0, window):
        return None
    return best[0], best[1]
