"""The all-ones polynomial h_k(X) = 1 + X + ... + X^k over GF(q)."""
from __future__ import annotations

from math import gcd

from . import gf
from .errors import CriterionMismatch, HypothesisFailed, LemmaViolation
from .nearfield import _prime_power

_FIELDS: dict[int, gf.Field] = {}


def _field(q: int) -> gf.Field:
    if q not in _FIELDS:
        p, e = _prime_power(q)
        _FIELDS[q] = gf.build_field(p, e)
    return _FIELDS[q]


def hk_eval(q: int, k: int, x: int) -> int:
    """Horner evaluation of h_k at x."""
    F = _field(q)
    acc = 1
    for _ in range(k):
        acc = F.add_table[gf.mul(F, acc, x)][1]
    return acc


def hk_eval_closed(q: int, k: int, x: int) -> int:
    """(x^(k+1) - 1) / (x - 1) for x != 1, and k+1 mod p at x = 1."""
    F = _field(q)
    if x == 1:
        return (k + 1) % F.p
    num = F.add_table[gf.pow(F, x, k + 1)][F.neg_table[1]]
    den = F.add_table[x][F.neg_table[1]]
    return gf.mul(F, num, gf.inv(F, den))


def hk_is_permutation(q: int, k: int) -> bool:
    """Permutation test, cross-checked against the congruence criterion.

    The exhaustive image count and the k = 1 mod p(q-1) criterion must
    agree; a mismatch is an internal bug, not a data-dependent outcome.
    """
    F = _field(q)
    if F.p == 2:
        raise HypothesisFailed("permutation criterion stated for odd q only")
    image = {hk_eval(q, k, x) for x in range(q)}
    by_count = len(image) == q
    by_criterion = k % (F.p * (q - 1)) == 1
    if by_count != by_criterion:
        raise CriterionMismatch(
            f"image count says {by_count}, congruence says {by_criterion}",
            witness={"q": q, "k": k, "image_size": len(image)})
    return by_count


def _lex_smallest_collision(q: int, k: int):
    """First pair c1 < c2 in GF(q) minus {0,1} with equal h_k images."""
    E = list(range(2, q))
    vals = {c: hk_eval(q, k, c) for c in E}
    for i, c1 in enumerate(E):
        for c2 in E[i + 1:]:
            if vals[c1] == vals[c2]:
                return (c1, c2)
    return None


def hk_value_set(q: int, k: int) -> dict:
    """Image-size analysis of h_k, with the degree bound when it applies.

    The bound clause requires deg = k <= q-1 and is reported as None
    otherwise rather than silently reducing the degree.
    """
    image = {hk_eval(q, k, x) for x in range(q)}
    wan_bound = None
    if 1 <= k <= q - 1:
        wan_bound = q - (q - 1 + k - 1) // k  # floor(q - (q-1)/k)
    return {
        "q": q,
        "k": k,
        "is_permutation": len(image) == q,
        "value_set_size": len(image),
        "wan_bound": wan_bound,
        "collision": _lex_smallest_collision(q, k),
    }


def hk_find_collision(q: int, k: int) -> tuple[int, int]:
    """Lexicographically smallest pair in GF(q) minus {0,1} with equal images."""
    if not (1 < k < q - 1):
        raise HypothesisFailed(f"k={k} outside (1, {q - 1})")
    if gcd(k, q - 1) != 1:
        raise HypothesisFailed(f"gcd({k}, {q - 1}) != 1")
    pair = _lex_smallest_collision(q, k)
    if pair is None:
        raise LemmaViolation(
            "no collision in the punctured domain", witness={"q": q, "k": k})
    return pair
