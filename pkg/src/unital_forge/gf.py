"""Arithmetic in GF(p^n) with dense exp/log tables.

Elements are encoded as integers in base-p positional form: the element
with coefficient vector (a0, a1, ..., a_{n-1}) against the power basis
1, x, x^2, ... is encoded as a0 + a1*p + ... + a_{n-1}*p^(n-1).

The reducing modulus is the lexicographically smallest monic irreducible
polynomial of degree n over GF(p), ordering coefficient vectors constant
term first.  The canonical generator gamma is the element of smallest
encoding with multiplicative order p^n - 1.
"""
from __future__ import annotations

import os
import struct
from dataclasses import dataclass, field

from .errors import (
    CompositeCharacteristic,
    DivisionByZero,
    InvalidParameters,
    IoFailure,
    OddCharacteristicRequired,
    Overflow,
)

TABLE_BUDGET = 2 ** 20

_GFTB_MAGIC = b"GFTB"
_LOG_ZERO_SENTINEL = 0xFFFFFFFF


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _factorize(m: int) -> list[int]:
    """Distinct prime factors of m."""
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


# -- polynomial helpers; coefficient tuples over GF(p), constant term first --


def _poly_mul_mod(a, b, modulus, p):
    n = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for k, bk in enumerate(b):
            prod[i + k] = (prod[i + k] + ai * bk) % p
    # reduce by the monic modulus
    for deg in range(len(prod) - 1, n - 1, -1):
        c = prod[deg]
        if c == 0:
            continue
        prod[deg] = 0
        for k in range(n):
            prod[deg - n + k] = (prod[deg - n + k] - c * modulus[k]) % p
    return tuple(prod[:n] + [0] * (n - len(prod)))


def _poly_divides(d, a, p):
    """True when monic d divides a over GF(p)."""
    rem = list(a)
    dd = len(d) - 1
    while len(rem) - 1 >= dd:
        c = rem[-1]
        if c != 0:
            shift = len(rem) - 1 - dd
            for k in range(len(d)):
                rem[shift + k] = (rem[shift + k] - c * d[k]) % p
        rem.pop()
        while len(rem) > dd and rem and rem[-1] == 0:
            rem.pop()
    return all(c == 0 for c in rem)


def _monic_polys(p, deg):
    coeffs = [0] * deg
    while True:
        yield tuple(coeffs) + (1,)
        i = 0
        while i < deg:
            coeffs[i] += 1
            if coeffs[i] < p:
                break
            coeffs[i] = 0
            i += 1
        else:
            return


def _is_irreducible(poly, p):
    n = len(poly) - 1
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        for cand in _monic_polys(p, d):
            if _poly_divides(cand, poly, p):
                return False
    return True


def canonical_modulus(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree n over GF(p)."""
    if n == 1:
        return (0, 1)
    coeffs = [0] * n
    # ascending lexicographic order on (c0, c1, ..., c_{n-1})
    def bump(idx):
        while idx >= 0:
            coeffs[idx] += 1
            if coeffs[idx] < p:
                return True
            coeffs[idx] = 0
            idx -= 1
        return False

    while True:
        cand = tuple(coeffs) + (1,)
        if _is_irreducible(cand, p):
            return cand
        if not bump(n - 1):
            raise InvalidParameters(f"no irreducible of degree {n} over GF({p})")


@dataclass
class Field:
    """GF(p^n) with full exp/log tables."""

    p: int
    n: int
    q: int
    modulus: tuple[int, ...]
    gamma: int
    exp: list[int]
    log: list[int]
    neg_table: list[int] = field(repr=False, default=None)
    add_table: list[list[int]] = field(repr=False, default=None)

    def __post_init__(self):
        if self.neg_table is None:
            self.neg_table = [_neg_digits(self, x) for x in range(self.q)]
        if self.add_table is None and self.q <= 4096:
            self.add_table = [
                [_add_digits(self, x, y) for y in range(self.q)]
                for x in range(self.q)
            ]

    def coeffs(self, x: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            out.append(x % self.p)
            x //= self.p
        return tuple(out)

    def encode(self, coeffs) -> int:
        x = 0
        for c in reversed(coeffs):
            x = x * self.p + (c % self.p)
        return x


def _add_digits(F: Field, x: int, y: int) -> int:
    out = 0
    mult = 1
    for _ in range(F.n):
        out += ((x + y) % F.p) * mult
        x //= F.p
        y //= F.p
        mult *= F.p
    return out


def _neg_digits(F: Field, x: int) -> int:
    out = 0
    mult = 1
    for _ in range(F.n):
        out += ((-x) % F.p) * mult
        x //= F.p
        mult *= F.p
    return out


def _poly_order_ok(enc, F_mod, p, n, q, prime_factors):
    """True when enc has full multiplicative order q-1."""
    coeffs = []
    e = enc
    for _ in range(n):
        coeffs.append(e % p)
        e //= p
    base = tuple(coeffs)
    one = (1,) + (0,) * (n - 1)
    for ell in prime_factors:
        if _poly_pow(base, (q - 1) // ell, F_mod, p, n) == one:
            return False
    return True


def _poly_pow(base, k, modulus, p, n):
    result = (1,) + (0,) * (n - 1)
    b = base
    while k:
        if k & 1:
            result = _poly_mul_mod(result, b, modulus, p)
        b = _poly_mul_mod(b, b, modulus, p)
        k >>= 1
    return result


def build_field(p: int, n: int, cache_dir: str | None = None) -> Field:
    """Construct GF(p^n); optionally round-trip tables through a GFTB cache."""
    if not _is_prime(p):
        raise CompositeCharacteristic(p)
    if n < 1:
        raise InvalidParameters(f"extension degree must be positive, got {n}")
    q = p ** n
    if q > TABLE_BUDGET:
        raise Overflow("field", q, TABLE_BUDGET)
    modulus = canonical_modulus(p, n)

    if cache_dir is not None:
        cached = _read_cache(cache_dir, p, n, modulus, q)
        if cached is not None:
            gamma, exp, log = cached
            return Field(p, n, q, modulus, gamma, exp, log)

    prime_factors = _factorize(q - 1)
    gamma = None
    for cand in range(1, q):
        if _poly_order_ok(cand, modulus, p, n, q, prime_factors):
            gamma = cand
            break
    if gamma is None:
        raise InvalidParameters(f"no primitive element found in GF({p}^{n})")

    gamma_coeffs = []
    e = gamma
    for _ in range(n):
        gamma_coeffs.append(e % p)
        e //= p
    gamma_coeffs = tuple(gamma_coeffs)

    exp = [0] * (q - 1)
    log = [-1] * q
    cur = (1,) + (0,) * (n - 1)
    for k in range(q - 1):
        enc = 0
        for c in reversed(cur):
            enc = enc * p + c
        exp[k] = enc
        log[enc] = k
        cur = _poly_mul_mod(cur, gamma_coeffs, modulus, p)

    F = Field(p, n, q, modulus, gamma, exp, log)
    if cache_dir is not None:
        _write_cache(cache_dir, F)
    return F


# -- GFTB cache: little-endian binary, a pure accelerator ---------------------


def _cache_path(cache_dir: str, p: int, n: int) -> str:
    return os.path.join(cache_dir, f"gftb_{p}_{n}.bin")


def _write_cache(cache_dir: str, F: Field) -> str:
    path = _cache_path(cache_dir, F.p, F.n)
    try:
        os.makedirs(cache_dir, exist_ok=True)
        with open(path, "wb") as fh:
            fh.write(struct.pack("<4sII", _GFTB_MAGIC, F.p, F.n))
            fh.write(struct.pack(f"<{F.n + 1}I", *F.modulus))
            fh.write(struct.pack(f"<{F.q - 1}I", *F.exp))
            logs = [
                _LOG_ZERO_SENTINEL if v < 0 else v for v in F.log
            ]
            fh.write(struct.pack(f"<{F.q}I", *logs))
    except OSError as e:
        raise IoFailure(path, str(e))
    return path


def _read_cache(cache_dir: str, p: int, n: int, modulus, q: int):
    """Load and validate cached tables; any defect means silent recompute."""
    path = _cache_path(cache_dir, p, n)
    if not os.path.isfile(path):
        return None
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError:
        return None
    need = 12 + 4 * (n + 1) + 4 * (q - 1) + 4 * q
    if len(data) != need:
        return None
    magic, fp, fn = struct.unpack_from("<4sII", data, 0)
    if magic != _GFTB_MAGIC or fp != p or fn != n:
        return None
    off = 12
    mod = struct.unpack_from(f"<{n + 1}I", data, off)
    off += 4 * (n + 1)
    if tuple(mod) != tuple(modulus):
        return None
    exp = list(struct.unpack_from(f"<{q - 1}I", data, off))
    off += 4 * (q - 1)
    raw_log = struct.unpack_from(f"<{q}I", data, off)
    log = [-1 if v == _LOG_ZERO_SENTINEL else v for v in raw_log]
    # structural validation: tables must be mutually inverse bijections
    if exp[0] != 1 or any(not (0 < v < q) for v in exp):
        return None
    if log[0] != -1:
        return None
    seen = set(exp)
    if len(seen) != q - 1:
        return None
    for k, enc in enumerate(exp):
        if log[enc] != k:
            return None
    gamma = exp[1] if q > 2 else 1
    return gamma, exp, log


# -- element operations -------------------------------------------------------


def add(F: Field, x: int, y: int) -> int:
    if F.add_table is not None:
        return F.add_table[x][y]
    return _add_digits(F, x, y)


def neg(F: Field, x: int) -> int:
    return F.neg_table[x]


def sub(F: Field, x: int, y: int) -> int:
    return add(F, x, F.neg_table[y])


def mul(F: Field, x: int, y: int) -> int:
    if x == 0 or y == 0:
        return 0
    return F.exp[(F.log[x] + F.log[y]) % (F.q - 1)]


def inv(F: Field, x: int) -> int:
    if x == 0:
        raise DivisionByZero("field inverse")
    return F.exp[(-F.log[x]) % (F.q - 1)]


def pow(F: Field, x: int, k: int) -> int:
    """Square-and-multiply power; negative k inverts first."""
    if k < 0:
        return pow(F, inv(F, x), -k)
    if x == 0:
        return 1 if k == 0 else 0
    result = 1
    base = x
    while k:
        if k & 1:
            result = mul(F, result, base)
        base = mul(F, base, base)
        k >>= 1
    return result


def frob(F: Field, x: int, i: int = 1) -> int:
    """Frobenius power x^(p^i)."""
    if x == 0:
        return 0
    return F.exp[(F.log[x] * (F.p ** (i % F.n))) % (F.q - 1)]


def is_square(F: Field, x: int) -> bool:
    """Squareness in GF(q); zero counts as a square by convention.

    The zero convention is quarantined here: coset bookkeeping elsewhere
    only ever asks about nonzero elements.
    """
    if x == 0:
        return True
    if F.p == 2:
        return True
    return F.log[x] % 2 == 0


def subfield_order(F: Field) -> int:
    if F.n % 2 != 0:
        raise InvalidParameters(f"GF({F.p}^{F.n}) has no index-2 subfield")
    return F.p ** (F.n // 2)


def trace(F: Field, x: int) -> int:
    """Relative trace onto the index-2 subfield: x + x^s."""
    s = subfield_order(F)
    return add(F, x, pow(F, x, s))


def norm(F: Field, x: int) -> int:
    """Relative norm onto the index-2 subfield: x^(s+1)."""
    s = subfield_order(F)
    return pow(F, x, s + 1)


def in_subfield(F: Field, x: int, m: int | None = None) -> bool:
    """Membership in the subfield of order m (default: index-2 subfield)."""
    if m is None:
        m = subfield_order(F)
    return pow(F, x, m) == x


def subfield_elements(F: Field, m: int | None = None) -> list[int]:
    """Encodings of the subfield of order m, ascending."""
    if m is None:
        m = subfield_order(F)
    if (F.q - 1) % (m - 1) != 0:
        raise InvalidParameters(f"no subfield of order {m} in GF({F.q})")
    step = (F.q - 1) // (m - 1)
    out = [0] + [F.exp[k * step] for k in range(m - 1)]
    out.sort()
    if any(pow(F, x, m) != x for x in out):
        raise InvalidParameters(f"subfield of order {m} failed closure check")
    return out


def constants(F: Field) -> dict:
    """Canonical gamma, epsilon, beta for a degree-2 extension.

    epsilon = gamma^((s+1)/2) has trace zero; beta = gamma^(s+1) generates
    the subfield's multiplicative group and is a non-square there.
    """
    if F.p == 2:
        raise OddCharacteristicRequired(F.p)
    s = subfield_order(F)
    eps = F.exp[(s + 1) // 2]
    beta = F.exp[s + 1]
    if trace(F, eps) != 0:
        raise InvalidParameters("epsilon must have trace zero")
    if mul(F, eps, eps) != beta:
        raise InvalidParameters("epsilon^2 must equal beta")
    if pow(F, beta, (s - 1) // 2) != F.neg_table[1]:
        raise InvalidParameters("beta must be a non-square of the subfield")
    return {"gamma": F.gamma, "epsilon": eps, "beta": beta}


def element_str(F: Field, x: int) -> str:
    """Render as a polynomial in i, e.g. '1+2i' in GF(9)."""
    if x == 0:
        return "0"
    parts = []
    for k, c in enumerate(F.coeffs(x)):
        if c == 0:
            continue
        if k == 0:
            parts.append(str(c))
        else:
            sym = "i" if k == 1 else f"i^{k}"
            parts.append(sym if c == 1 else f"{c}{sym}")
    return "+".join(parts)


def parse_element(F: Field, text: str) -> int:
    """Inverse of element_str for simple inputs; also accepts raw encodings."""
    t = text.strip().replace(" ", "")
    if t.isdigit():
        v = int(t)
        if v >= F.q:
            raise InvalidParameters(f"encoding {v} out of range for GF({F.q})")
        return v
    coeffs = [0] * F.n
    for part in t.split("+"):
        if not part:
            raise InvalidParameters(f"cannot parse element {text!r}")
        try:
            if "i" in part:
                head, _, tail = part.partition("i")
                k = 1
                if tail.startswith("^"):
                    k = int(tail[1:])
                elif tail:
                    raise ValueError(tail)
                c = int(head) if head else 1
            else:
                k, c = 0, int(part)
        except ValueError:
            raise InvalidParameters(f"cannot parse element {text!r}")
        if k >= F.n:
            raise InvalidParameters(f"term degree {k} out of range in {text!r}")
        coeffs[k] = (coeffs[k] + c) % F.p
    return F.encode(coeffs)
