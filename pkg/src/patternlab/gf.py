"""Exact arithmetic in GF(q) for odd prime powers q = p^m.

Elements are stored by their integer code ``sum(c_i * p**i)`` where ``c_i`` are
the coefficients (low-to-high) of the representative polynomial modulo the
field's irreducible modulus.  For prime fields the code is the residue itself.

>>> F = make_field(7)
>>> F(3) * F(2).inv()
GF(7)(5)
>>> F(2).sqrt()
GF(7)(3)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterator, Optional, Sequence

SQRT_TABLE_LIMIT = 1 << 16


class FieldError(ValueError):
    """Raised for invalid field descriptions or illegal field operations."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, m)`` with ``q == p**m``; raise if q is not a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = next(d for d in itertools.count(2) if q % d == 0)
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, m


def odd_prime_powers(limit: int) -> list[int]:
    out = []
    for q in range(3, limit + 1, 2):
        try:
            prime_power(q)
        except FieldError:
            continue
        out.append(q)
    return out


# --- polynomials over GF(p), coefficient lists low-to-high -----------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        coef = a[-1] * inv_lead % p
        for i, c in enumerate(b):
            a[i + shift] = (a[i + shift] - coef * c) % p
        _trim(a)
    return a


def _monic_polys(p: int, degree: int) -> Iterator[list[int]]:
    # low-to-high coefficient lists in lexicographic order
    for tail in itertools.product(range(p), repeat=degree):
        yield list(tail) + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _trim([c % p for c in poly])
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for g in _monic_polys(p, d):
            if not _poly_mod(poly, g, p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> list[int]:
    """Lexicographically smallest (low-to-high list) monic irreducible of degree m."""
    for poly in _monic_polys(p, m):
        if is_irreducible(poly, p):
            return poly
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")  # pragma: no cover


# --- fields ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FieldSpec:
    """The field GF(p^m) built on a fixed monic irreducible ``modulus``."""

    p: int
    m: int
    modulus: tuple[int, ...]
    q: int = dc_field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p**self.m)

    def __eq__(self, other):
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m}, modulus={list(self.modulus)})"

    def __call__(self, value) -> "FieldElement":
        """Coerce an int (the constant ``value * 1``), a coefficient list, or
        an element of this field.  Use :meth:`element` for integer codes."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            return self.from_coeffs(value)
        return FieldElement(self, int(value) % self.p)

    def element(self, code: int) -> "FieldElement":
        code = int(code)
        if not 0 <= code < self.q:
            raise FieldError(f"element code {code} out of range for {self!r}")
        return FieldElement(self, code)

    def from_coeffs(self, coeffs: Sequence[int]) -> "FieldElement":
        coeffs = list(coeffs)
        if len(coeffs) > self.m:
            coeffs = _poly_mod(coeffs, self.modulus, self.p)
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + (int(c) % self.p)
        return FieldElement(self, code)

    def coeffs_of(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            code, c = divmod(code, self.p)
            out.append(c)
        return tuple(out)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, v) for v in range(self.q)]

    # integer-code arithmetic; the FieldElement operators are thin wrappers

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        p, out, scale = self.p, 0, 1
        for _ in range(self.m):
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            out += ((x + y) % p) * scale
            scale *= p
        return out

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        p, out, scale = self.p, 0, 1
        for _ in range(self.m):
            a, x = divmod(a, p)
            out += ((-x) % p) * scale
            scale *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        log, exp = self._log_tables
        return exp[(log[a] + log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.m == 1:
            return pow(a, -1, self.p)
        log, exp = self._log_tables
        return exp[(-log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.m == 1:
            return pow(a, e, self.p)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def _poly_mul_code(self, a: int, b: int) -> int:
        prod = [0] * (2 * self.m)
        ca, cb = self.coeffs_of(a), self.coeffs_of(b)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        return self.from_coeffs(_poly_mod(prod, self.modulus, self.p)).value

    def _poly_pow_code(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._poly_mul_code(result, a)
            a = self._poly_mul_code(a, a)
            e >>= 1
        return result

    @cached_property
    def _log_tables(self) -> tuple[list[int], list[int]]:
        order = self.q - 1
        factors = [d for d in range(2, order + 1) if order % d == 0 and is_prime(d)]
        g = next(
            g for g in range(2, self.q)
            if all(self._poly_pow_code(g, order // f) != 1 for f in factors)
        )
        exp = [1]
        for _ in range(order - 1):
            exp.append(self._poly_mul_code(exp[-1], g))
        log = [0] * self.q
        for i, v in enumerate(exp):
            log[v] = i
        return log, exp

    @cached_property
    def _root_table(self) -> dict[int, tuple[int, ...]]:
        if self.q > SQRT_TABLE_LIMIT:
            raise FieldError(f"square-root table limited to q <= {SQRT_TABLE_LIMIT}")
        roots: dict[int, list[int]] = {}
        for b in range(self.q):
            roots.setdefault(self.mul(b, b), []).append(b)
        return {
            a: tuple(sorted(rs, key=self.coeffs_of)) for a, rs in roots.items()
        }

    def is_square(self, a: int) -> bool:
        if a == 0:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def square_roots(self, a: int) -> tuple[int, ...]:
        """All square roots of ``a``, canonical (lexicographically smallest) first."""
        return self._root_table.get(a, ())

    def to_json(self) -> dict:
        out = {"p": self.p, "m": self.m}
        if self.m > 1:
            out["modulus"] = list(self.modulus)
        return out


def make_field(p: int, m: int = 1, modulus: Optional[Sequence[int]] = None) -> FieldSpec:
    """Build and validate GF(p^m).

    Without ``modulus`` the smallest monic irreducible of degree ``m`` is used,
    so the same arguments always give the same field.
    """
    if m is None or m < 1:
        raise FieldError(f"extension degree must be >= 1, got {m}")
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if p == 2:
        raise FieldError("characteristic 2 is not supported (q must be odd)")
    if m == 1:
        if modulus is not None and len(_trim([c % p for c in modulus])) != 2:
            raise FieldError("modulus for a prime field must have degree 1")
        return FieldSpec(p, 1, (0, 1))
    if modulus is None:
        modulus = smallest_irreducible(p, m)
    modulus = [int(c) % p for c in modulus]
    if len(_trim(list(modulus))) != m + 1 or modulus[-1] != 1:
        raise FieldError(f"modulus must be monic of degree {m}")
    if not is_irreducible(modulus, p):
        raise FieldError(f"modulus {modulus} is reducible over GF({p})")
    return FieldSpec(p, m, tuple(modulus))


def field_of_order(q: int, modulus: Optional[Sequence[int]] = None) -> FieldSpec:
    p, m = prime_power(q)
    return make_field(p, m, modulus)


def field_from_json(obj: dict) -> FieldSpec:
    return make_field(int(obj["p"]), int(obj.get("m", 1)), obj.get("modulus"))


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs_of(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("field mismatch")
            return other.value
        if isinstance(other, int):
            return self.field(other).value
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.sub(b, self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.div(b, self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        if self.field.m == 1:
            return f"{self.field!r}({self.value})"
        return f"{self.field!r}({list(self.coeffs)})"

    def inv(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def is_square(self) -> bool:
        return self.field.is_square(self.value)

    def sqrt(self) -> Optional["FieldElement"]:
        roots = self.field.square_roots(self.value)
        return FieldElement(self.field, roots[0]) if roots else None

    def square_roots(self) -> tuple["FieldElement", ...]:
        return tuple(FieldElement(self.field, r) for r in self.field.square_roots(self.value))

    def to_json(self):
        return self.value if self.field.m == 1 else list(self.coeffs)


ARITH_KINDS = ("add", "sub", "mul", "div")


def arith(a: FieldElement, b: FieldElement, kind: str) -> FieldElement:
    if a.field != b.field:
        raise FieldError("field mismatch")
    if kind not in ARITH_KINDS:
        raise FieldError(f"unknown operation {kind!r}")
    if kind == "div" and b.value == 0:
        raise ZeroDivisionError("division by zero")
    return FieldElement(a.field, getattr(a.field, kind)(a.value, b.value))


def inv(a: FieldElement) -> FieldElement:
    return a.inv()


def power(a: FieldElement, e: int) -> FieldElement:
    if e < 0:
        raise FieldError("exponent must be nonnegative")
    return a**e


def is_square(a: FieldElement) -> bool:
    return a.is_square()


def sqrt(a: FieldElement) -> Optional[FieldElement]:
    return a.sqrt()
