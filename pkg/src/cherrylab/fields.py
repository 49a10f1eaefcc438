"""Small finite fields as explicit addition/multiplication tables."""

from __future__ import annotations

from dataclasses import dataclass

# (characteristic, degree) -> low-order coefficients of a monic irreducible
# polynomial, e.g. x^2 + x + 1 is stored as (1, 1) for x^2 = -(1 + x).
_IRREDUCIBLE = {
    (2, 2): (1, 1),      # x^2 + x + 1
    (2, 3): (1, 1, 0),   # x^3 + x + 1
    (3, 2): (1, 0),      # x^2 + 1
}

SUPPORTED_ORDERS = (2, 3, 4, 5, 7, 8, 9, 11, 13)


class FieldError(ValueError):
    pass


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            e, x = 0, q
            while x % p == 0:
                x //= p
                e += 1
            if x != 1:
                raise FieldError(f"{q} is not a prime power")
            return p, e
    raise FieldError(f"{q} is not a prime power")


@dataclass(frozen=True)
class FieldTable:
    """GF(q) with elements ``0..q-1``; 0 and 1 are the field's zero and one.

    Element ``x`` of GF(p^e) is the polynomial whose base-``p`` digits of ``x``
    are its coefficients, lowest degree first.
    """

    q: int
    p: int
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]

    def neg(self, x: int) -> int:
        return self.add[x].index(0)

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.mul[x].index(1)


def _digits(x: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        out.append(x % p)
        x //= p
    return out


def _undigits(ds: list[int], p: int) -> int:
    return sum(d * p**i for i, d in enumerate(ds))


def _poly_mul(a: list[int], b: list[int], p: int, e: int, low: tuple[int, ...]) -> list[int]:
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    # reduce x^d for d >= e using x^e = -(low[0] + low[1] x + ...)
    for d in range(2 * e - 2, e - 1, -1):
        coef = prod[d]
        if coef:
            prod[d] = 0
            for i, l in enumerate(low):
                prod[d - e + i] = (prod[d - e + i] - coef * l) % p
    return prod[:e]


def field_table(q: int) -> FieldTable:
    """Build and verify GF(q) for a supported order ``q``."""
    if q not in SUPPORTED_ORDERS:
        raise FieldError(f"unsupported field order {q}; supported: {SUPPORTED_ORDERS}")
    p, e = _prime_power(q)
    if e == 1:
        add = tuple(tuple((x + y) % p for y in range(q)) for x in range(q))
        mul = tuple(tuple((x * y) % p for y in range(q)) for x in range(q))
    else:
        low = _IRREDUCIBLE[(p, e)]
        ds = [_digits(x, p, e) for x in range(q)]
        add = tuple(tuple(_undigits([(a + b) % p for a, b in zip(ds[x], ds[y])], p) for y in range(q))
                    for x in range(q))
        mul = tuple(tuple(_undigits(_poly_mul(ds[x], ds[y], p, e, low), p) for y in range(q))
                    for x in range(q))
    F = FieldTable(q, p, add, mul)
    verify_field(F)
    return F


def verify_field(F: FieldTable) -> None:
    """Exhaustively check the field axioms; raises FieldError on failure."""
    q, add, mul = F.q, F.add, F.mul
    R = range(q)
    for x in R:
        if add[0][x] != x or mul[1][x] != x or mul[0][x] != 0:
            raise FieldError(f"identity fails at {x}")
        if 0 not in add[x]:
            raise FieldError(f"{x} has no additive inverse")
        if x and 1 not in mul[x]:
            raise FieldError(f"{x} has no multiplicative inverse")
        for y in R:
            if add[x][y] != add[y][x] or mul[x][y] != mul[y][x]:
                raise FieldError("commutativity fails")
            for z in R:
                if add[add[x][y]][z] != add[x][add[y][z]]:
                    raise FieldError("additive associativity fails")
                if mul[mul[x][y]][z] != mul[x][mul[y][z]]:
                    raise FieldError("multiplicative associativity fails")
                if mul[x][add[y][z]] != add[mul[x][y]][mul[x][z]]:
                    raise FieldError("distributivity fails")
