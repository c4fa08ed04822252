"""Exact arithmetic in the three supported coefficient fields.

The library computes over the rationals, over a prime field F_p, or over
the rational function field F_p(t).  The function field is the stand-in
for an infinite field of positive characteristic: several constructions
need to pick elements avoiding finitely many bad values, which is
impossible over F_p itself for large enough instances.

Every value is canonical (fractions fully reduced with positive
denominator, residues in 0..p-1, function-field elements reduced with
monic denominator), so equality of scalars is plain structural equality
and scalars can be used as dictionary keys.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import DivisionByZero, FieldMismatch, ParseError

RATIONALS = "rationals"
PRIME = "prime"
FUNCTION_FIELD = "function_field"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin, valid far beyond 64 bits of practical use
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# dense polynomials over F_p, as tuples of coefficients (low degree first)
# ---------------------------------------------------------------------------

def poly_trim(coeffs, p):
    c = [x % p for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_add(a, b, p):
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                      for i in range(n)], p)


def poly_neg(a, p):
    return tuple((-x) % p for x in a)


def poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return poly_trim(out, p)


def poly_divmod(a, b, p):
    if not b:
        raise DivisionByZero("polynomial division by zero")
    r = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    inv_lead = pow(b[-1], -1, p)
    for i in range(len(a) - len(b), -1, -1):
        coef = r[i + len(b) - 1] % p
        if coef == 0:
            continue
        coef = coef * inv_lead % p
        q[i] = coef
        for j, y in enumerate(b):
            r[i + j] = (r[i + j] - coef * y) % p
    return poly_trim(q, p), poly_trim(r, p)


def poly_gcd(a, b, p):
    while b:
        a, b = b, poly_divmod(a, b, p)[1]
    if a:
        inv_lead = pow(a[-1], -1, p)
        a = tuple(x * inv_lead % p for x in a)
    return a


def poly_to_str(a):
    """Sparse "c0+c1*t+c3*t^3" rendering; the zero polynomial is "0"."""
    if not a:
        return "0"
    terms = []
    for k, c in enumerate(a):
        if c == 0:
            continue
        if k == 0:
            terms.append(str(c))
        elif k == 1:
            terms.append(f"{c}*t")
        else:
            terms.append(f"{c}*t^{k}")
    return "+".join(terms)


_TERM_RE = re.compile(r"^(?:(\d+)\*?)?(t(?:\^(\d+))?)?$")


def poly_from_str(text, p):
    text = text.replace(" ", "")
    if text in ("", "0"):
        return ()
    coeffs = {}
    for term in text.split("+"):
        m = _TERM_RE.match(term)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ParseError(f"bad polynomial term {term!r}")
        c = int(m.group(1)) if m.group(1) is not None else 1
        if m.group(2) is None:
            k = 0
        elif m.group(3) is None:
            k = 1
        else:
            k = int(m.group(3))
        coeffs[k] = coeffs.get(k, 0) + c
    out = [0] * (max(coeffs) + 1)
    for k, c in coeffs.items():
        out[k] = c
    return poly_trim(out, p)


# ---------------------------------------------------------------------------
# fields and scalars
# ---------------------------------------------------------------------------

class Field:
    """Descriptor of a coefficient field: Q, F_p, or F_p(t)."""

    __slots__ = ("kind", "p")

    def __init__(self, kind, p=0):
        if kind not in (RATIONALS, PRIME, FUNCTION_FIELD):
            raise ParseError(f"unknown field kind {kind!r}")
        if kind != RATIONALS and not _is_prime(p):
            raise ParseError(f"{p} is not prime")
        self.kind = kind
        self.p = 0 if kind == RATIONALS else p

    @classmethod
    def rationals(cls) -> "Field":
        return cls(RATIONALS)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(PRIME, p)

    @classmethod
    def function_field(cls, p: int) -> "Field":
        return cls(FUNCTION_FIELD, p)

    @property
    def characteristic(self) -> int:
        return 0 if self.kind == RATIONALS else self.p

    @property
    def is_infinite(self) -> bool:
        return self.kind != PRIME

    def __eq__(self, other):
        return isinstance(other, Field) and (self.kind, self.p) == (other.kind, other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        if self.kind == RATIONALS:
            return "Field(Q)"
        if self.kind == PRIME:
            return f"Field(F_{self.p})"
        return f"Field(F_{self.p}(t))"

    # -- construction of elements ------------------------------------

    def scalar(self, value) -> "Scalar":
        """Coerce an int, Fraction, Scalar, or coefficient tuple pair."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatch(f"{value!r} is not in {self!r}")
            return value
        if self.kind == RATIONALS:
            return Scalar(self, Fraction(value))
        if self.kind == PRIME:
            if not isinstance(value, int):
                raise ParseError(f"cannot coerce {value!r} into {self!r}")
            return Scalar(self, value % self.p)
        if isinstance(value, int):
            num = poly_trim((value,), self.p)
            return Scalar(self, (num, (1,)))
        if isinstance(value, tuple) and len(value) == 2:
            return Scalar(self, _canonical_ratio(value[0], value[1], self.p))
        raise ParseError(f"cannot coerce {value!r} into {self!r}")

    def zero(self) -> "Scalar":
        return self.scalar(0)

    def one(self) -> "Scalar":
        return self.scalar(1)

    def t(self) -> "Scalar":
        if self.kind != FUNCTION_FIELD:
            raise ParseError("t only exists in a function field")
        return Scalar(self, ((0, 1), (1,)))

    def fraction(self, num: int, den: int) -> "Scalar":
        return self.scalar(Fraction(num, den)) if self.kind == RATIONALS \
            else self.scalar(num) / self.scalar(den)

    # -- sampling ------------------------------------------------------

    def sample(self, rng, size_bound: int) -> "Scalar":
        """Draw from a finite pool growing with size_bound, rng-deterministic."""
        if size_bound < 1:
            raise ParseError("size_bound must be >= 1")
        if self.kind == RATIONALS:
            return Scalar(self, Fraction(rng.randint(-size_bound, size_bound),
                                         rng.randint(1, size_bound)))
        if self.kind == PRIME:
            return Scalar(self, rng.randrange(self.p))
        deg_bound = min(size_bound, 1 + size_bound // 4)
        num = [rng.randrange(self.p) for _ in range(rng.randint(0, deg_bound) + 1)]
        den = [rng.randrange(self.p) for _ in range(rng.randint(0, deg_bound) + 1)]
        if not poly_trim(den, self.p):
            den = [1]
        return Scalar(self, _canonical_ratio(tuple(num), tuple(den), self.p))

    def sample_nonzero(self, rng, size_bound: int) -> "Scalar":
        while True:
            s = self.sample(rng, size_bound)
            if not s.is_zero():
                return s

    # -- serialization -------------------------------------------------

    def descriptor(self) -> dict:
        if self.kind == RATIONALS:
            return {"kind": RATIONALS}
        return {"kind": self.kind, "p": self.p}

    @classmethod
    def from_descriptor(cls, d: dict) -> "Field":
        kind = d.get("kind")
        if kind == RATIONALS:
            return cls.rationals()
        if kind in (PRIME, FUNCTION_FIELD):
            return cls(kind, int(d["p"]))
        raise ParseError(f"bad field descriptor {d!r}")

    @classmethod
    def from_flag(cls, flag: str) -> "Field":
        """Parse the CLI field flag: "q", "fp:P", or "fpt:P"."""
        if flag == "q":
            return cls.rationals()
        if flag.startswith("fp:"):
            return cls.prime(int(flag[3:]))
        if flag.startswith("fpt:"):
            return cls.function_field(int(flag[4:]))
        raise ParseError(f"bad field flag {flag!r} (expected q, fp:P, or fpt:P)")

    def flag(self) -> str:
        if self.kind == RATIONALS:
            return "q"
        return ("fp:" if self.kind == PRIME else "fpt:") + str(self.p)

    def from_literal(self, text: str) -> "Scalar":
        return parse_scalar(text, self)


def _canonical_ratio(num, den, p):
    num = poly_trim(num, p)
    den = poly_trim(den, p)
    if not den:
        raise DivisionByZero("zero denominator in function field element")
    if not num:
        return ((), (1,))
    g = poly_gcd(num, den, p)
    num = poly_divmod(num, g, p)[0]
    den = poly_divmod(den, g, p)[0]
    inv_lead = pow(den[-1], -1, p)
    num = tuple(x * inv_lead % p for x in num)
    den = tuple(x * inv_lead % p for x in den)
    return (num, den)


class Scalar:
    """An element of Q, F_p, or F_p(t), always in canonical form.

    Arithmetic accepts plain ints on either side, so formulas read
    naturally: 1 / (b * e**2), a - b + c, and so on.
    """

    __slots__ = ("field", "value", "_hash")

    def __init__(self, field: Field, value):
        self.field = field
        self.value = value
        self._hash = None

    # -- helpers -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.scalar(other)
        return NotImplemented

    def is_zero(self) -> bool:
        if self.field.kind == FUNCTION_FIELD:
            return not self.value[0]
        return self.value == 0

    def __bool__(self):
        return not self.is_zero()

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        k = self.field.kind
        if k == RATIONALS:
            return Scalar(self.field, self.value + other.value)
        if k == PRIME:
            return Scalar(self.field, (self.value + other.value) % self.field.p)
        p = self.field.p
        (n1, d1), (n2, d2) = self.value, other.value
        num = poly_add(poly_mul(n1, d2, p), poly_mul(n2, d1, p), p)
        return Scalar(self.field, _canonical_ratio(num, poly_mul(d1, d2, p), p))

    __radd__ = __add__

    def __neg__(self):
        k = self.field.kind
        if k == RATIONALS:
            return Scalar(self.field, -self.value)
        if k == PRIME:
            return Scalar(self.field, (-self.value) % self.field.p)
        return Scalar(self.field, (poly_neg(self.value[0], self.field.p), self.value[1]))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        k = self.field.kind
        if k == RATIONALS:
            return Scalar(self.field, self.value * other.value)
        if k == PRIME:
            return Scalar(self.field, (self.value * other.value) % self.field.p)
        p = self.field.p
        (n1, d1), (n2, d2) = self.value, other.value
        return Scalar(self.field,
                      _canonical_ratio(poly_mul(n1, n2, p), poly_mul(d1, d2, p), p))

    __rmul__ = __mul__

    def inv(self) -> "Scalar":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        k = self.field.kind
        if k == RATIONALS:
            return Scalar(self.field, 1 / self.value)
        if k == PRIME:
            return Scalar(self.field, pow(self.value, -1, self.field.p))
        num, den = self.value
        return Scalar(self.field, _canonical_ratio(den, num, self.field.p))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison and hashing ---------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            try:
                other = self.field.scalar(other)
            except (ParseError, FieldMismatch):
                return NotImplemented
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.field == other.field and self.value == other.value

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.value))
        return self._hash

    # -- rendering -----------------------------------------------------

    def literal(self) -> str:
        """Canonical literal, the syntax used by all file formats."""
        k = self.field.kind
        if k == RATIONALS:
            return str(self.value)
        if k == PRIME:
            return f"{self.value} mod {self.field.p}"
        num, den = self.value
        return f"({poly_to_str(num)})/({poly_to_str(den)}) over F_{self.field.p}[t]"

    def __str__(self):
        return self.literal()

    def __repr__(self):
        return f"Scalar({self.literal()})"


_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")
_PRIME_RE = re.compile(r"^(-?\d+)\s*mod\s*(\d+)$")
_FPT_RE = re.compile(r"^\(([^()]*)\)(?:/\(([^()]*)\))?\s*over\s*F_(\d+)\[t\]$")


def parse_scalar(text: str, field: Field | None = None) -> Scalar:
    """Parse a scalar literal, optionally checking it lands in `field`.

    Syntax: rationals "p/q" or "n"; prime-field "k mod p"; function-field
    "(num)/(den) over F_p[t]" with polynomials like "c0+c1*t+c3*t^3".
    """
    text = text.strip()
    m = _FPT_RE.match(text)
    if m:
        p = int(m.group(3))
        f = Field.function_field(p)
        num = poly_from_str(m.group(1), p)
        den = poly_from_str(m.group(2), p) if m.group(2) is not None else (1,)
        s = Scalar(f, _canonical_ratio(num, den, p))
    else:
        m = _PRIME_RE.match(text)
        if m:
            f = Field.prime(int(m.group(2)))
            s = f.scalar(int(m.group(1)))
        else:
            m = _RATIONAL_RE.match(text)
            if not m:
                raise ParseError(f"bad scalar literal {text!r}")
            num = int(m.group(1))
            den = int(m.group(2)) if m.group(2) else 1
            if field is not None and field.kind != RATIONALS:
                # integer literals are allowed in any field
                return field.scalar(num) / field.scalar(den)
            if den == 0:
                raise DivisionByZero("zero denominator")
            s = Field.rationals().scalar(Fraction(num, den))
    if field is not None and s.field != field:
        raise FieldMismatch(f"literal {text!r} is not in {field!r}")
    return s


def specialize(s: Scalar, t0: Scalar) -> Scalar:
    """Evaluate a function-field element at t = t0 in F_p.

    Raises DivisionByZero when the denominator vanishes at t0.
    """
    if s.field.kind != FUNCTION_FIELD:
        raise FieldMismatch("specialize expects a function-field element")
    p = s.field.p
    fp = Field.prime(p)
    t0 = fp.scalar(t0) if isinstance(t0, int) else t0
    if t0.field != fp:
        raise FieldMismatch("specialization point must lie in F_p")

    def ev(poly):
        acc = 0
        for c in reversed(poly):
            acc = (acc * t0.value + c) % p
        return acc

    num, den = s.value
    d = ev(den)
    if d == 0:
        raise DivisionByZero("denominator vanishes at the specialization point")
    return Scalar(fp, ev(num) * pow(d, -1, p) % p)
