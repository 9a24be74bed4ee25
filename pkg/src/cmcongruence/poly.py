"""Dense univariate polynomials over Z and F_p.

Coefficients are stored low degree first.  ``ModPolynomial`` keeps raw
``int`` residues in ``[0, p)``; ``Fp2Elem`` only appears in the few places
that need roots outside the prime field.
"""

from __future__ import annotations

from .arith import Fp2Elem, smallest_nonresidue, sqrt_mod_p

__all__ = ["IntPolynomial", "ModPolynomial", "format_poly"]


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def format_poly(coeffs, var: str = "x") -> str:
    """Human-readable form, highest degree first: ``x^2 - 3*x + 1``."""
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{a}*{mono}"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


class IntPolynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(_strip(int(c) for c in coeffs))

    @classmethod
    def from_roots(cls, roots) -> "IntPolynomial":
        out = [1]
        for r in roots:
            nxt = [0] * (len(out) + 1)
            for i, c in enumerate(out):
                nxt[i + 1] += c
                nxt[i] -= r * c
            out = nxt
        return cls(out)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(k * c for k, c in enumerate(self.coeffs) if k)

    def mod(self, p: int) -> "ModPolynomial":
        return ModPolynomial(self.coeffs, p)

    def __eq__(self, other):
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        return format_poly(self.coeffs)

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"


class ModPolynomial:
    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs, p: int):
        self.p = p
        self.coeffs = tuple(_strip(int(c) % p for c in coeffs))

    @classmethod
    def one(cls, p: int) -> "ModPolynomial":
        return cls([1], p)

    @classmethod
    def x(cls, p: int) -> "ModPolynomial":
        return cls([0, 1], p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lift(self) -> IntPolynomial:
        return IntPolynomial(self.coeffs)

    def lift_symmetric(self) -> IntPolynomial:
        h = self.p // 2
        return IntPolynomial(c - self.p if c > h else c for c in self.coeffs)

    def _check(self, other):
        if isinstance(other, int):
            return ModPolynomial([other], self.p)
        if not isinstance(other, ModPolynomial):
            return NotImplemented
        if other.p != self.p:
            raise ValueError("mismatched moduli")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return ModPolynomial(
            [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)], self.p
        )

    __radd__ = __add__

    def __neg__(self):
        return ModPolynomial([-c for c in self.coeffs], self.p)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return ModPolynomial([c * other for c in self.coeffs], self.p)
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ModPolynomial([], self.p)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return ModPolynomial(out, self.p)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result, base = ModPolynomial.one(self.p), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        rem = list(self.coeffs)
        d = other.coeffs
        inv = pow(d[-1], -1, p)
        dq = len(rem) - len(d)
        if dq < 0:
            return ModPolynomial([], p), self
        quot = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + len(d) - 1] * inv % p
            quot[k] = c
            if c:
                for i, y in enumerate(d):
                    rem[k + i] = (rem[k + i] - c * y) % p
        return ModPolynomial(quot, p), ModPolynomial(rem[: len(d) - 1], p)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "ModPolynomial") -> bool:
        """True iff ``self`` divides ``other``."""
        return (other % self).is_zero()

    def monic(self) -> "ModPolynomial":
        if self.is_zero():
            return self
        inv = pow(self.coeffs[-1], -1, self.p)
        return self * inv

    def gcd(self, other: "ModPolynomial") -> "ModPolynomial":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> "ModPolynomial":
        return ModPolynomial([k * c for k, c in enumerate(self.coeffs) if k], self.p)

    def is_squarefree(self) -> bool:
        if self.degree <= 0:
            return True
        return self.gcd(self.derivative()).degree == 0

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def eval_fp2(self, x: Fp2Elem) -> Fp2Elem:
        acc = Fp2Elem(0, 0, self.p)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def powmod(self, e: int, modulus: "ModPolynomial") -> "ModPolynomial":
        result = ModPolynomial.one(self.p) % modulus
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result

    def multiplicity(self, factor: "ModPolynomial") -> int:
        """Largest k with factor**k | self (self nonzero, factor nonconstant)."""
        if self.is_zero() or factor.degree < 1:
            raise ValueError("multiplicity needs a nonzero polynomial and a nonconstant factor")
        k, cur = 0, self
        while True:
            q, r = divmod(cur, factor)
            if not r.is_zero():
                return k
            k, cur = k + 1, q

    def root_multiplicity_fp2(self, root: Fp2Elem) -> int:
        """Multiplicity of (x - root) by repeated synthetic division over F_{p^2}."""
        if self.is_zero():
            raise ValueError("zero polynomial")
        coeffs = [Fp2Elem(c, 0, self.p) for c in self.coeffs]
        k = 0
        while len(coeffs) > 1:
            # synthetic division, high to low
            out = [coeffs[-1]]
            for c in reversed(coeffs[:-1]):
                out.append(c + out[-1] * root)
            if out[-1]:
                break
            k += 1
            coeffs = list(reversed(out[:-1]))
        return k

    def roots_fp(self) -> list[int]:
        """Distinct roots in F_p (exhaustive scan)."""
        return [a for a in range(self.p) if self(a) == 0]

    def roots_fp2(self) -> list[Fp2Elem]:
        """Distinct roots in F_{p^2} (odd p).

        f is first cut down to gcd(f, x^(p^2) - x), the squarefree product of
        its linear and quadratic factors.  Linear roots come from scanning
        F_p; the quadratics are grouped by trace via gcd with x^p + x + t,
        then by norm via gcd with x^(p+1) - n.
        """
        p = self.p
        f = self.monic()
        if f.degree <= 0:
            return []
        x = ModPolynomial.x(p)
        f = f.gcd(x.powmod(p * p, f) - x)
        lin = f.roots_fp()
        out = [Fp2Elem(a, 0, p) for a in lin]
        for a in lin:
            while f.degree > 0 and f(a) == 0:
                f = f // ModPolynomial([-a, 1], p)
        if f.degree <= 0:
            return out
        xp = x.powmod(p, f)
        for t in range(p):
            if f.degree <= 0:
                break
            g = f.gcd(xp + x + t)
            if g.degree <= 0:
                continue
            for quad in _split_by_norm(g):
                out.extend(_quadratic_roots(quad))
            f = f // g
            xp = xp % f if f.degree > 0 else xp
        if f.degree > 0:
            raise ArithmeticError("quadratic factors left unsplit")  # unreachable
        return out

    def to_json(self):
        return [str(c) for c in self.coeffs]

    def __eq__(self, other):
        if isinstance(other, ModPolynomial):
            return self.p == other.p and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.p))

    def __str__(self):
        return format_poly(self.lift_symmetric().coeffs)

    def __repr__(self):
        return f"ModPolynomial({list(self.coeffs)}, {self.p})"


def _split_by_norm(g: ModPolynomial) -> list[ModPolynomial]:
    """Split a product of irreducible quadratics sharing one trace."""
    if g.degree == 2:
        return [g]
    p = g.p
    x = ModPolynomial.x(p)
    xp1 = x.powmod(p + 1, g)
    out = []
    for n in range(1, p):
        h = g.gcd(xp1 - n)
        if h.degree > 0:
            if h.degree != 2:
                raise ValueError("repeated quadratic factor")
            out.append(h)
            if sum(q.degree for q in out) == g.degree:
                break
    return out


def _quadratic_roots(q: ModPolynomial) -> list[Fp2Elem]:
    p = q.p
    c, b, _ = q.monic().coeffs
    disc = (b * b - 4 * c) % p
    n = smallest_nonresidue(p)
    s = sqrt_mod_p(disc * pow(n, -1, p) % p, p)
    if s is None:
        raise ValueError("quadratic factor is reducible")
    half = pow(2, -1, p)
    return [Fp2Elem(-b * half, s * half, p), Fp2Elem(-b * half, -s * half, p)]
