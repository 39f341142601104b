"""Exact arithmetic: valuations, truncated p-adics, cyclotomic numbers, characters."""

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, lcm
import cmath
import json

from sympy import factorint, primitive_root, totient


def padic_valuation(x, p):
    """Exponent of p in the nonzero rational x."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero undefined (infinite)")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def padic_norm(x, p):
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    return Fraction(p) ** (-padic_valuation(x, p))


def reduce_mod(x, modulus):
    """Image of a rational with denominator prime to modulus in Z/modulus."""
    x = Fraction(x)
    if gcd(x.denominator, modulus) != 1:
        raise ValueError(f"{x} is not integral at the modulus {modulus}")
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


class PadicTrunc:
    """Residue class mod p^N."""

    __slots__ = ("p", "N", "residue")

    def __init__(self, p, N, residue):
        if N < 1:
            raise ValueError("precision must be positive")
        self.p = p
        self.N = N
        self.residue = reduce_mod(residue, p ** N)

    @property
    def modulus(self):
        return self.p ** self.N

    def _coerce(self, other):
        if isinstance(other, PadicTrunc):
            if other.p != self.p:
                raise ValueError("different primes")
            return other
        return PadicTrunc(self.p, self.N, other)

    def _prec(self, other):
        return min(self.N, other.N)

    def __add__(self, other):
        other = self._coerce(other)
        return PadicTrunc(self.p, self._prec(other), self.residue + other.residue)

    __radd__ = __add__

    def __neg__(self):
        return PadicTrunc(self.p, self.N, -self.residue)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return PadicTrunc(self.p, self._prec(other), self.residue * other.residue)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        return PadicTrunc(self.p, self.N, pow(self.residue, e, self.modulus))

    def is_unit(self):
        return self.residue % self.p != 0

    def inverse(self):
        if not self.is_unit():
            raise ZeroDivisionError("not a unit mod p")
        return PadicTrunc(self.p, self.N, pow(self.residue, -1, self.modulus))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def valuation(self):
        """Valuation, capped at N for the zero class."""
        r, v = self.residue, 0
        if r == 0:
            return self.N
        while r % self.p == 0:
            r //= self.p
            v += 1
        return v

    def __eq__(self, other):
        if isinstance(other, PadicTrunc):
            n = min(self.N, other.N)
            return self.p == other.p and (self.residue - other.residue) % self.p ** n == 0
        try:
            return (self.residue - reduce_mod(other, self.modulus)) % self.modulus == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.p, self.N, self.residue))

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"PadicTrunc({self.p}, {self.N}, {self.residue})"


def teichmuller(a, p, N):
    """The (p-1)-th root of unity congruent to a mod p, to precision p^N."""
    if p == 2:
        raise ValueError("p = 2: use the +-1 component instead")
    if a % p == 0:
        raise ValueError("teichmuller lift of a non-unit")
    m = p ** N
    x = a % m
    for _ in range(N):
        x = pow(x, p, m)
    return PadicTrunc(p, N, x)


# ---------------------------------------------------------------- polynomials
# Integer/rational polynomials are lists of coefficients, lowest degree first.

def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divmod_monic(a, m):
    """Quotient and remainder of a by a monic polynomial m."""
    a = list(a)
    dm = len(m) - 1
    if len(a) <= dm:
        return [], a
    q = [0] * (len(a) - dm)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            q[i - dm] = c
            for j in range(dm + 1):
                a[i - dm + j] -= c * m[j]
    return q, a[:dm]


@lru_cache(maxsize=None)
def cyclotomic_poly(m):
    """Coefficients of the m-th cyclotomic polynomial by recursive division."""
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            q, r = _poly_divmod_monic(num, cyclotomic_poly(d))
            assert not any(r)
            num = q
    return tuple(num)


def euler_phi(m):
    return int(totient(m))


# ------------------------------------------------------------ cyclotomic ring

class CyclotomicElement:
    """Element of Q(zeta_m), optionally with a formal square root of q adjoined.

    Stored against the power basis 1, z, ..., z^(phi(m)-1) with z = exp(2 pi i/m).
    With sqrt_q set the element is a + b*sqrt(q) and ``coeffs`` is a + b
    concatenated.
    """

    __slots__ = ("m", "sqrt_q", "coeffs")

    def __init__(self, m, coeffs, sqrt_q=None):
        d = euler_phi(m)
        coeffs = tuple(Fraction(c) for c in coeffs)
        want = 2 * d if sqrt_q is not None else d
        if len(coeffs) != want:
            raise ValueError(f"expected {want} coefficients, got {len(coeffs)}")
        self.m = m
        self.sqrt_q = sqrt_q
        self.coeffs = coeffs

    # construction helpers
    @classmethod
    def from_poly(cls, m, poly, sqrt_q=None, sqrt_poly=None):
        d = euler_phi(m)
        _, r = _poly_divmod_monic(list(poly), cyclotomic_poly(m))
        r = list(r) + [0] * (d - len(r))
        if sqrt_q is None:
            return cls(m, r)
        _, s = _poly_divmod_monic(list(sqrt_poly or []), cyclotomic_poly(m))
        s = list(s) + [0] * (d - len(s))
        return cls(m, r + s, sqrt_q)

    @classmethod
    def rational(cls, x, m=1, sqrt_q=None):
        return cls.from_poly(m, [Fraction(x)], sqrt_q, [] if sqrt_q else None)

    @classmethod
    def zeta(cls, m, k=1):
        return cls.from_poly(m, [0] * (k % m) + [1])

    @classmethod
    def sqrt(cls, q, m=1):
        return cls.from_poly(m, [], q, [1])

    @property
    def degree(self):
        return euler_phi(self.m)

    def parts(self):
        d = self.degree
        a = list(self.coeffs[:d])
        b = list(self.coeffs[d:]) if self.sqrt_q is not None else [Fraction(0)] * d
        return a, b

    # conductor changes
    def lift(self, M, sqrt_q=None):
        """Same number inside Q(zeta_M) (m | M), optionally with sqrt(q) adjoined."""
        if M % self.m:
            raise ValueError(f"{self.m} does not divide {M}")
        if self.sqrt_q is not None and sqrt_q is not None and sqrt_q != self.sqrt_q:
            raise ValueError("mixed square-root radicands")
        s = M // self.m
        a, b = self.parts()
        pa = [0] * (s * (len(a) - 1) + 1) if a else []
        pb = [0] * (s * (len(b) - 1) + 1) if b else []
        for i, c in enumerate(a):
            pa[s * i] = c
        for i, c in enumerate(b):
            pb[s * i] = c
        q = sqrt_q if sqrt_q is not None else self.sqrt_q
        if q is None:
            return CyclotomicElement.from_poly(M, pa)
        return CyclotomicElement.from_poly(M, pa, q, pb)

    def _common(self, other):
        if not isinstance(other, CyclotomicElement):
            other = CyclotomicElement.rational(other, self.m, self.sqrt_q)
        if self.sqrt_q is not None and other.sqrt_q is not None and self.sqrt_q != other.sqrt_q:
            raise ValueError("mixed square-root radicands")
        q = self.sqrt_q if self.sqrt_q is not None else other.sqrt_q
        M = lcm(self.m, other.m)
        return self.lift(M, q), other.lift(M, q)

    def __add__(self, other):
        x, y = self._common(other)
        return CyclotomicElement(x.m, [a + b for a, b in zip(x.coeffs, y.coeffs)], x.sqrt_q)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement(self.m, [-c for c in self.coeffs], self.sqrt_q)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        x, y = self._common(other)
        xa, xb = x.parts()
        ya, yb = y.parts()
        ra = _poly_mul(xa, ya)
        if x.sqrt_q is None:
            return CyclotomicElement.from_poly(x.m, ra)
        q = x.sqrt_q
        bb = _poly_mul(xb, yb)
        ra = [u + q * v for u, v in _zip_longest0(ra, bb)]
        rb = [u + v for u, v in _zip_longest0(_poly_mul(xa, yb), _poly_mul(xb, ya))]
        return CyclotomicElement.from_poly(x.m, ra, q, rb)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = CyclotomicElement.rational(1, self.m, self.sqrt_q)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def galois(self, a):
        """Apply zeta_m -> zeta_m^a (a a unit mod m); sqrt(q) is fixed."""
        if gcd(a, self.m) != 1:
            raise ValueError("galois exponent must be a unit")
        m = self.m
        pa, pb = [0] * m, [0] * m
        xa, xb = self.parts()
        for i, c in enumerate(xa):
            pa[(a * i) % m] += c
        for i, c in enumerate(xb):
            pb[(a * i) % m] += c
        if self.sqrt_q is None:
            return CyclotomicElement.from_poly(m, pa)
        return CyclotomicElement.from_poly(m, pa, self.sqrt_q, pb)

    def conjugate(self):
        return self.galois(-1 % self.m if self.m > 1 else 1)

    def norm_down(self):
        """Product of all Galois conjugates over Q(sqrt q) or Q."""
        out = None
        for a in range(1, max(self.m, 2)):
            if gcd(a, self.m) == 1:
                g = self.galois(a)
                out = g if out is None else out * g
        return out

    def sqrt_conjugate(self):
        if self.sqrt_q is None:
            return self
        a, b = self.parts()
        return CyclotomicElement(self.m, a + [-c for c in b], self.sqrt_q)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # multiply by all other conjugates to land in Q
        conj = CyclotomicElement.rational(1, self.m, self.sqrt_q)
        for a in range(2, self.m):
            if gcd(a, self.m) == 1:
                conj = conj * self.galois(a)
        if self.sqrt_q is not None:
            full = self * conj
            conj = conj * full.sqrt_conjugate()
        n = self * conj
        assert n.is_rational(), "norm should be rational"
        return conj * (1 / n.coeffs[0])

    def __truediv__(self, other):
        if not isinstance(other, CyclotomicElement):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        if not isinstance(other, (CyclotomicElement, int, Fraction)):
            return NotImplemented
        x, y = self._common(other)
        return x.coeffs == y.coeffs

    def __hash__(self):
        return hash((self.m, self.sqrt_q, self.coeffs))

    def to_complex(self):
        z = cmath.exp(2j * cmath.pi / self.m)
        a, b = self.parts()
        va = sum(float(c) * z ** i for i, c in enumerate(a))
        vb = sum(float(c) * z ** i for i, c in enumerate(b))
        if self.sqrt_q is None:
            return complex(va)
        return complex(va + vb * self.sqrt_q ** 0.5)

    def abs(self):
        return abs(self.to_complex())

    def __repr__(self):
        tag = f", sqrt_q={self.sqrt_q}" if self.sqrt_q is not None else ""
        return f"CyclotomicElement(m={self.m}, {[str(c) for c in self.coeffs]}{tag})"


def _zip_longest0(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return zip(a, b)


# ----------------------------------------------------------------- characters

@lru_cache(maxsize=None)
def unit_group_generators(m):
    """Independent generators of (Z/m)^x with their orders, built by CRT."""
    if m <= 2:
        return ()
    gens = []
    fac = factorint(m)
    for p, e in sorted(fac.items()):
        pe = p ** e
        rest = m // pe
        local = []
        if p == 2:
            if e == 2:
                local = [(pe - 1, 2)]
            elif e >= 3:
                local = [(pe - 1, 2), (5, 2 ** (e - 2))]
        else:
            local = [(primitive_root(pe), (p - 1) * p ** (e - 1))]
        for g, order in local:
            # g mod pe, 1 mod rest
            x = (g * rest * pow(rest, -1, pe) + pe * pow(pe, -1, rest)) % m if rest > 1 else g % m
            gens.append((x, order))
    return tuple(gens)


@lru_cache(maxsize=None)
def discrete_log_table(m):
    """Map unit -> exponent tuple with respect to unit_group_generators(m)."""
    gens = unit_group_generators(m)
    table = {1 % m: tuple(0 for _ in gens)}
    for exps in product(*[range(o) for _, o in gens]):
        x = 1
        for (g, _), e in zip(gens, exps):
            x = x * pow(g, e, m) % m
        table[x % m] = exps
    if m == 2:
        table = {1: ()}
    return table


class FiniteCharacter:
    """Dirichlet character mod m.

    chi(g_i) = zeta_order^(values[i]) on the generators g_i of (Z/m)^x.
    """

    __slots__ = ("modulus", "values", "order")

    def __init__(self, modulus, values, order=None):
        gens = unit_group_generators(modulus)
        values = tuple(values)
        if len(values) != len(gens):
            raise ValueError("one value index per generator required")
        if order is None:
            order = 1
            for (_, o), v in zip(gens, values):
                order = lcm(order, o)
        # values are given as indices in Z/order; reduce to the true order
        true = 1
        for v in values:
            true = lcm(true, order // gcd(v % order, order))
        self.modulus = modulus
        self.order = true
        self.values = tuple((v * true // order) % true for v in values) if order % true == 0 else values

    @classmethod
    def trivial(cls, m=1):
        return cls(m, [0] * len(unit_group_generators(m)), 1)

    @classmethod
    def from_generator_exponents(cls, m, exps):
        """Character with chi(g_i) = exp(2 pi i exps[i] / ord(g_i))."""
        gens = unit_group_generators(m)
        order = 1
        for _, o in gens:
            order = lcm(order, o)
        return cls(m, [e * (order // o) for (_, o), e in zip(gens, exps)], order)

    def value_index(self, a):
        """k with chi(a) = zeta_order^k, or None when gcd(a, m) > 1."""
        a %= self.modulus
        if gcd(a, self.modulus) != 1:
            return None
        exps = discrete_log_table(self.modulus)[a]
        return sum(e * v for e, v in zip(exps, self.values)) % self.order

    def __call__(self, a):
        k = self.value_index(a)
        if k is None:
            return CyclotomicElement.rational(0, self.order)
        return CyclotomicElement.zeta(self.order, k)

    def __mul__(self, other):
        if other.modulus != self.modulus:
            M = lcm(self.modulus, other.modulus)
            return self.extend(M) * other.extend(M)
        d = lcm(self.order, other.order)
        vals = [a * (d // self.order) + b * (d // other.order) for a, b in zip(self.values, other.values)]
        return FiniteCharacter(self.modulus, vals, d)

    def __pow__(self, k):
        return FiniteCharacter(self.modulus, [v * k for v in self.values], self.order)

    def conjugate(self):
        return self ** -1

    def extend(self, M):
        """Same character viewed modulo a multiple M of its modulus."""
        if M % self.modulus:
            raise ValueError("new modulus must be a multiple")
        d = self.order
        gens = unit_group_generators(M)
        vals = []
        for g, _ in gens:
            k = self.value_index(g)
            vals.append(k)
        return FiniteCharacter(M, vals, d)

    def is_trivial(self):
        return all(v % self.order == 0 for v in self.values)

    def conductor(self):
        m = self.modulus
        table = discrete_log_table(m)
        for f in sorted(d for d in range(1, m + 1) if m % d == 0):
            if all(self.value_index(u) == 0 for u in table if u % f == 1 % f):
                return f
        return m

    def is_primitive(self):
        return self.conductor() == self.modulus

    def primitive(self):
        """Primitive character inducing this one."""
        f = self.conductor()
        if f == self.modulus:
            return self
        vals = []
        for g, _ in unit_group_generators(f):
            # lift g to a unit mod m congruent to g mod f
            x = g
            while gcd(x, self.modulus) != 1:
                x += f
            vals.append(self.value_index(x))
        return FiniteCharacter(f, vals, self.order)

    def parity(self):
        """chi(-1) as +1 or -1."""
        if self.modulus <= 2:
            return 1
        k = self.value_index(-1)
        return 1 if k == 0 else -1

    def key(self):
        return (self.modulus, self.order, self.values)

    def __eq__(self, other):
        return isinstance(other, FiniteCharacter) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_dict(self):
        gens = unit_group_generators(self.modulus)
        return {"modulus": self.modulus,
                "generators": [[g, v] for (g, _), v in zip(gens, self.values)],
                "order": self.order}

    @classmethod
    def from_dict(cls, d):
        m = d["modulus"]
        gens = [g for g, _ in unit_group_generators(m)]
        given = {int(g): int(v) for g, v in d["generators"]}
        if sorted(given) != sorted(gens):
            # values keyed by other generators: solve through the log table
            raise ValueError("generator set does not match the canonical one")
        return cls(m, [given[g] for g in gens], d["order"])

    def dumps(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def __repr__(self):
        return f"FiniteCharacter(mod {self.modulus}, order {self.order}, {self.values})"


def all_characters(m):
    """Every Dirichlet character mod m."""
    gens = unit_group_generators(m)
    return [FiniteCharacter.from_generator_exponents(m, exps)
            for exps in product(*[range(o) for _, o in gens])]


def primitive_characters(m):
    return [c for c in all_characters(m) if c.is_primitive()]


def gauss_sum(chi, c=1):
    """Sum over t in (Z/m)^x of chi(t) zeta_m^(c t)."""
    m = chi.modulus
    if m == 1:
        return CyclotomicElement.rational(1)
    if not chi.is_primitive():
        raise ValueError("character not primitive")
    if gcd(c, m) != 1:
        raise ValueError("shift must be a unit")
    M = lcm(chi.order, m)
    poly = [0] * M
    for t in range(1, m):
        k = chi.value_index(t)
        if k is None:
            continue
        e = (k * (M // chi.order) + c * t * (M // m)) % M
        poly[e] += 1
    return CyclotomicElement.from_poly(M, poly)
