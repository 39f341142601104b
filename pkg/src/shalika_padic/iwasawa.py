"""Finite-level measures on ray class group towers and their Iwasawa power series.

Coefficients live in Z/p^N.  Character values are sent into
Z/p^N[x]/(Phi_(p^e)(x)): a primitive (p-1)-th root of unity goes to the
Teichmuller lift of a fixed primitive root g mod p and zeta_(p^e) goes to the
formal root x.  The cyclotomic character on (Z/p^beta)^x uses the integer lift
a in [1, p^beta), so twists are exact for that lift and canonical mod p^beta.
"""

from dataclasses import dataclass, field
import json

from sympy import primitive_root

from .exactnum import all_characters, teichmuller
from .kernels import binomial_transport, fiber_sum


class TowerError(ValueError):
    pass


# ---------------------------------------------------------------- groups

@dataclass
class ClassGroupTower:
    p: int
    levels: dict        # beta -> list of labels
    proj: dict          # beta -> list: index of the image at level beta - 1
    eps: dict           # beta -> list of cyclotomic character lifts (integers)
    norm: dict = None   # beta -> list: index in the rational tower at the same level
    name: str = "Q"

    @classmethod
    def rational(cls, p, beta_max):
        levels, proj, eps = {}, {}, {}
        for b in range(1, beta_max + 1):
            m = p ** b
            labels = [a for a in range(1, m) if a % p]
            levels[b] = labels
            eps[b] = list(labels)
            if b > 1:
                prev = {a: i for i, a in enumerate(levels[b - 1])}
                proj[b] = [prev[a % (m // p)] for a in labels]
        norm = {b: list(range(len(levels[b]))) for b in levels}
        return cls(p, levels, proj, eps, norm, "Q")

    @property
    def beta_max(self):
        return max(self.levels)

    def index(self, beta):
        return {a: i for i, a in enumerate(self.levels[beta])}

    def validate(self):
        for b in self.levels:
            if b - 1 in self.levels:
                pr = self.proj[b]
                if len(pr) != len(self.levels[b]) or set(pr) != set(range(len(self.levels[b - 1]))):
                    raise TowerError(f"projection at level {b} is not surjective")
                for i, t in enumerate(pr):
                    if (self.eps[b][i] - self.eps[b - 1][t]) % self.p ** (b - 1):
                        raise TowerError("cyclotomic character incompatible with projection")
        return True

    def to_dict(self):
        return {"p": self.p, "name": self.name,
                "levels": {str(b): v for b, v in self.levels.items()},
                "proj": {str(b): v for b, v in self.proj.items()},
                "eps": {str(b): v for b, v in self.eps.items()},
                "norm": None if self.norm is None else {str(b): v for b, v in self.norm.items()}}

    @classmethod
    def from_dict(cls, d):
        def conv(x):
            return {int(b): list(v) for b, v in x.items()}
        return cls(int(d["p"]), conv(d["levels"]), conv(d["proj"]), conv(d["eps"]),
                   None if d.get("norm") is None else conv(d["norm"]), d.get("name", "F"))


# --------------------------------------------------------------- measures

@dataclass
class MeasureTower:
    tower: ClassGroupTower
    N: int
    levels: dict                 # beta -> list of residues mod p^N
    mode: str = "ordinary"
    alpha_valuation: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def p(self):
        return self.tower.p

    @property
    def modulus(self):
        return self.p ** self.N

    def to_dict(self):
        t = self.tower
        return {"p": t.p, "N": self.N, "mode": self.mode, "alpha_valuations": [self.alpha_valuation],
                "levels": [{"beta": b, "group": t.levels[b], "coeffs": self.levels[b]}
                           for b in sorted(self.levels)],
                "meta": self.meta}

    def dumps(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d, tower=None):
        p = int(d["p"])
        levels = {int(L["beta"]): [int(x) for x in L["coeffs"]] for L in d["levels"]}
        if tower is None:
            tower = ClassGroupTower.rational(p, max(levels))
            for L in d["levels"]:
                if [int(x) for x in L["group"]] != tower.levels[int(L["beta"])]:
                    raise TowerError("group labels do not match the rational tower")
        vals = d.get("alpha_valuations") or [0]
        return cls(tower, int(d["N"]), levels, d.get("mode", "ordinary"), int(vals[0]),
                   d.get("meta", {}))

    def scaled(self, c):
        mod = self.modulus
        return MeasureTower(self.tower, self.N, {b: [x * c % mod for x in v] for b, v in self.levels.items()},
                            self.mode, self.alpha_valuation, dict(self.meta))

    def __add__(self, other):
        mod = self.modulus
        return MeasureTower(self.tower, self.N,
                            {b: [(x + y) % mod for x, y in zip(v, other.levels[b])]
                             for b, v in self.levels.items()}, self.mode, self.alpha_valuation)


def project(tower, beta, values, modulus):
    """Push values at level beta down to level beta - 1 (sum over fibres)."""
    return fiber_sum(values, tower.proj[beta], len(tower.levels[beta - 1]), modulus)


def check_distribution_relation(tower, raw, alpha, modulus, level_modulus=False):
    """alpha * E_beta(x) = sum over the fibre of x of E_(beta+1), for consecutive levels.

    raw maps beta -> list of values aligned with tower.levels[beta].  With
    level_modulus the comparison at level beta is only made mod p^beta, which is
    all that survives a twist by integer lifts of the cyclotomic character.
    Returns (ok, witness).
    """
    betas = sorted(raw)
    if len(betas) < 2:
        raise TowerError("at least two consecutive levels are needed")
    for b in betas[:-1]:
        if b + 1 not in raw:
            raise TowerError(f"level {b + 1} missing")
        down = project(tower, b + 1, raw[b + 1], modulus)
        cmp = min(modulus, tower.p ** b) if level_modulus else modulus
        for i, (x, y) in enumerate(zip(raw[b], down)):
            if (alpha * x - y) % cmp:
                return False, {"beta": b, "label": tower.levels[b][i],
                               "alpha_E": (alpha * x) % modulus, "fibre_sum": y}
    return True, None


def measure_distribution_ok(m, level_modulus=False):
    return check_distribution_relation(m.tower, m.levels, 1, m.modulus, level_modulus)


def eps_cyc_twist(m, k):
    mod = m.modulus
    out = {}
    for b, vals in m.levels.items():
        eps = m.tower.eps[b]
        out[b] = [v * pow(e, k, mod) % mod for v, e in zip(vals, eps)]
    return MeasureTower(m.tower, m.N, out, m.mode, m.alpha_valuation, dict(m.meta))


def manin_relation_check(mj, mj2, j, j2, max_level=None):
    """eps^(j2 - j)(mu^j) = mu^j2 at each level beta mod p^min(beta, N)."""
    if mj.tower is not mj2.tower and mj.tower.levels != mj2.tower.levels:
        raise TowerError("mismatched towers")
    if mj.N != mj2.N:
        raise TowerError("mismatched precision")
    tw = eps_cyc_twist(mj, j2 - j)
    for b in sorted(mj.levels):
        if max_level is not None and b > max_level:
            continue
        mod = mj.p ** min(b, mj.N)
        for i, (x, y) in enumerate(zip(tw.levels[b], mj2.levels[b])):
            if (x - y) % mod:
                return False, {"beta": b, "label": mj.tower.levels[b][i], "j": j, "j2": j2}
    return True, None


def pushforward(m, target, nu=None):
    """Sum over norm fibres, optionally weighted by a character nu of the source labels."""
    t = m.tower
    if t.norm is None:
        raise TowerError("norm map missing")
    mod = m.modulus
    out = {}
    for b, vals in m.levels.items():
        if nu is not None:
            if t.p ** b % nu.modulus:
                raise TowerError("twisting character has conductor beyond the tower height")
            w = []
            for lab, v in zip(t.levels[b], vals):
                c = nu(lab)
                if not c.is_rational():
                    raise TowerError("pushforward twist needs a rational-valued character")
                w.append(v * int(c.coeffs[0]) % mod)
            vals = w
        out[b] = fiber_sum(vals, t.norm[b], len(target.levels[b]), mod)
    res = MeasureTower(target, m.N, out, m.mode, m.alpha_valuation, dict(m.meta))
    ok, wit = measure_distribution_ok(res) if len(out) > 1 else (True, None)
    if not ok:
        raise TowerError(f"pushforward broke the distribution relation: {wit}")
    return res


# ------------------------------------------------------ p-adic cyclotomic values

def _cyclo_p_power(p, e):
    """Coefficients (low first) of Phi_(p^e)."""
    if e == 0:
        return [-1, 1]  # x - 1: x is 1
    step = p ** (e - 1)
    c = [0] * (step * (p - 1) + 1)
    for i in range(p):
        c[i * step] = 1
    return c


@dataclass(frozen=True)
class PadicCyclotomic:
    """Element of Z/p^N[x]/(Phi_(p^e)(x)); e = 0 means plain Z/p^N."""
    p: int
    N: int
    e: int
    coeffs: tuple

    @classmethod
    def from_list(cls, p, N, e, c):
        mod = p ** N
        phi = _cyclo_p_power(p, e)
        d = len(phi) - 1
        c = [x % mod for x in c]
        for i in range(len(c) - 1, d - 1, -1):
            t = c[i]
            if t:
                for r in range(d + 1):
                    c[i - d + r] = (c[i - d + r] - t * phi[r]) % mod
        c = (c + [0] * d)[:d]
        return cls(p, N, e, tuple(c))

    def lift(self, e):
        """Same element with zeta_(p^self.e) = x^(p^(e - self.e))."""
        if e == self.e:
            return self
        step = self.p ** (e - self.e) if self.e else 0
        c = [0] * (max(len(self.coeffs) * max(step, 1), 1) + 1)
        for i, x in enumerate(self.coeffs):
            c[i * step] += x
        return PadicCyclotomic.from_list(self.p, self.N, e, c)

    def __add__(self, other):
        e = max(self.e, other.e)
        a, b = self.lift(e), other.lift(e)
        n = max(len(a.coeffs), len(b.coeffs))
        return PadicCyclotomic.from_list(self.p, self.N, e,
                                         [x + y for x, y in zip(a.coeffs + (0,) * n, b.coeffs + (0,) * n)][:n])

    def __mul__(self, other):
        if isinstance(other, int):
            return PadicCyclotomic.from_list(self.p, self.N, self.e, [x * other for x in self.coeffs])
        e = max(self.e, other.e)
        a, b = self.lift(e), other.lift(e)
        c = [0] * (len(a.coeffs) + len(b.coeffs))
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    c[i + j] += x * y
        return PadicCyclotomic.from_list(self.p, self.N, e, c)

    __rmul__ = __mul__

    def is_zero(self):
        return not any(self.coeffs)

    def valuation(self):
        """Minimum valuation of the coefficients (N when zero)."""
        best = self.N
        for x in self.coeffs:
            if x:
                v = 0
                while x % self.p == 0:
                    x //= self.p
                    v += 1
                best = min(best, v)
        return best

    def __eq__(self, other):
        if not isinstance(other, PadicCyclotomic):
            return NotImplemented
        e = max(self.e, other.e)
        return self.lift(e).coeffs == other.lift(e).coeffs

    def __hash__(self):
        return hash((self.p, self.N, self.e, self.coeffs))

    def to_json(self):
        return {"e": self.e, "coeffs": list(self.coeffs)}


class Embedding:
    """Ring map Z[zeta_M] -> Z/p^N[x]/Phi_(p^e), M = (p - 1) p^e."""

    def __init__(self, p, N, g=None):
        self.p, self.N = p, N
        self.g = int(primitive_root(p)) if g is None else g
        self.teich_g = int(teichmuller(self.g, p, N))

    def convention(self):
        return (f"zeta_{self.p - 1} -> Teichmuller lift of the primitive root {self.g} "
                f"mod {self.p}^{self.N}; zeta_(p^e) -> the formal root x")

    def root(self, m, k):
        """Image of zeta_m^k for m dividing (p - 1) p^e."""
        p = self.p
        e = 0
        mm = m
        while mm % p == 0:
            mm //= p
            e += 1
        if (p - 1) % mm:
            raise ValueError(f"zeta_{m} does not embed in the chosen ring")
        # zeta_m = zeta_mm^u * zeta_(p^e)^v with u p^e + v mm = 1 (CRT)
        pe = p ** e
        u = pow(pe, -1, mm) if mm > 1 else 0
        v = pow(mm, -1, pe) if pe > 1 else 0
        tame = pow(self.teich_g, ((p - 1) // mm) * (u * k % mm), p ** self.N) if mm > 1 else 1
        c = [0] * (pe if pe > 1 else 1)
        c[(v * k) % pe if pe > 1 else 0] = tame
        return PadicCyclotomic.from_list(p, self.N, e, c)

    def __call__(self, z):
        """Image of a CyclotomicElement with p-integral coefficients."""
        mod = self.p ** self.N
        out = PadicCyclotomic.from_list(self.p, self.N, 0, [0])
        for i, c in enumerate(z.coeffs[:z.degree]):
            if c:
                if c.denominator % self.p == 0:
                    raise ValueError("coefficient not p-integral")
                ci = c.numerator * pow(c.denominator, -1, mod) % mod
                out = out + self.root(z.m, i) * ci
        if z.sqrt_q is not None and any(z.coeffs[z.degree:]):
            raise ValueError("square roots are not embedded")
        return out


def _level_of(modulus, p):
    b = 0
    while modulus % p == 0:
        modulus //= p
        b += 1
    if modulus != 1:
        raise TowerError("character modulus is not a power of p")
    return max(b, 1)


def integrate_character(m, chi, embedding=None, level=None):
    """sum over x in G_beta of chi(x) m_beta(x), at the level of chi's modulus (or `level`)."""
    p = m.p
    emb = embedding or Embedding(p, m.N)
    b = level or _level_of(chi.modulus, p)
    if b not in m.levels:
        raise TowerError("conductor exceeds the tower height")
    if p ** b % chi.modulus:
        raise TowerError("character modulus does not divide the level")
    acc = {}
    for lab, v in zip(m.tower.levels[b], m.levels[b]):
        k = chi.value_index(lab)
        if k is None or v == 0:
            continue
        acc[k] = (acc.get(k, 0) + v) % m.modulus
    out = PadicCyclotomic.from_list(p, m.N, 0, [0])
    for k, v in acc.items():
        out = out + emb.root(chi.order, k) * v
    return out


# ----------------------------------------------------------------- series

@dataclass
class PowerSeriesTrunc:
    p: int
    N: int
    coeffs: list       # c_0 .. c_(M-1) mod p^N

    @property
    def M(self):
        return len(self.coeffs)


def log_table(p, B):
    """s with x/omega(x) = (1 + p)^s mod p^B, for x a unit mod p^B."""
    mod = p ** B
    gamma = 1 + p
    table = {}
    x = 1
    for s in range(p ** (B - 1)):
        table[x] = s
        x = x * gamma % mod
    return table


def omega_split_to_series(m, m0, M=None, level=None):
    """sum_x omega^-m0(x) mu_B(x) (1 + T)^s(x), truncated below T^M (no 1/(p-1) factor)."""
    p = m.p
    if p == 2:
        raise TowerError("p must be odd")
    B = level or max(m.levels)
    if M is None:
        M = p ** (B - 1)
    if M > p ** (B - 1):
        raise TowerError("truncation beyond what the level determines")
    mod = m.modulus
    modB = p ** B
    logs = log_table(p, B)
    coeffs, exps = [], []
    for lab, v in zip(m.tower.levels[B], m.levels[B]):
        om = int(teichmuller(lab, p, m.N))
        ang = lab * pow(om, -1, modB) % modB
        coeffs.append(v * pow(om, -m0 % (p - 1), mod) % mod)
        exps.append(logs[ang])
    return PowerSeriesTrunc(p, m.N, binomial_transport(coeffs, exps, M, mod))


def weierstrass_invariants(f):
    """(mu, lambda, zero bound, certified) or 'inconclusive' for vanishing data.

    Certified only when a unit coefficient occurs at index <= M - 2.
    """
    vals = []
    for c in f.coeffs:
        c %= f.p ** f.N
        if c == 0:
            vals.append(None)
            continue
        v = 0
        while c % f.p == 0:
            c //= f.p
            v += 1
        vals.append(v)
    present = [v for v in vals if v is not None]
    if not present:
        return "inconclusive"
    mu = min(present)
    lam = vals.index(mu)
    certified = mu == 0 and lam <= f.M - 2
    return {"mu": mu, "lambda": lam, "zero_bound": lam, "certified": certified}


def nonvanishing_certificate(towers, M=None, level=None, scan_level=2, embedding=None):
    """Zero bounds per omega-component, summed over towers, with a brute-force character scan."""
    p = towers[0].p
    emb = embedding or Embedding(p, towers[0].N)
    comps = []
    total = 0
    status = "certified"
    for ti, m in enumerate(towers):
        for m0 in range(p - 1):
            f = omega_split_to_series(m, m0, M, level)
            inv = weierstrass_invariants(f)
            entry = {"tower": ti, "component": m0, "coeffs": f.coeffs}
            if inv == "inconclusive" or not inv["certified"]:
                status = "inconclusive"
                entry["invariants"] = inv
            else:
                entry["invariants"] = inv
                total += inv["zero_bound"]
            comps.append(entry)
    zeros = []
    nonzero = []
    for chi in all_characters(p ** scan_level):
        vanish = False
        for m in towers:
            val = integrate_character(m, chi, emb, level=scan_level)
            if val.is_zero():
                vanish = True
        (zeros if vanish else nonzero).append(chi.to_dict())
    consistent = status != "certified" or len(zeros) <= total
    return {"p": p, "N": towers[0].N, "status": status, "bound": total if status == "certified" else None,
            "components": comps, "scan_modulus": p ** scan_level, "scanned": len(zeros) + len(nonzero),
            "vanishing": zeros, "nonvanishing_count": len(nonzero), "consistent": consistent,
            "convention": emb.convention()}


# --------------------------------------------------------------- gamma

def gl_order(n, q):
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def gamma_constant(class_number, m_factors, p_primes, n):
    """h * #GL_n(O/m) * #PGL_n(O/m) * prod_p q^(-n^2) #GL_n(F_q).

    m_factors: list of (q, e) for the prime powers dividing m; p_primes: a
    PrimePartition or the residue cardinalities of the primes above p.
    """
    from fractions import Fraction
    if hasattr(p_primes, "primes"):
        p_primes = [pr.q for pr in p_primes.primes]
    gl_m, units_m = 1, 1
    for q, e in m_factors:
        gl_m *= q ** ((e - 1) * n * n) * gl_order(n, q)
        units_m *= q ** (e - 1) * (q - 1)
    out = Fraction(class_number * gl_m * gl_m, units_m)
    for q in p_primes:
        out *= Fraction(gl_order(n, q), q ** (n * n))
    return out
