"""Pure dominant weights for GL(2n) over a totally real field."""

from dataclasses import dataclass, field
from fractions import Fraction
import json


class WeightError(ValueError):
    pass


@dataclass(frozen=True)
class Weight:
    n: int
    embeddings: tuple
    components: tuple  # one tuple of 2n integers per embedding

    def __post_init__(self):
        if len(self.embeddings) != len(self.components):
            raise WeightError("one row per embedding required")
        for s, row in zip(self.embeddings, self.components):
            if len(row) != 2 * self.n:
                raise WeightError(f"row for {s} must have {2 * self.n} entries")
            if any(row[i] < row[i + 1] for i in range(len(row) - 1)):
                raise WeightError(f"row for {s} is not dominant: {row}")

    @classmethod
    def single(cls, row, label="sigma"):
        row = tuple(int(x) for x in row)
        if len(row) % 2:
            raise WeightError("weights for GL(2n) have an even number of entries")
        return cls(len(row) // 2, (label,), (row,))

    def row(self, sigma):
        return self.components[self.embeddings.index(sigma)]

    def to_dict(self):
        return {"n": self.n, "embeddings": list(self.embeddings),
                "rows": [list(r) for r in self.components]}

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["n"]), tuple(d["embeddings"]),
                   tuple(tuple(int(x) for x in r) for r in d["rows"]))

    def dumps(self):
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass(frozen=True)
class PrimeData:
    label: str
    q: int          # residue field size, a power of p
    delta: int      # valuation of the different
    sigmas: tuple   # embeddings attached to this prime


@dataclass(frozen=True)
class PrimePartition:
    p: int
    primes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        seen = set()
        for pr in self.primes:
            q = pr.q
            while q % self.p == 0:
                q //= self.p
            if q != 1:
                raise WeightError(f"q = {pr.q} is not a power of {self.p}")
            if seen & set(pr.sigmas):
                raise WeightError("embedding blocks overlap")
            seen |= set(pr.sigmas)

    @classmethod
    def rational(cls, p, delta=0, sigma="sigma"):
        """The single prime p of Q."""
        return cls(p, (PrimeData(str(p), p, delta, (sigma,)),))

    def covers(self, weight):
        return sorted(s for pr in self.primes for s in pr.sigmas) == sorted(weight.embeddings)

    def prime(self, label):
        return next(pr for pr in self.primes if pr.label == label)

    def residue_degree(self, label):
        pr = self.prime(label)
        f, q = 0, pr.q
        while q > 1:
            q //= self.p
            f += 1
        return f


def purity_weight(mu):
    """The integer w with mu_i + mu_(2n+1-i) = w for every embedding."""
    w = None
    for s, row in zip(mu.embeddings, mu.components):
        for i in range(mu.n):
            t = row[i] + row[2 * mu.n - 1 - i]
            if w is None:
                w = t
            elif t != w:
                raise WeightError(f"weight not pure: first violation at ({s}, {i + 1})")
    return w


@dataclass(frozen=True)
class CritSet:
    lo: int
    hi: int
    center_critical: bool

    def values(self):
        return list(range(self.lo, self.hi + 1))

    def __contains__(self, j):
        return self.lo <= j <= self.hi

    def __len__(self):
        return max(0, self.hi - self.lo + 1)


def crit_set(mu):
    """Integers j with mu_(sigma,n) >= j >= mu_(sigma,n+1) for all sigma."""
    w = purity_weight(mu)
    hi = min(row[mu.n - 1] for row in mu.components)
    lo = max(row[mu.n] for row in mu.components)
    center = w % 2 == 0 and lo <= w // 2 <= hi
    return CritSet(lo, hi, center)


def two_critical(mu):
    return all(row[mu.n - 1] > row[mu.n] for row in mu.components)


def mu_vee_on_tp(mu, partition, beta):
    """Scalar mu^vee(t_p^beta) as a power of p (beta maps prime label -> exponent)."""
    purity_weight(mu)
    e = 0
    for pr in partition.primes:
        b = beta.get(pr.label, 0) if isinstance(beta, dict) else beta
        if b < 0:
            raise WeightError("exponents must be nonnegative")
        for s in pr.sigmas:
            row = mu.row(s)
            e -= b * sum(row[mu.n:])
        # embeddings not listed under this prime contribute nothing
    return Fraction(partition.p) ** e


def cuspidal_top_degree(n, num_embeddings):
    """Top degree t = |Sigma_inf| (n^2 + n - 1) carrying cuspidal cohomology."""
    return num_embeddings * (n * n + n - 1)


def analyze(mu, partition=None, betas=(1,)):
    """Summary dictionary used by the command line."""
    out = {"n": mu.n, "embeddings": list(mu.embeddings)}
    try:
        w = purity_weight(mu)
    except WeightError as e:
        out["pure"] = False
        out["error"] = str(e)
        return out
    c = crit_set(mu)
    out.update(pure=True, purity_weight=w, crit=c.values(), center_critical=c.center_critical,
               two_critical=two_critical(mu),
               top_degree=cuspidal_top_degree(mu.n, len(mu.embeddings)))
    if partition is not None:
        out["mu_vee_tp"] = {str(b): str(mu_vee_on_tp(mu, partition, b)) for b in betas}
    return out
