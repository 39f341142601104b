"""Unramified principal series of GL(2n) over Q_p: Hecke spectra, ordinarity, cosets.

Finite computations use the local field Q_p with uniformiser p, so q = p is prime.
Functions in the induced model are stored by their values on the Bruhat cells
B(O) w J of K = GL(2n, Z_p), indexed by jump sets S of size n (the positions of
the first n columns of a Weyl representative).
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb

import sympy

from . import linalg
from .exactnum import padic_valuation
from .weights import purity_weight


class InconsistencyError(RuntimeError):
    pass


@dataclass(frozen=True)
class SatakeParams:
    n: int
    q: int
    alphas: tuple            # exact nonzero Fractions, or None for valuation-only data
    valuations: tuple = None  # p-adic valuations; computed from alphas when omitted
    p: int = None

    def __post_init__(self):
        p = self.p or _prime_of(self.q)
        object.__setattr__(self, "p", p)
        if self.alphas is not None:
            al = tuple(Fraction(a) for a in self.alphas)
            if len(al) != 2 * self.n or any(a == 0 for a in al):
                raise ValueError("need 2n nonzero Satake parameters")
            object.__setattr__(self, "alphas", al)
            if self.valuations is None:
                object.__setattr__(self, "valuations", tuple(padic_valuation(a, p) for a in al))
        if self.valuations is None or len(self.valuations) != 2 * self.n:
            raise ValueError("valuations missing")

    @classmethod
    def from_dict(cls, d):
        ent = d["entries"]
        vals = tuple(int(e["valuation"]) for e in ent)
        al = None
        if all(e.get("value") is not None for e in ent):
            al = tuple(Fraction(e["value"]) for e in ent)
        return cls(int(d["n"]), int(d["q"]), al, vals)

    def to_dict(self):
        ent = []
        for i, v in enumerate(self.valuations):
            ent.append({"valuation": v,
                        "value": None if self.alphas is None else str(self.alphas[i])})
        return {"n": self.n, "q": self.q, "entries": ent}

    def reorder(self, order):
        al = None if self.alphas is None else tuple(self.alphas[i] for i in order)
        return SatakeParams(self.n, self.q, al, tuple(self.valuations[i] for i in order), self.p)


def _prime_of(q):
    f = sympy.factorint(q)
    if len(f) != 1:
        raise ValueError(f"q = {q} is not a prime power")
    return next(iter(f))


def tau_subsets(n):
    """All n-element subsets of {1..2n} in lexicographic order."""
    return [tuple(t) for t in combinations(range(1, 2 * n + 1), n)]


def q_shift(n, q):
    """q^(n(1-n)/2); the exponent is always an integer."""
    return Fraction(q) ** (n * (1 - n) // 2)


def alpha_tau(P, tau):
    out = Fraction(1)
    for i in tau:
        out *= P.alphas[i - 1]
    return out


def up_charpoly(P):
    """Coefficients (constant term first) of prod_tau (X - q^(n(1-n)/2) alpha^tau)."""
    if P.alphas is None:
        raise ValueError("exact Satake parameters required")
    roots = [q_shift(P.n, P.q) * alpha_tau(P, t) for t in tau_subsets(P.n)]
    poly = [Fraction(1)]
    for r in roots:
        new = [Fraction(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            new[i + 1] += c
            new[i] -= r * c
        poly = new
    return poly


def up_roots(P):
    return {t: q_shift(P.n, P.q) * alpha_tau(P, t) for t in tau_subsets(P.n)}


# --------------------------------------------------------------- ordinarity

def q_ordinary_target(mu, partition, label):
    """Valuation that the product of the n chosen Satake parameters must have."""
    pr = partition.prime(label)
    f = partition.residue_degree(label)
    n = mu.n
    return f * n * (n - 1) // 2 + sum(sum(mu.row(s)[n:]) for s in pr.sigmas)


def strip_holds(P, tau, mu, partition, label):
    w = purity_weight(mu)
    c2 = len(partition.prime(label).sigmas) * (w + 2 * P.n - 1)  # twice the centre
    inside = [2 * P.valuations[i - 1] < c2 for i in tau]
    outside = [2 * P.valuations[j - 1] > c2 for j in range(1, 2 * P.n + 1) if j not in tau]
    return all(inside) and all(outside)


def q_ordinary_tau(P, mu, partition, label, strip=True):
    """Return tau with sum of valuations equal to the ordinary target, or None.

    With strip=True only subsets inside the valuation strip qualify and two
    distinct qualifying subsets raise InconsistencyError.
    """
    target = q_ordinary_target(mu, partition, label)
    hits = [t for t in tau_subsets(P.n) if sum(P.valuations[i - 1] for i in t) == target]
    if not strip:
        return hits[0] if hits else None
    good = [t for t in hits if strip_holds(P, t, mu, partition, label)]
    if len(good) > 1:
        raise InconsistencyError(f"several ordinary subsets in the strip: {good}")
    return good[0] if good else None


def shalika_matching(P, tau, eta_value):
    """A bijection rho: tau -> complement with alpha_i alpha_rho(i) = q^(2n-1) eta, or None."""
    target = Fraction(P.q) ** (2 * P.n - 1) * Fraction(eta_value)
    comp = [j for j in range(1, 2 * P.n + 1) if j not in tau]
    for perm in permutations(comp):
        if all(P.alphas[i - 1] * P.alphas[j - 1] == target for i, j in zip(tau, perm)):
            return dict(zip(tau, perm))
    return None


def q_regular_check(P, tau, eta_value):
    if P.alphas is None:
        raise ValueError("exact Satake parameters required")
    comp = [j for j in range(1, 2 * P.n + 1) if j not in tau]
    separated = all(P.alphas[i - 1] != P.alphas[j - 1] for i in tau for j in comp)
    return separated and simple_root(P, tau) and shalika_matching(P, tau, eta_value) is not None


def simple_root(P, tau):
    roots = up_roots(P)
    return sum(1 for r in roots.values() if r == roots[tuple(tau)]) == 1


def b_ordinary_check(P, mu, partition, label):
    """Ordering (list of indices) with v(alpha_k) = f(2n-k) + sum_sigma mu_(sigma,k), or None."""
    pr = partition.prime(label)
    f = partition.residue_degree(label)
    N = 2 * P.n
    need = [f * (N - k) + sum(mu.row(s)[k - 1] for s in pr.sigmas) for k in range(1, N + 1)]
    order, used = [], set()
    for v in need:
        idx = next((i for i in range(N) if i not in used and P.valuations[i] == v), None)
        if idx is None:
            return None
        used.add(idx)
        order.append(idx)
    assert all(need[k] > need[k + 1] for k in range(N - 1)), "valuation chain not strict"
    return order


# ----------------------------------------------------------- matrix helpers over Q_p

def iwasawa(g, p):
    """Factor g = b k with b upper triangular over Q and k in GL(N, Z_p).

    Column operations by integral matrices reduce g to upper triangular form,
    clearing rows from the bottom using a pivot of minimal valuation.
    Returns (b, k) as Fraction matrices.
    """
    N = len(g)
    M = [[Fraction(x) for x in r] for r in g]
    for r in range(N - 1, -1, -1):
        cols = [c for c in range(r + 1) if M[r][c] != 0]
        if not cols:
            raise ZeroDivisionError("singular matrix")
        c0 = min(cols, key=lambda c: (padic_valuation(M[r][c], p), c))
        if c0 != r:
            for row in M:
                row[c0], row[r] = row[r], row[c0]
        piv = M[r][r]
        for c in range(r):
            if M[r][c] != 0:
                f = M[r][c] / piv
                for row in M:
                    row[c] -= f * row[r]
    b = M
    k = linalg.matmul(linalg.inverse(b), g)
    return b, k


def _row_reduce_mod(cols, p):
    """Reduced echelon form (rows) of the span of the given vectors mod p."""
    rows = [[int(x) % p for x in v] for v in cols]
    ncols = len(rows[0])
    r = 0
    out = [list(x) for x in rows]
    for c in range(ncols):
        piv = next((i for i in range(r, len(out)) if out[i][c]), None)
        if piv is None:
            continue
        out[r], out[piv] = out[piv], out[r]
        inv = pow(out[r][c], -1, p)
        out[r] = [x * inv % p for x in out[r]]
        for i in range(len(out)):
            if i != r and out[i][c]:
                f = out[i][c]
                out[i] = [(a - f * b) % p for a, b in zip(out[i], out[r])]
        r += 1
    return out[:r]


def cell_of(k, n, p):
    """Jump set of span(first n columns of k mod p) with respect to <e_1..e_j>."""
    N = 2 * n
    cols = []
    for c in range(n):
        v = []
        for r in range(N):
            x = k[r][c]
            x = Fraction(x)
            v.append(x.numerator * pow(x.denominator, -1, p) % p)
        cols.append(v)
    # dim U cap <e_1..e_j> jumps where a vector has its last nonzero entry at j
    rows = _row_reduce_mod([list(reversed(v)) for v in cols], p)
    if len(rows) != n:
        raise ValueError("columns not independent mod p")
    jumps = sorted(N - next(i for i, x in enumerate(r) if x) for r in rows)
    return tuple(jumps)


def weyl_rep(S, n):
    """Permutation matrix whose first n columns are e_s (s in S) and the rest the complement."""
    N = 2 * n
    comp = [j for j in range(1, N + 1) if j not in S]
    order = list(S) + comp
    return [[int(order[c] == r + 1) for c in range(N)] for r in range(N)]


def chi_B(b, P):
    """Value of the inducing character on an upper triangular b."""
    N = 2 * P.n
    out = Fraction(1)
    for i in range(1, N + 1):
        v = padic_valuation(b[i - 1][i - 1], P.p)
        out *= (P.alphas[i - 1] * Fraction(P.q) ** (-(N - i))) ** v
    return out


def cells(n):
    return tau_subsets(n)


def evaluate(fvals, g, P):
    """Value at g of the induced-model function with cell values fvals."""
    b, k = iwasawa(g, P.p)
    return chi_B(b, P) * fvals[cell_of(k, P.n, P.p)]


def up_matrix(P):
    """Matrix of U = sum_m R(u_m t) on the cell basis (column S' -> row S)."""
    n, p = P.n, P.p
    if P.q != p:
        raise ValueError("the brute-force model needs q prime")
    N = 2 * n
    cs = cells(n)
    pos = {S: i for i, S in enumerate(cs)}
    U = [[Fraction(0)] * len(cs) for _ in cs]
    for S in cs:
        w = weyl_rep(S, n)
        for m in product(range(p), repeat=n * n):
            g = [[0] * N for _ in range(N)]
            for i in range(n):
                g[i][i] = p
                g[n + i][n + i] = 1
                for j in range(n):
                    g[i][n + j] = m[i * n + j]
            b, k = iwasawa(linalg.matmul(w, g), p)
            U[pos[S]][pos[cell_of(k, n, p)]] += chi_B(b, P)
    return U, cs


def charpoly(M):
    """Coefficients (constant first) of det(X - M) over Q."""
    X = sympy.Symbol("X")
    poly = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in M]).charpoly(X)
    return [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1]))
            for c in reversed(poly.all_coeffs())]


def brute_force_charpoly(P):
    U, _ = up_matrix(P)
    return charpoly(U)


# -------------------------------------------------------------- coset checks

def gaussian_binomial(N, k, q):
    num, den = 1, 1
    for i in range(k):
        num *= q ** (N - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _det_mod(M, p):
    return int(linalg.det(M)) % p


def in_parahoric(M, n, p):
    """M in GL(2n, Z_p) with lower-left n x n block divisible by p."""
    N = 2 * n
    for r in range(N):
        for c in range(N):
            x = Fraction(M[r][c])
            if x.denominator % p == 0:
                return False
            if r >= n and c < n and x.numerator % p:
                return False
    return linalg.det(M).numerator % p != 0


def parahoric_cosets(q, n, k=1, bound=2_000_000):
    """Brute-force check of J t J = disjoint union of u_m t J over m in M_n(F_q).

    Enumerates J modulo p^k.  Also counts K/J (n-planes in F_q^(2n)) and the
    B-orbits on it (Schubert cells).
    """
    p = _prime_of(q)
    if p != q:
        raise ValueError("q must be prime")
    N = 2 * n
    mod = p ** k
    free = N * N - n * n
    states = mod ** free * (mod // p) ** (n * n)
    if states > bound:
        raise ValueError(f"state space {states} exceeds bound {bound}")
    t = [[Fraction(p) if (r == c and r < n) else Fraction(int(r == c)) for c in range(N)]
         for r in range(N)]
    tinv = linalg.inverse(t)
    hits = {}
    total = 0
    ranges = []
    for r in range(N):
        for c in range(N):
            ranges.append(range(0, mod, p) if (r >= n and c < n) else range(mod))
    for entries in product(*ranges):
        j = [list(entries[r * N:(r + 1) * N]) for r in range(N)]
        A = [row[:n] for row in j[:n]]
        D = [row[n:] for row in j[n:]]
        if _det_mod(A, p) == 0 or _det_mod(D, p) == 0:
            continue
        total += 1
        found = []
        for m in product(range(p), repeat=n * n):
            u = [[int(r == c) for c in range(N)] for r in range(N)]
            for a in range(n):
                for b in range(n):
                    u[a][n + b] = -m[a * n + b]
            M = linalg.matmul(linalg.matmul(linalg.matmul(tinv, u), j), t)
            if in_parahoric(M, n, p):
                found.append(m)
        if len(found) != 1:
            return {"ok": False, "witness": j, "matches": len(found)}
        hits[found[0]] = hits.get(found[0], 0) + 1
    sizes = set(hits.values())
    planes, cell_ids = _planes(n, p)
    out = {"q": q, "n": n, "k": k, "J_size": total, "cosets": len(hits),
           "expected_cosets": q ** (n * n), "equal_fibres": len(sizes) == 1,
           "K_mod_J": planes, "K_mod_J_expected": gaussian_binomial(N, n, q),
           "bruhat_cells": len(cell_ids), "bruhat_expected": comb(N, n)}
    out["ok"] = (len(hits) == q ** (n * n) and len(sizes) == 1
                 and planes == out["K_mod_J_expected"] and len(cell_ids) == comb(N, n))
    return out


def _planes(n, p):
    """Enumerate n-dimensional subspaces of F_p^(2n) by reduced echelon form."""
    N = 2 * n
    seen, cells_seen = set(), set()
    for piv in combinations(range(N), n):
        free = [(r, c) for r in range(n) for c in range(N) if c > piv[r] and c not in piv]
        for vals in product(range(p), repeat=len(free)):
            rows = [[0] * N for _ in range(n)]
            for r, c in enumerate(piv):
                rows[r][c] = 1
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            key = tuple(map(tuple, rows))
            seen.add(key)
            k = [[rows[c][r] for c in range(n)] for r in range(N)]
            cells_seen.add(cell_of(k, n, p))
    return len(seen), cells_seen


# ------------------------------------------------------------ L_beta membership

def l_beta_membership(q, n, beta, h1, h2):
    """Direct test: h1, h2 invertible mod p and h1 h2^-1 = 1 mod p^beta."""
    p = _prime_of(q)
    if _det_mod(h1, p) == 0 or _det_mod(h2, p) == 0:
        return False
    h2inv = linalg.inverse(h2)
    prod_ = linalg.matmul(h1, h2inv)
    for a in range(n):
        for b in range(n):
            x = prod_[a][b] - int(a == b)
            if x != 0 and padic_valuation(x, p) < beta:
                return False
    return True


def l_beta_defining(q, n, beta, h1, h2):
    """Defining condition: t^-beta xi^-1 iota(h1,h2) xi t^beta lies in GL(2n, Z_p)."""
    from .highest_weight import xi_matrix
    p = _prime_of(q)
    N = 2 * n
    g = [[0] * N for _ in range(N)]
    for a in range(n):
        for b in range(n):
            g[a][b] = h1[a][b]
            g[n + a][n + b] = h2[a][b]
    xi = xi_matrix(n)
    xinv = linalg.inverse(xi)
    t = [[Fraction(p) ** beta if (i == j and i < n) else Fraction(int(i == j)) for j in range(N)]
         for i in range(N)]
    tinv = linalg.inverse(t)
    M = linalg.matmul(linalg.matmul(linalg.matmul(linalg.matmul(tinv, xinv), g), xi), t)
    for r in M:
        for x in r:
            if x != 0 and padic_valuation(x, p) < 0:
                return False
    d = linalg.det(M)
    return d != 0 and padic_valuation(d, p) == 0
