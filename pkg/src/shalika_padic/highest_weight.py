"""Integral highest-weight lattices for GL(2n), 2n <= 4, and the critical functionals.

The representation of highest weight mu is realised as the cyclic span of the
lowest weight vector inside

    det^(mu_2n)  (x)  Lambda^1^(a_1) (x) ... (x) Lambda^(2n-1)^(a_(2n-1)),

a_k = mu_k - mu_(k+1).  The lattice is the span of all divided powers of the
positive root vectors applied to the lowest weight vector v0 (the Kostant
form), so it is stable under GL(2n, Z).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, prod
import heapq
import json
import random

import numpy as np

from . import linalg
from .weights import Weight, WeightError, crit_set, purity_weight


# -------------------------------------------------------------- small matrices

def antidiag(n):
    return [[int(i + j == n - 1) for j in range(n)] for i in range(n)]


def block(A, B, C, D):
    top = [ra + rb for ra, rb in zip(A, B)]
    bot = [rc + rd for rc, rd in zip(C, D)]
    return top + bot


def zeros(n, m=None):
    return [[0] * (m if m is not None else n) for _ in range(n)]


def xi_matrix(n, corrupt=False):
    """The 2n x 2n matrix ((1, w), (0, w)); corrupt=True replaces w by 1."""
    w = linalg.identity(n) if corrupt else antidiag(n)
    return block(linalg.identity(n), w, zeros(n), w)


def xi_inverse(n):
    w = antidiag(n)
    neg = [[-x for x in r] for r in linalg.identity(n)]
    return block(linalg.identity(n), neg, zeros(n), w)


def split_blocks(M, n):
    A = [r[:n] for r in M[:n]]
    B = [r[n:] for r in M[:n]]
    C = [r[:n] for r in M[n:]]
    D = [r[n:] for r in M[n:]]
    return A, B, C, D


def conj_w(X):
    """X^w = w X w for the antidiagonal w."""
    n = len(X)
    return [[X[n - 1 - i][n - 1 - j] for j in range(n)] for i in range(n)]


def _add(*Ms):
    return [[sum(v) for v in zip(*rows)] for rows in zip(*Ms)]


def _neg(M):
    return [[-x for x in r] for r in M]


def xi_identities_hold(A, B, C, D):
    """Check both conjugation formulas for xi on the block matrix ((A,B),(C,D))."""
    n = len(A)
    w = antidiag(n)
    g = block(A, B, C, D)
    xi, xinv = xi_matrix(n), xi_inverse(n)
    mm = linalg.matmul
    lhs1 = mm(mm(xinv, g), xi)
    rhs1 = block(_add(A, _neg(C)),
                 mm(_add(A, _neg(D), B, _neg(C)), w),
                 mm(w, C),
                 conj_w(_add(C, D)))
    lhs2 = mm(mm(xi, g), xinv)
    wC = mm(w, C)
    rhs2 = block(_add(A, wC),
                 _add(conj_w(D), _neg(A), mm(B, w), _neg(wC)),
                 wC,
                 _add(conj_w(D), _neg(wC)))
    return lhs1 == rhs1 and lhs2 == rhs2


# ------------------------------------------------------------- transversality

def _unit(N, i, j):
    M = zeros(N)
    M[i][j] = 1
    return M


def _flat(M):
    return [x for r in M for x in r]


def transversality_check(two_n, p, corrupt=False):
    """Rank and membership checks for g = h + xi b^- and xi(n cap h) inside [h,h] + xi n^-.

    Returns a dict with the individual verdicts; ``ok`` is their conjunction.
    """
    if two_n % 2 or two_n not in (2, 4, 6):
        raise ValueError("2n must be 2, 4 or 6")
    n = two_n // 2
    N = two_n
    xi = xi_matrix(n, corrupt)
    xinv = [[int(x) for x in r] for r in linalg.inverse(xi)]
    mm = linalg.matmul
    h_basis = [_unit(N, i, j) for i in range(N) for j in range(N) if (i < n) == (j < n)]
    bminus = [mm(mm(xi, _unit(N, i, j)), xinv) for i in range(N) for j in range(N) if i >= j]
    rows = [_flat(M) for M in h_basis + bminus]
    rank_q = linalg.rank(rows)
    index_z = linalg.lattice_index(rows, N * N)
    rank_p = linalg.rank_mod(rows, p)
    inter = len(h_basis) + len(bminus) - rank_q
    out = {"2n": N, "p": p, "rank_Q": rank_q, "index_Z": index_z, "rank_mod_p": rank_p,
           "dim_intersection": inter}
    out["spans_Q"] = rank_q == N * N
    out["spans_Z"] = index_z == 1
    out["spans_mod_p"] = rank_p == N * N
    out["intersection_dim_is_n"] = inter == n
    # membership through the explicit solution, for each basis element of n cap h
    w = linalg.identity(n) if corrupt else antidiag(n)

    def cw(X):
        return mm(mm(w, X), w)

    member = True
    for blk in (0, 1):
        for i in range(n):
            for j in range(i + 1, n):
                n1 = _unit(n, i, j) if blk == 0 else zeros(n)
                n2 = _unit(n, i, j) if blk == 1 else zeros(n)
                h1 = _add(n1, cw(n2))
                nb1 = _neg(cw(n2))
                nb2 = _neg(cw(n1))
                trace_free = sum(h1[k][k] for k in range(n)) == 0
                lower = all(nb1[a][b] == 0 and nb2[a][b] == 0
                            for a in range(n) for b in range(n) if b >= a)
                target = mm(mm(xi, block(n1, zeros(n), zeros(n), n2)), xinv)
                rhs = _add(block(h1, zeros(n), zeros(n), h1),
                           mm(mm(xi, block(nb1, zeros(n), zeros(n), nb2)), xinv))
                same = target == rhs and all((a - b) % p == 0 for a, b in zip(_flat(target), _flat(rhs)))
                member = member and trace_free and lower and same
    out["membership"] = member
    out["ok"] = (out["spans_Q"] and out["spans_Z"] and out["spans_mod_p"]
                 and out["intersection_dim_is_n"] and member)
    return out


# ------------------------------------------------------ exterior power actions

@lru_cache(maxsize=None)
def _subsets(N, k):
    return tuple(combinations(range(N), k))


@lru_cache(maxsize=None)
def wedge_lie(N, k, i, j):
    """Matrix of the elementary matrix E_ij acting on Lambda^k (columns = inputs)."""
    subs = _subsets(N, k)
    index = {s: a for a, s in enumerate(subs)}
    M = np.zeros((len(subs), len(subs)), dtype=object)
    M[:, :] = 0
    for a, s in enumerate(subs):
        if j not in s:
            continue
        if i == j:
            M[a, a] += 1
            continue
        if i in s:
            continue
        t = [i if x == j else x for x in s]
        # sort t with sign
        sign = 1
        arr = list(t)
        for x in range(len(arr)):
            for y in range(len(arr) - 1 - x):
                if arr[y] > arr[y + 1]:
                    arr[y], arr[y + 1] = arr[y + 1], arr[y]
                    sign = -sign
        M[index[tuple(arr)], a] += sign
    return M


def wedge_group(g, k):
    """Compound matrix: action of g on Lambda^k (columns = inputs)."""
    N = len(g)
    subs = _subsets(N, k)
    M = np.zeros((len(subs), len(subs)), dtype=object)
    for a, S in enumerate(subs):
        for b, T in enumerate(subs):
            M[a, b] = linalg.det([[g[r][c] for c in T] for r in S]) if k else Fraction(1)
    return M


def weyl_dimension(row):
    N = len(row)
    num = prod(row[i] - row[j] + j - i for i in range(N) for j in range(i + 1, N))
    den = prod(j - i for i in range(N) for j in range(i + 1, N))
    return num // den


@dataclass
class HighestWeightLattice:
    mu: Weight
    factors: tuple          # exterior degrees k of the tensor factors
    det_power: int
    dim: int
    weights: list           # weight of each lattice basis vector
    basis: list             # dense ambient integer vectors (numpy object arrays)
    generators: dict        # name -> dim x dim Fraction matrix (columns = inputs)
    v0_index: int

    # ---------------------------------------------------------------- helpers
    @property
    def N(self):
        return 2 * self.mu.n

    @property
    def shape(self):
        return tuple(comb(self.N, k) for k in self.factors)

    def coords(self, amb):
        """Lattice coordinates of an ambient vector inside the representation."""
        return _coords(self, amb)

    def ambient_of(self, c):
        out = np.zeros(len(self.basis[0]), dtype=object)
        out[:] = 0
        for ci, b in zip(c, self.basis):
            if ci:
                out = out + ci * b
        return out

    def lie_matrix(self, i, j):
        key = f"E{i + 1}{j + 1}"
        if key not in self.generators:
            self.generators[key] = _lie_matrix(self, i, j)
        return self.generators[key]

    def group_matrix(self, g):
        """Matrix of a rational 2n x 2n matrix g in lattice coordinates."""
        return _group_matrix(self, g)

    def dump(self):
        gens = {}
        for name, M in self.generators.items():
            gens[name] = [[r, c, str(M[r][c])] for r in range(self.dim)
                          for c in range(self.dim) if M[r][c] != 0]
        return json.dumps({"dim": self.dim, "mu": list(self.mu.components[0]),
                           "weights": [list(w) for w in self.weights],
                           "generators": gens}, sort_keys=True)


def _ambient_weights(N, factors, det_power):
    shape = tuple(comb(N, k) for k in factors)
    subsets = [_subsets(N, k) for k in factors]
    wts = np.zeros(shape + (N,), dtype=np.int64)
    for idx in np.ndindex(*shape):
        w = [det_power] * N
        for f, a in enumerate(idx):
            for x in subsets[f][a]:
                w[x] += 1
        wts[idx] = w
    return wts.reshape(-1, N)


def _apply_lie(factors, shape, i, j, vec, N):
    """Ambient action of E_ij on a flat vector (derivation on the tensor product)."""
    A = vec.reshape(shape)
    out = np.zeros(shape, dtype=object)
    out[...] = 0
    for f, k in enumerate(factors):
        if k == 0:
            continue
        M = wedge_lie(N, k, i, j)
        if not M.any():
            continue
        out = out + np.moveaxis(np.tensordot(M, A, axes=([1], [f])), 0, f)
    return out.reshape(-1)


def _apply_group(factors, shape, mats, scalar, vec):
    A = vec.reshape(shape)
    for f, k in enumerate(factors):
        if k == 0:
            continue
        A = np.moveaxis(np.tensordot(mats[k], A, axes=([1], [f])), 0, f)
    return (A * scalar).reshape(-1)


def build_rep(mu, dim_bound=3000):
    """Construct the lattice U(n_Z) v0 for a dominant weight with one embedding, 2n <= 4."""
    if len(mu.embeddings) != 1:
        raise WeightError("the lattice engine supports a single embedding")
    row = mu.components[0]
    N = len(row)
    if N > 4:
        raise WeightError("the lattice engine supports 2n <= 4")
    dim = weyl_dimension(row)
    if dim > dim_bound:
        raise WeightError(f"dimension {dim} exceeds the bound {dim_bound}")
    factors = [0]
    for k in range(1, N):
        factors += [k] * (row[k - 1] - row[k])
    factors = tuple(factors)
    det_power = row[-1]
    shape = tuple(comb(N, k) for k in factors)
    amb_w = _ambient_weights(N, factors, det_power)
    size = len(amb_w)
    # weight -> ambient indices
    by_weight = {}
    for a, w in enumerate(map(tuple, amb_w)):
        by_weight.setdefault(w, []).append(a)

    # lowest weight vector: tensor of e_(N-k+1) ^ ... ^ e_N
    v0 = np.zeros(size, dtype=object)
    v0[:] = 0
    idx = tuple(_subsets(N, k).index(tuple(range(N - k, N))) for k in factors)
    v0[np.ravel_multi_index(idx, shape)] = 1
    low = tuple(reversed(row))

    def height(w):
        return sum((N - 1 - i) * x for i, x in enumerate(w))

    pending = {low: [v0]}
    heap = [(height(low), low)]
    seen = {low}
    spaces = {}
    while heap:
        _, w = heapq.heappop(heap)
        gens = pending.pop(w)
        cols = by_weight[w]
        rows = [[int(v[c]) for c in cols] for v in gens]
        H = linalg.hermite_rows(rows)
        vecs = []
        for r in H:
            v = np.zeros(size, dtype=object)
            v[:] = 0
            for c, x in zip(cols, r):
                v[c] = x
            vecs.append(v)
        spaces[w] = vecs
        for i in range(N):
            for j in range(i + 1, N):
                for v in vecs:
                    x, k = v, 0
                    while True:
                        k += 1
                        y = _apply_lie(factors, shape, i, j, x, N)
                        if not y.any():
                            break
                        # divided power: e^(k) v = e(e^(k-1) v) / k
                        assert all(int(t) % k == 0 for t in y), "divided power not integral"
                        x = np.array([int(t) // k for t in y], dtype=object)
                        w2 = tuple(a + k * ((c == i) - (c == j)) for c, a in enumerate(w))
                        pending.setdefault(w2, []).append(x)
                        if w2 not in seen:
                            seen.add(w2)
                            heapq.heappush(heap, (height(w2), w2))
    weights, basis = [], []
    for w in sorted(spaces, key=lambda w: (height(w), w)):
        for v in spaces[w]:
            weights.append(w)
            basis.append(v)
    if len(basis) != dim:
        raise AssertionError(f"lattice rank {len(basis)} differs from Weyl dimension {dim}")
    L = HighestWeightLattice(mu, factors, det_power, dim, weights, basis, {}, 0)
    L._shape = shape
    L._by_weight = by_weight
    L._positions = {}
    for b, w in enumerate(weights):
        L._positions.setdefault(w, []).append(b)
    L._echelon = {w: [[int(vec[c]) for c in by_weight[w]] for vec in spaces[w]] for w in spaces}
    for a in range(N - 1):
        L.lie_matrix(a, a + 1)
        L.lie_matrix(a + 1, a)
    for a in range(N):
        L.lie_matrix(a, a)
    return L


def _coords(L, amb):
    c = [Fraction(0)] * L.dim
    for w, cols in L._by_weight.items():
        sub = [amb[a] for a in cols]
        if not any(x != 0 for x in sub):
            continue
        if w not in L._echelon:
            raise ValueError("vector leaves the representation")
        cc = linalg.echelon_coords(L._echelon[w], sub)
        if cc is None:
            raise ValueError("vector leaves the representation")
        for b, x in zip(L._positions[w], cc):
            c[b] = x
    return c


def _lie_matrix(L, i, j):
    cols = []
    for v in L.basis:
        y = _apply_lie(L.factors, L._shape, i, j, v, L.N)
        if i == j:
            y = y + L.det_power * v
        cols.append(_coords(L, y))
    return [list(r) for r in zip(*cols)]


def _group_matrix(L, g):
    g = [[Fraction(x) for x in r] for r in g]
    mats = {k: wedge_group(g, k) for k in set(L.factors) if k}
    scalar = linalg.det(g) ** L.det_power
    cols = []
    for v in L.basis:
        y = _apply_group(L.factors, L._shape, mats, scalar, v)
        cols.append(_coords(L, y))
    return [list(r) for r in zip(*cols)]


def matvec(M, v):
    return [sum(a * b for a, b in zip(row, v)) for row in M]


def rowvec_mat(r, M):
    return [sum(r[i] * M[i][c] for i in range(len(r))) for c in range(len(M[0]))]


# --------------------------------------------------------- bullet action

def tp_exponents(L):
    """d_b with t_p^beta . v_b = p^(beta * (d_b + s0)) v_b and mu^vee(t_p^beta) = p^(-beta s0)."""
    n = L.mu.n
    s0 = sum(L.mu.components[0][n:])
    return [sum(w[:n]) - s0 for w in L.weights]


def bullet_action(L, g_factors, v, p, N):
    """Apply g = q t_p^beta u^- to lattice coordinates v, returning coordinates mod p^N.

    g_factors is (q, beta, u_minus) with q, u_minus rational 2n x 2n matrices
    (either may be None for the identity).
    """
    q, beta, um = g_factors
    mod = p ** N
    from .exactnum import reduce_mod
    v = [Fraction(x) for x in v]
    for x in v:
        if x.denominator % p == 0:
            raise ValueError("vector not in the lattice (denominator divisible by p)")
    if um is not None:
        v = matvec(L.group_matrix(um), v)
    d = tp_exponents(L)
    v = [x * Fraction(p) ** (beta * e) for x, e in zip(v, d)]
    if q is not None:
        v = matvec(L.group_matrix(q), v)
    return [reduce_mod(x, mod) for x in v]


# -------------------------------------------------------- critical functionals

@dataclass
class KappaResult:
    j: int
    solution_dim: int
    functional: list  # normalised row vector in lattice coordinates, or None


def kappa_j(L, j):
    """Functional killed by [h,h] with torus weight (j,..,j, w-j,..,w-j), normalised on xi v0."""
    n = L.mu.n
    w = purity_weight(L.mu)
    target = tuple([j] * n + [w - j] * n)
    pos = L._positions.get(target, [])
    if not pos:
        return KappaResult(j, 0, None)
    eqs = []
    pairs = [(a, a + 1) for a in range(n - 1)] + [(a, a + 1) for a in range(n, 2 * n - 1)]
    for a, b in pairs:
        for (x, y) in ((a, b), (b, a)):
            M = L.lie_matrix(x, y)
            for col in range(L.dim):
                eq = [M[r][col] for r in pos]
                if any(eq):
                    eqs.append(eq)
    null = linalg.nullspace(eqs, len(pos))
    if len(null) != 1:
        return KappaResult(j, len(null), None)
    func = [Fraction(0)] * L.dim
    for r, c in zip(pos, null[0]):
        func[r] = c
    Xi = xi_lattice_matrix(L)
    xv0 = [Xi[r][L.v0_index] for r in range(L.dim)]
    val = sum(a * b for a, b in zip(func, xv0))
    if val == 0:
        raise AssertionError("kappa vanishes on xi v0")
    return KappaResult(j, 1, [x / val for x in func])


def xi_lattice_matrix(L):
    if "xi" not in L.generators:
        L.generators["xi"] = L.group_matrix(xi_matrix(L.mu.n))
    return L.generators["xi"]


def manin_congruence_check(L, j, j2, beta, num_samples, p, seed=0):
    """Sample v in (xi t_p^beta) . V_O and compare kappa_j and kappa_j2 modulo p^beta."""
    cs = crit_set(L.mu)
    if len(cs) < 2:
        raise ValueError("nothing to compare: fewer than two critical integers")
    if j not in cs or j2 not in cs:
        raise ValueError("j and j' must be critical")
    k1, k2 = kappa_j(L, j).functional, kappa_j(L, j2).functional
    Xi = xi_lattice_matrix(L)
    r1, r2 = rowvec_mat(k1, Xi), rowvec_mat(k2, Xi)
    d = tp_exponents(L)
    mod = p ** beta
    rng = random.Random(seed)
    bound = p ** beta
    witnesses = []
    for s in range(num_samples):
        u = [rng.randint(-bound, bound) for _ in range(L.dim)]
        tu = [x * p ** (beta * e) for x, e in zip(u, d)]
        a = sum(x * y for x, y in zip(r1, tu))
        b = sum(x * y for x, y in zip(r2, tu))
        for val in (a, b):
            if val.denominator % p == 0:
                witnesses.append({"sample": s, "reason": "non-integral value", "value": str(val)})
        diff = a - b
        if diff.denominator % p == 0 or (diff.numerator * pow(diff.denominator, -1, mod)) % mod:
            witnesses.append({"sample": s, "u": u, "kappa_j": str(a), "kappa_j2": str(b)})
    # exhaustive check on the lattice basis (the congruence is linear)
    basis_ok = all(
        (Fraction(x - y) * p ** (beta * e)).denominator % p != 0
        and (Fraction(x - y) * p ** (beta * e) / mod).denominator % p != 0
        for x, y, e in zip(r1, r2, d))
    return {"j": j, "j2": j2, "beta": beta, "p": p, "samples": num_samples, "seed": seed,
            "passed": not witnesses and basis_ok, "basis_check": basis_ok,
            "witnesses": witnesses[:5]}
