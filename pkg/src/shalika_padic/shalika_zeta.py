"""Local twisted Shalika zeta integrals for GL(2) over Q_p and the f0 eigenvector check.

Conventions: the additive character is psi(x) = exp(2 pi i {p^delta x}_p), of
conductor p^-delta; characters chi of conductor p^beta are extended to Q_p^x by
chi(p) = 1; the multiplicative measure gives each class of (Z_p/p^beta)^x mass 1,
so the unit integral of chi psi is the Gauss sum on the nose.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm

from .exactnum import CyclotomicElement, gauss_sum
from . import local_reps
from .local_reps import SatakeParams


def sqrt_q_power(q, k):
    """q^(k/2) as an element of Q(sqrt q)."""
    base = CyclotomicElement.rational(Fraction(q) ** (k // 2))
    if k % 2:
        base = base * CyclotomicElement.sqrt(q)
    return base


def complete_homogeneous(a, b, m):
    """h_m(a, b) = sum_{i+j=m} a^i b^j (0 for m < 0)."""
    if m < 0:
        return Fraction(0)
    return sum(Fraction(a) ** i * Fraction(b) ** (m - i) for i in range(m + 1))


def spherical_whittaker(P, m, delta=0):
    """W(diag(p^m, 1)) for the normalised spherical vector of GL(2)."""
    if P.n != 1:
        raise ValueError("spherical formula implemented for GL(2)")
    k = m + delta
    if k < 0:
        return CyclotomicElement.rational(0)
    a, b = P.alphas
    return CyclotomicElement.rational(complete_homogeneous(a, b, k)) * sqrt_q_power(P.q, -k)


@dataclass
class LocalShalikaFunction:
    q: int
    delta: int
    values: dict            # m -> W(diag(p^m, 1)) as CyclotomicElement
    params: SatakeParams = None
    eta: Fraction = None

    def __call__(self, m):
        if m in self.values:
            return self.values[m]
        if m < min(self.values):
            return CyclotomicElement.rational(0)
        raise KeyError(f"value at {m} outside the stored window")

    @classmethod
    def spherical(cls, P, delta=0, m_max=12):
        vals = {m: spherical_whittaker(P, m, delta) for m in range(-delta - 1, m_max + 1)}
        eta = P.alphas[0] * P.alphas[1] / P.q
        return cls(P.q, delta, vals, P, eta)

    @classmethod
    def eigen(cls, P, root_index, delta=0, m_max=12):
        """U-eigen vector: W(p^(m - delta)) = (alpha q^(-1/2))^m for m >= 0."""
        a = P.alphas[root_index]
        vals = {-delta - 1: CyclotomicElement.rational(0)}
        for m in range(-delta, m_max + 1):
            k = m + delta
            vals[m] = CyclotomicElement.rational(Fraction(a) ** k) * sqrt_q_power(P.q, -k)
        return cls(P.q, delta, vals, P, P.alphas[0] * P.alphas[1] / P.q)


def _psi_times_chi_sum(chi, p, delta, m, beta):
    """sum over u in (Z/p^beta)^x of psi(p^m u) chi(u)."""
    k = -(delta + m)  # psi(p^m u) = zeta_(p^k)^u
    if k > beta:
        raise ValueError("additive character not defined modulo p^beta on this shell")
    M = lcm(chi.order, p ** max(k, 0))
    poly = [0] * M
    mod = p ** beta
    for u in range(1, mod):
        if u % p == 0:
            continue
        e = chi.value_index(u) * (M // chi.order)
        if k > 0:
            e += u * (M // p ** k)
        poly[e % M] += 1
    return CyclotomicElement.from_poly(M, poly)


def local_zeta_twisted(W, chi, j, beta):
    """zeta(j + 1/2; W(. xi t^beta), chi) as an exact finite sum.

    The integrand on p^m O^x equals psi(p^m u) W(diag(p^(m+beta), 1)) chi(u) q^(-m j);
    shells with m < -beta - delta vanish because W does.
    """
    if beta < 1:
        raise ValueError("level must be at least 1")
    p = W.q
    if chi.modulus != p ** beta or not chi.is_primitive():
        raise ValueError("character must be primitive of conductor p^beta")
    total = CyclotomicElement.rational(0)
    lo = -beta - W.delta
    hi = max(W.values) - beta
    for m in range(lo, hi + 1):
        w = W(m + beta)
        if w.is_zero():
            continue
        inner = _psi_times_chi_sum(chi, p, W.delta, m, beta)
        if inner.is_zero():
            continue
        total = total + w * inner * CyclotomicElement.rational(Fraction(p) ** (-m * j))
    return total


def localbirch_rhs(q, n, beta, delta, j, gauss, w_val):
    e = beta * n * (1 - n) + (beta + delta) * n * j
    return (gauss ** n) * CyclotomicElement.rational(Fraction(q) ** e) * w_val


def zeta_check(P, beta, j, delta=0, kind="spherical"):
    """Compare brute force and closed form for every primitive character mod q^beta."""
    from .exactnum import primitive_characters
    W = (LocalShalikaFunction.spherical(P, delta) if kind == "spherical"
         else LocalShalikaFunction.eigen(P, 1, delta))
    rows = []
    for chi in primitive_characters(P.q ** beta):
        lhs = local_zeta_twisted(W, chi, j, beta)
        rhs = localbirch_rhs(P.q, 1, beta, delta, j, gauss_sum(chi), W(-delta))
        rows.append({"chi": chi.to_dict(), "equal": lhs == rhs})
    return {"q": P.q, "beta": beta, "j": j, "delta": delta, "checked": len(rows),
            "ok": all(r["equal"] for r in rows), "rows": rows}


# ---------------------------------------------------------------- f0 vector

def _psi_bar(x, p, delta):
    """conj psi(x) for rational x, as a root of unity."""
    y = Fraction(x) * Fraction(p) ** delta
    den = y.denominator
    num = y.numerator % den
    return CyclotomicElement.zeta(den, (-num) % den) if den > 1 else CyclotomicElement.rational(1)


def f0_values(P, delta):
    """Cell values of f0: supported on B w J (w the long element), normalised at diag(1, p^-delta) w."""
    n, N = P.n, 2 * P.n
    long_cell = tuple(range(n + 1, N + 1))
    d = [[Fraction(0)] * N for _ in range(N)]
    for i in range(N):
        d[i][i] = Fraction(1) if i < n else Fraction(P.p) ** (-delta)
    val = Fraction(P.q) ** (-delta * n * n) / local_reps.chi_B(d, P)
    return {S: (val if S == long_cell else Fraction(0)) for S in local_reps.cells(n)}


def shalika_functional_at(P, fvals, delta):
    """W(t^-delta) = integral over X of f0(((0,1),(1,X)) t^-delta) conj psi(tr X).

    The integrand is invariant under X -> X + M_n(Z_p), so X runs over
    p^-(delta+1) M_n(Z_p) / M_n(Z_p) with unit mass per class; classes outside
    p^-delta M_n(Z_p) are included so that vanishing there is checked.
    """
    n, N, p = P.n, 2 * P.n, P.p
    R = delta + 1
    den = p ** R
    tinv = [[Fraction(0)] * N for _ in range(N)]
    for i in range(N):
        tinv[i][i] = Fraction(p) ** (-delta) if i < n else Fraction(1)
    total = CyclotomicElement.rational(0)
    for entries in product(range(den), repeat=n * n):
        X = [[Fraction(entries[a * n + b], den) for b in range(n)] for a in range(n)]
        g = [[Fraction(0)] * N for _ in range(N)]
        for i in range(n):
            g[i][n + i] = Fraction(1)
            g[n + i][i] = Fraction(1)
            for k in range(n):
                g[n + i][n + k] = X[i][k]
        val = local_reps.evaluate(fvals, local_reps.linalg.matmul(g, tinv), P)
        if val == 0:
            continue
        tr = sum(X[i][i] for i in range(n))
        total = total + CyclotomicElement.rational(val) * _psi_bar(tr, p, delta)
    return total


def f0_eigen_check(P, delta=0):
    n = P.n
    if P.q > 3 or n > 2:
        raise ValueError("state space bound: q <= 3 and n <= 2")
    fvals = f0_values(P, delta)
    U, cs = local_reps.up_matrix(P)
    long_cell = tuple(range(n + 1, 2 * n + 1))
    col = cs.index(long_cell)
    eig = local_reps.q_shift(n, P.q) * local_reps.alpha_tau(P, long_cell)
    image = {S: sum(U[r][c] * fvals[cs[c]] for c in range(len(cs))) for r, S in enumerate(cs)}
    is_eigen = all(image[S] == eig * fvals[S] for S in cs)
    support = all(image[S] == 0 for S in cs if S != long_cell)
    w_val = shalika_functional_at(P, fvals, delta)
    return {"n": n, "q": P.q, "delta": delta, "eigenvalue": str(eig),
            "eigen": is_eigen, "support_preserved": support,
            "W_t_minus_delta": repr(w_val), "normalised": w_val == CyclotomicElement.rational(1),
            "ok": is_eigen and support and w_val == CyclotomicElement.rational(1),
            "column": [str(U[r][col]) for r in range(len(cs))]}
