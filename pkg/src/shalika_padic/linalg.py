"""Small exact linear algebra over Q, Z and Z/p (dense lists of rows)."""

from fractions import Fraction
from math import gcd


def rref(rows, ncols=None):
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    M = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows):
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows, ncols):
    """Basis of {x : A x = 0} over Q as a list of vectors."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    R, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(R, piv):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def rank_mod(rows, p):
    M = [[int(x) % p for x in r] for r in rows]
    if not M:
        return 0
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[r])]
        r += 1
    return r


def hermite_rows(rows):
    """Echelon basis (Hermite form) of the Z-span of integer rows."""
    M = [list(map(int, r)) for r in rows if any(r)]
    if not M:
        return []
    ncols = len(M[0])
    out = []
    c = 0
    while M and c < ncols:
        nz = [r for r in M if r[c] != 0]
        if not nz:
            c += 1
            continue
        zs = [r for r in M if r[c] == 0]
        # euclid on column c
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[c]))
            a = nz[0]
            new = [a]
            for r in nz[1:]:
                q = r[c] // a[c]
                r2 = [x - q * y for x, y in zip(r, a)]
                if r2[c] != 0:
                    new.append(r2)
                elif any(r2):
                    zs.append(r2)
            nz = new
        a = nz[0]
        if a[c] < 0:
            a = [-x for x in a]
        out.append(a)
        M = zs
        c += 1
    # reduce entries above pivots
    pivs = [next(i for i, x in enumerate(r) if x) for r in out]
    for k in range(len(out)):
        pc = pivs[k]
        for i in range(k):
            q = out[i][pc] // out[k][pc]
            if q:
                out[i] = [x - q * y for x, y in zip(out[i], out[k])]
    return out


def echelon_coords(basis, v):
    """Coordinates c with sum c_i basis_i = v for a row-echelon basis, or None."""
    v = [Fraction(x) for x in v]
    coords = []
    for row in basis:
        pc = next(i for i, x in enumerate(row) if x)
        c = v[pc] / row[pc]
        coords.append(c)
        if c:
            v = [a - c * b for a, b in zip(v, row)]
    if any(v):
        return None
    return coords


def lattice_index(rows, n):
    """Index of the Z-span of rows in Z^n (0 if not full rank)."""
    H = hermite_rows(rows)
    if len(H) < n:
        return 0
    d = 1
    for r in H:
        d *= next(x for x in r if x)
    return abs(d)


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def det(A):
    """Exact determinant by fraction-based elimination."""
    M = [[Fraction(x) for x in r] for r in A]
    n = len(M)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        d *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return d


def inverse(A):
    n = len(A)
    aug = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(A)]
    R, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in R]


def gcd_list(xs):
    g = 0
    for x in xs:
        g = gcd(g, int(x))
    return g
