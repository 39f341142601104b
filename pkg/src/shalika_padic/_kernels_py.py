"""Pure-Python versions of the hot loops (reference and fallback)."""


def pullback_functional(a, b, c, d, phi, w, modulus):
    """Row vector v with v . P = phi . (P o g) for g = ((a, b), (c, d)), mod modulus.

    Polynomials of degree w are coefficient lists on X^i Y^(w-i); P o g is
    P(aX + bY, cX + dY).
    """
    # powers of the linear forms aX + bY and cX + dY, as lists indexed by the X-degree
    A = [[1]]
    C = [[1]]
    for _ in range(w):
        prev = A[-1]
        nxt = [0] * (len(prev) + 1)
        for i, x in enumerate(prev):
            nxt[i] = (nxt[i] + x * b) % modulus
            nxt[i + 1] = (nxt[i + 1] + x * a) % modulus
        A.append(nxt)
        prev = C[-1]
        nxt = [0] * (len(prev) + 1)
        for i, x in enumerate(prev):
            nxt[i] = (nxt[i] + x * d) % modulus
            nxt[i + 1] = (nxt[i + 1] + x * c) % modulus
        C.append(nxt)
    out = [0] * (w + 1)
    for i in range(w + 1):
        Ai, Ci = A[i], C[w - i]
        s = 0
        for r, x in enumerate(Ai):
            if x:
                for t, y in enumerate(Ci):
                    s += x * y * phi[r + t]
        out[i] = s % modulus
    return out


def fiber_sum(values, index, nbins, modulus):
    """out[index[i]] += values[i], reduced mod modulus."""
    out = [0] * nbins
    for v, k in zip(values, index):
        out[k] += v
    return [x % modulus for x in out]


def binomial_transport(coeffs, exps, M, modulus):
    """sum_x coeffs[x] (1 + T)^exps[x] truncated below T^M, mod modulus.

    Coefficients are first aggregated by exponent, then Horner's rule in
    (1 + T) is run from the top exponent down.
    """
    if not exps:
        return [0] * M
    E = max(exps)
    agg = [0] * (E + 1)
    for cval, e in zip(coeffs, exps):
        agg[e] = (agg[e] + cval) % modulus
    out = [0] * M
    for e in range(E, -1, -1):
        # out <- out * (1 + T) + agg[e]
        for i in range(M - 1, 0, -1):
            out[i] = (out[i] + out[i - 1]) % modulus
        out[0] = (out[0] + agg[e]) % modulus
    return out
