"""End-to-end acceptance checks; each test prints one PASS/FAIL line."""

import random
import time
from fractions import Fraction


from shalika_padic import gl2_symbols, iwasawa, local_reps, shalika_zeta
from shalika_padic.exactnum import primitive_characters
from shalika_padic.highest_weight import manin_congruence_check, transversality_check
from shalika_padic.local_reps import SatakeParams
from shalika_padic.weights import PrimePartition, Weight

RESULTS = []


def record(number, name, ok, started, limit, detail=""):
    elapsed = time.perf_counter() - started
    line = (f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {name}  "
            f"[{elapsed:.1f}s of {limit}s]{'  ' + detail if detail else ''}")
    RESULTS.append(line)
    print(line)
    assert ok, line


def random_fraction(rng):
    return Fraction(rng.choice([-1, 1]) * rng.randint(1, 40), rng.randint(1, 12))


def test_01_manin_congruence(rep_3_1_0_m2):
    t0 = time.perf_counter()
    reports = [manin_congruence_check(rep_3_1_0_m2, 0, 1, beta, 200, 5, seed=7 + beta)
               for beta in (1, 2, 3)]
    ok = all(r["passed"] for r in reports)
    record(1, "Manin congruence mu=(3,1,0,-2), p=5, beta=1..3, 200 samples each", ok, t0, 60)


def test_02_transversality():
    t0 = time.perf_counter()
    ok = True
    for two_n in (2, 4, 6):
        for p in (2, 3, 5):
            rep = transversality_check(two_n, p)
            ok &= rep["ok"] and rep["dim_intersection"] == two_n // 2
    record(2, "transversality for 2n in {2,4,6}, p in {2,3,5}", ok, t0, 5)


def test_03_up_charpoly():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    ok = True
    cases = 0
    for n, q in ((1, 2), (1, 3), (1, 5), (2, 2)):
        for _ in range(5):
            P = SatakeParams(n, q, tuple(random_fraction(rng) for _ in range(2 * n)))
            ok &= [Fraction(x) for x in local_reps.brute_force_charpoly(P)] == local_reps.up_charpoly(P)
            cases += 1
    record(3, "U_P characteristic polynomial, brute force against closed form", ok, t0, 120,
           f"{cases} parameter tuples")


def test_04_coset_partition():
    t0 = time.perf_counter()
    ok = True
    for n, q in ((1, 2), (1, 3), (1, 5), (2, 2)):
        rep = local_reps.parahoric_cosets(q, n)
        ok &= rep["ok"] and rep["cosets"] == q ** (n * n) and rep["equal_fibres"]
    record(4, "J t J is a disjoint union of q^(n^2) cosets", ok, t0, 60)


def test_05_local_zeta():
    t0 = time.perf_counter()
    rng = random.Random(55)
    ok = True
    checked = 0
    for q in (3, 5):
        for _ in range(10):
            P = SatakeParams(1, q, (random_fraction(rng), random_fraction(rng)))
            for beta in (1, 2):
                for j in (0, 1, 2):
                    rep = shalika_zeta.zeta_check(P, beta, j)
                    ok &= rep["ok"]
                    checked += rep["checked"]
    record(5, "local twisted zeta integral equals the closed form", ok, t0, 60,
           f"{checked} character evaluations")


def test_06_f0_eigenvector():
    t0 = time.perf_counter()
    rng = random.Random(6)
    ok = True
    for n, q in ((1, 2), (1, 3), (2, 2)):
        P = SatakeParams(n, q, tuple(random_fraction(rng) for _ in range(2 * n)))
        rep = shalika_zeta.f0_eigen_check(P)
        want = local_reps.q_shift(n, q) * local_reps.alpha_tau(P, tuple(range(n + 1, 2 * n + 1)))
        ok &= rep["ok"] and Fraction(rep["eigenvalue"]) == want
    record(6, "f0 is a U_P eigenvector and W(t^-delta) = 1", ok, t0, 120)


def test_07_distribution_relation():
    t0 = time.perf_counter()
    ok = True
    for name, p in (("11a", 3), ("11a", 7), ("Delta", 11)):
        st = gl2_symbols.ordinary_stabilize(gl2_symbols.reference_symbol(name), p, 12)
        w = st.base.space.w
        mod = st.modulus
        tower = iwasawa.ClassGroupTower.rational(p, 3)
        for sign in (1, -1):
            raw = {}
            for beta in (1, 2, 3):
                ev = gl2_symbols.evaluation_vectors(st, beta, range(w + 1), sign)
                for j in range(w + 1):
                    raw.setdefault(j, {})[beta] = [ev[j][a] for a in tower.levels[beta]]
            for j in range(w + 1):
                ok &= iwasawa.check_distribution_relation(tower, raw[j], st.alpha_int(), mod)[0]
    record(7, "distribution relation for X0(11) at 3, 7 and Delta at 11, levels <= 3", ok, t0, 600)


def test_08_measure_manin(delta_towers):
    t0 = time.perf_counter()
    st, tower, ms = delta_towers
    ok = True
    for j in range(11):
        for j2 in range(11):
            ok &= iwasawa.manin_relation_check(ms[j], ms[j2], j, j2, max_level=2)[0]
    record(8, "eps^(j'-j) mu^j = mu^j' mod 11^beta for all j, j' and beta <= 2", ok, t0, 600)


def test_09_interpolation(delta_towers):
    t0 = time.perf_counter()
    st, tower, ms = delta_towers
    ok = True
    nchars = 0
    for j in range(11):
        rep = gl2_symbols.interpolation_check(st, ms, 1, j)
        ok &= rep["ok"]
        nchars = sum(e["characters"] for e in rep["classes"].values())
    record(9, "interpolation ratio constant over the nontrivial characters mod 11, all j", ok, t0, 600,
           f"{nchars} characters per j")


def test_10_nonvanishing(delta_symbol):
    t0 = time.perf_counter()
    st = gl2_symbols.ordinary_stabilize(delta_symbol, 11, 4)
    _, ms = gl2_symbols.build_padic_L(st, 3, [5])
    cert = iwasawa.nonvanishing_certificate([ms[5]], M=9, level=3, scan_level=2)
    comps_nonzero = all(any(c["coeffs"]) for c in cert["components"])
    finite = cert["status"] == "certified" and cert["bound"] is not None
    scan_ok = finite and len(cert["vanishing"]) <= cert["bound"]
    central = any(not gl2_symbols.birch_twisted_value(delta_symbol, chi, 5).is_zero()
                  for chi in primitive_characters(11))
    ok = comps_nonzero and finite and scan_ok and central
    record(10, "non-vanishing certificate for Delta at 11, precision (11^4, T^9)", ok, t0, 1200,
           f"bound {cert['bound']}, {len(cert['vanishing'])} of {cert['scanned']} scanned vanish")


def _unit(rng, q):
    num = rng.choice([u for u in range(1, 12) if u % q])
    den = rng.choice([u for u in range(1, 6) if u % q])
    return Fraction(rng.choice((1, -1)) * num, den)


def _shalika_case(rng):
    """Random Satake data carrying a Shalika pairing alpha_i alpha_rho(i) = q^(2n-1) eta."""
    n = rng.choice((1, 2))
    q = rng.choice((2, 3, 5, 7))
    w = rng.randint(-3, 3)
    b = (w + 1) // 2 + rng.randint(0, 2)
    if n == 1:
        row = (b, w - b)
    else:
        a = b + rng.randint(0, 2)
        row = (a, b, w - b, w - a)
    mu = Weight.single(row)
    part = PrimePartition.rational(q)
    eta = Fraction(q) ** w * _unit(rng, q)
    target = q ** (2 * n - 1) * eta
    if rng.random() < 0.6:
        # aim at the ordinary valuation: n - 1 free valuations, the last one forced
        need = local_reps.q_ordinary_target(mu, part, str(q))
        small = [rng.randint(need // n - 2, need // n + 1) for _ in range(n - 1)]
        small.append(need - sum(small))
    else:
        small = [rng.randint(-2, w + 2 * n + 1) for _ in range(n)]
    alphas = []
    for v in small:
        a = Fraction(q) ** v * _unit(rng, q)
        alphas += [a, target / a]
    rng.shuffle(alphas)
    return mu, q, SatakeParams(n, q, tuple(alphas)), eta


def test_11_ordinarity_logic():
    t0 = time.perf_counter()
    rng = random.Random(11)
    ok = True
    hits = 0
    for _ in range(500):
        mu, q, P, eta = _shalika_case(rng)
        part = PrimePartition.rational(q)
        try:
            tau = local_reps.q_ordinary_tau(P, mu, part, str(q))
        except local_reps.InconsistencyError:
            ok = False
            continue
        if tau is None:
            continue
        hits += 1
        others = [t for t in local_reps.tau_subsets(P.n)
                  if t != tau and local_reps.strip_holds(P, t, mu, part, str(q))
                  and sum(P.valuations[i - 1] for i in t) == local_reps.q_ordinary_target(mu, part, str(q))]
        ok &= local_reps.q_regular_check(P, tau, eta) and not others
    ok &= hits > 50
    record(11, "Q-ordinary with strip implies Q-regular and a unique tau", ok, t0, 5,
           f"{hits} ordinary cases among 500")


def test_zz_summary():
    print("\n" + "\n".join(RESULTS))
