#!/usr/bin/env python3
"""Recover the Kummer duplication forms delta_1..delta_4 for y^2 = a5 x^5 + ... + a0.

The forms are found by linear interpolation over F_p: random curves and random
divisors, doubled with Cantor's algorithm, give linear conditions
delta_i(k) * k'_1 - delta_1(k) * k'_i = 0. The search space is cut down by the
two weight gradings of the problem. The K-ambiguity (delta_i + c_i K) is fixed by
forcing the coefficient of k2^2 k4^2 to vanish. Integer coefficients are recovered
by rational reconstruction and then checked over Q against exact Cantor doubling.

Usage: derive_duplication.py OUTPUT
"""
import itertools
import random
import sys
from fractions import Fraction

P1 = (1 << 61) - 1
P2 = (1 << 89) - 1


# ---------------------------------------------------------------- polys mod p
def ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(a, b, p):
    n = max(len(a), len(b))
    return ptrim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def psub(a, b, p):
    n = max(len(a), len(b))
    return ptrim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def pmul(a, b, p):
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            r[i + j] = (r[i + j] + x * y) % p
    return ptrim(r)


def pdivmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        d = len(a) - len(b)
        q[d] = c
        for i, y in enumerate(b):
            a[i + d] = (a[i + d] - c * y) % p
        ptrim(a)
    return ptrim(q), a


def pxgcd(a, b, p):
    r0, r1, s0, s1, t0, t1 = a, b, [1], [], [], [1]
    while r1:
        q, r = pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, psub(s0, pmul(q, s1, p), p)
        t0, t1 = t1, psub(t0, pmul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    return [c * inv % p for c in r0], [c * inv % p for c in s0], [c * inv % p for c in t0]


def cantor_double_mod(F, u, v, p):
    d, _, h = pxgcd(u, pmul([2], v, p), p)
    if len(d) != 1:
        return None
    u2 = pmul(u, u, p)
    vv = padd(v, pmul(u, pmul(h, pdivmod(psub(F, pmul(v, v, p), p), u, p)[0], p), p), p)
    vv = pdivmod(vv, u2, p)[1]
    uu = u2
    while len(uu) - 1 > 2:
        uu = pdivmod(psub(F, pmul(vv, vv, p), p), uu, p)[0]
        vv = pdivmod([(-c) % p for c in vv], uu, p)[1]
    inv = pow(uu[-1], -1, p)
    uu = [c * inv % p for c in uu]
    return uu, vv


def kappa_mod(a, u, v, p):
    """Kummer image of a degree-2 divisor with u separable, via the polynomial k4 identity."""
    u0, u1 = u[0], u[1]
    v0 = v[0] if len(v) > 0 else 0
    v1 = v[1] if len(v) > 1 else 0
    s, q = (-u1) % p, u0
    yy = (v1 * v1 * q + v0 * v1 * s + v0 * v0) % p
    num = (2 * a[0] + a[1] * s + 2 * a[2] * q + a[3] * s * q + 2 * a[4] * q * q + a[5] * s * q * q - 2 * yy) % p
    den = (s * s - 4 * q) % p
    if den == 0:
        return None
    return [1, s, q, num * pow(den, -1, p) % p]


# ------------------------------------------------------------- monomial bases
def kmonos():
    return [e for e in itertools.product(range(5), repeat=4) if sum(e) == 4]


def amonos(deg):
    return [m for m in itertools.product(range(deg + 1), repeat=6) if sum(m) == deg]


KW = (0, 1, 2, -2)


def basis(g1, g2):
    """Monomials k^e a^m with k-degree 4, grading g1 (a, k4 weight 1) and g2."""
    out = []
    for e in kmonos():
        ad = g1 - e[3]
        if ad < 0:
            continue
        for m in amonos(ad):
            w = sum(KW[i] * e[i] for i in range(4)) - sum(j * m[j] for j in range(6))
            if w == g2:
                out.append((e, m))
    return out


def mono_eval(e, m, k, a, p):
    r = 1
    for i in range(4):
        r = r * pow(k[i], e[i], p) % p
    for j in range(6):
        r = r * pow(a[j], m[j], p) % p
    return r


def random_sample(p, rng):
    while True:
        a = [rng.randrange(p) for _ in range(6)]
        if a[5] == 0:
            continue
        x1, x2, y1, y2 = (rng.randrange(p) for _ in range(4))
        if x1 == x2:
            continue
        # adjust a0, a1 so that both points lie on the curve
        def rest(x):
            return sum(a[j] * pow(x, j, p) for j in range(2, 6)) % p
        r1 = (y1 * y1 - rest(x1)) % p
        r2 = (y2 * y2 - rest(x2)) % p
        a[1] = (r1 - r2) * pow(x1 - x2, -1, p) % p
        a[0] = (r1 - a[1] * x1) % p
        u = ptrim([x1 * x2 % p, (-x1 - x2) % p, 1])
        v1 = (y1 - y2) * pow(x1 - x2, -1, p) % p
        v = ptrim([(y1 - v1 * x1) % p, v1])
        D = cantor_double_mod(list(a), u, v, p)
        if D is None or len(D[0]) != 3:
            continue
        k = kappa_mod(a, u, v, p)
        k2 = kappa_mod(a, D[0], D[1], p)
        if k is None or k2 is None:
            continue
        return a, k, k2


def nullspace_mod(rows, n, p):
    rows = [list(r) for r in rows]
    piv = []
    r = 0
    for c in range(n):
        pr = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(n) if c not in piv]
    sols = []
    for f in free:
        s = [0] * n
        s[f] = 1
        for i, c in enumerate(piv):
            s[c] = (-rows[i][f]) % p
        sols.append(s)
    return sols


def solve_mod(p, seed, weights):
    rng = random.Random(seed)
    bases = [basis(g1, g2) for (g1, g2) in weights]
    offs = [0]
    for b in bases:
        offs.append(offs[-1] + len(b))
    n = offs[-1]
    rows = []
    # gauge: coefficient of k2^2 k4^2 vanishes in every delta_i
    for i, b in enumerate(bases):
        for j, (e, m) in enumerate(b):
            if e == (0, 2, 0, 2):
                row = [0] * n
                row[offs[i] + j] = 1
                rows.append(row)
    need = len(rows) + 3 * (max(len(b) for b in bases) + 60)
    while len(rows) < need:
        a, k, k2 = random_sample(p, rng)
        vals = [[mono_eval(e, m, k, a, p) for (e, m) in b] for b in bases]
        for i in (1, 2, 3):
            row = [0] * n
            for j, x in enumerate(vals[i]):
                row[offs[i] + j] = x * k2[0] % p
            for j, x in enumerate(vals[0]):
                row[offs[0] + j] = (row[offs[0] + j] - x * k2[i]) % p
            rows.append(row)
    ns = nullspace_mod(rows, n, p)
    return bases, offs, ns


def ratrec(a, p):
    r0, r1, s0, s1 = p, a % p, 0, 1
    bound = int((p // 2) ** 0.5)
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)


# --------------------------------------------------------- exact Q validation
def qtrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def qadd(a, b):
    n = max(len(a), len(b))
    return qtrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def qsub(a, b):
    return qadd(a, [-x for x in b])


def qmul(a, b):
    if not a or not b:
        return []
    r = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            r[i + j] += x * y
    return qtrim(r)


def qdivmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        d = len(a) - len(b)
        q[d] = c
        for i, y in enumerate(b):
            a[i + d] -= c * y
        qtrim(a)
    return qtrim(q), a


def qxgcd(a, b):
    r0, r1, s0, s1, t0, t1 = a, b, [Fraction(1)], [], [], [Fraction(1)]
    while r1:
        q, r = qdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, qsub(s0, qmul(q, s1))
        t0, t1 = t1, qsub(t0, qmul(q, t1))
    c = r0[-1]
    return [x / c for x in r0], [x / c for x in s0], [x / c for x in t0]


def qdouble(F, u, v):
    d, _, h = qxgcd(u, qmul([Fraction(2)], v))
    assert len(d) == 1
    u2 = qmul(u, u)
    vv = qadd(v, qmul(u, qmul(h, qdivmod(qsub(F, qmul(v, v)), u)[0])))
    vv = qdivmod(vv, u2)[1]
    uu = u2
    while len(uu) - 1 > 2:
        uu = qdivmod(qsub(F, qmul(vv, vv)), uu)[0]
        vv = qdivmod([-c for c in vv], uu)[1]
    c = uu[-1]
    return [x / c for x in uu], vv


def qkappa(a, u, v):
    u0, u1 = u[0], u[1]
    v0 = v[0] if len(v) > 0 else 0
    v1 = v[1] if len(v) > 1 else 0
    s, q = -u1, u0
    yy = v1 * v1 * q + v0 * v1 * s + v0 * v0
    num = 2 * a[0] + a[1] * s + 2 * a[2] * q + a[3] * s * q + 2 * a[4] * q * q + a[5] * s * q * q - 2 * yy
    return [Fraction(1), s, q, num / (s * s - 4 * q)]


def qeval(poly, k, a):
    tot = Fraction(0)
    for (e, m), c in poly.items():
        t = Fraction(c)
        for i in range(4):
            t *= k[i] ** e[i]
        for j in range(6):
            t *= a[j] ** m[j]
        tot += t
    return tot


def validate(deltas, trials, seed):
    rng = random.Random(seed)
    done = 0
    while done < trials:
        a = [Fraction(rng.randint(-5, 5)) for _ in range(6)]
        if a[5] == 0:
            continue
        x1 = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
        x2 = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
        y1, y2 = Fraction(rng.randint(-7, 7)), Fraction(rng.randint(-7, 7))
        if x1 == x2:
            continue
        rest = lambda x: sum(a[j] * x ** j for j in range(2, 6))
        r1, r2 = y1 * y1 - rest(x1), y2 * y2 - rest(x2)
        a[1] = (r1 - r2) / (x1 - x2)
        a[0] = r1 - a[1] * x1
        u = [x1 * x2, -x1 - x2, Fraction(1)]
        v1 = (y1 - y2) / (x1 - x2)
        v = qtrim([y1 - v1 * x1, v1])
        try:
            uu, vv = qdouble(list(a), u, v)
        except AssertionError:
            continue
        if len(uu) != 3 or uu[1] ** 2 - 4 * uu[0] == 0:
            continue
        k = qkappa(a, u, v)
        k2 = qkappa(a, uu, vv)
        d = [qeval(dl, k, a) for dl in deltas]
        if d[0] == 0:
            continue
        if [x / d[0] for x in d] != k2:
            return False
        done += 1
    return True


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "duplication.txt"
    weights = [(3, -6), (3, -5), (3, -4), (4, -8)]
    results = []
    for p, seed in ((P1, 1), (P2, 2)):
        bases, offs, ns = solve_mod(p, seed, weights)
        if len(ns) != 1:
            sys.exit("unexpected nullspace dimension %d mod %d" % (len(ns), p))
        results.append((p, bases, offs, ns[0]))
    p, bases, offs, s = results[1]
    # normalise by the k4^4 coefficient of delta_4
    idx = offs[3] + bases[3].index(((0, 0, 0, 4), (0,) * 6))
    inv = pow(s[idx], -1, p)
    s = [x * inv % p for x in s]
    vals = []
    for x in s:
        r = ratrec(x, p)
        if r is None:
            sys.exit("rational reconstruction failed")
        vals.append(r)
    den = 1
    for r in vals:
        den = den * r.denominator // __import__("math").gcd(den, r.denominator)
    ints = [int(r * den) for r in vals]
    g = 0
    for x in ints:
        g = __import__("math").gcd(g, x)
    ints = [x // g for x in ints]
    # consistency with the first prime
    p1, b1, o1, s1 = results[0]
    ref = None
    for x, y in zip(ints, s1):
        if x % p1:
            ref = (y * pow(x, -1, p1)) % p1
            break
    for x, y in zip(ints, s1):
        if (x * ref - y) % p1:
            sys.exit("two-prime mismatch")
    deltas = []
    for i, b in enumerate(bases):
        d = {}
        for j, (e, m) in enumerate(b):
            c = ints[offs[i] + j]
            if c:
                d[(e, m)] = c
        deltas.append(d)
    if not validate(deltas, 60, 7):
        sys.exit("validation over Q failed")
    with open(out, "w") as f:
        f.write("# Kummer duplication forms for y^2 = a5 x^5 + a4 x^4 + a3 x^3 + a2 x^2 + a1 x + a0\n")
        f.write("# line: i e1 e2 e3 e4 m0 m1 m2 m3 m4 m5 c\n")
        f.write("# term c * k1^e1 k2^e2 k3^e3 k4^e4 * a0^m0 ... a5^m5 of delta_i\n")
        for i, d in enumerate(deltas):
            for (e, m), c in sorted(d.items(), key=lambda t: (tuple(-x for x in t[0][0]), t[0][1])):
                f.write("%d %s %s %d\n" % (i + 1, " ".join(map(str, e)), " ".join(map(str, m)), c))
    print("terms:", [len(d) for d in deltas])


if __name__ == "__main__":
    main()
