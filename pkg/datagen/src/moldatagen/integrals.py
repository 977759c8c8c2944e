"""Molecular integrals over contracted Cartesian Gaussians.

McMurchie-Davidson scheme: Hermite expansion coefficients E_t^{ij} plus
Hermite Coulomb integrals R_tuv driven by the Boys function. Angular
momenta here stay tiny (s and p shells), so plain recursion is fast enough.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import hyp1f1


def boys(n: int, x: float) -> float:
    return hyp1f1(n + 0.5, n + 1.5, -x) / (2.0 * n + 1.0)


def boys_sequence(n_max: int, x: float) -> np.ndarray:
    """F_0..F_{n_max} via one hyp1f1 call plus stable downward recursion."""
    out = np.empty(n_max + 1)
    out[n_max] = boys(n_max, x)
    ex = math.exp(-x)
    for n in range(n_max - 1, -1, -1):
        out[n] = (2.0 * x * out[n + 1] + ex) / (2 * n + 1)
    return out


def hermite_coef(i: int, j: int, t: int, q_dist: float, a: float, b: float) -> float:
    """E_t^{ij} for a pair of 1D Gaussians separated by q_dist = Ax - Bx."""
    p = a + b
    mu = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return math.exp(-mu * q_dist * q_dist)
    if j == 0:
        return (
            hermite_coef(i - 1, j, t - 1, q_dist, a, b) / (2 * p)
            - (mu * q_dist / a) * hermite_coef(i - 1, j, t, q_dist, a, b)
            + (t + 1) * hermite_coef(i - 1, j, t + 1, q_dist, a, b)
        )
    return (
        hermite_coef(i, j - 1, t - 1, q_dist, a, b) / (2 * p)
        + (mu * q_dist / b) * hermite_coef(i, j - 1, t, q_dist, a, b)
        + (t + 1) * hermite_coef(i, j - 1, t + 1, q_dist, a, b)
    )


def primitive_overlap(a, lmn1, ra, b, lmn2, rb) -> float:
    p = a + b
    out = (math.pi / p) ** 1.5
    for k in range(3):
        out *= hermite_coef(lmn1[k], lmn2[k], 0, ra[k] - rb[k], a, b)
    return out


def primitive_kinetic(a, lmn1, ra, b, lmn2, rb) -> float:
    l2, m2, n2 = lmn2
    term0 = b * (2 * (l2 + m2 + n2) + 3) * primitive_overlap(a, lmn1, ra, b, lmn2, rb)
    term1 = -2 * b**2 * (
        primitive_overlap(a, lmn1, ra, b, (l2 + 2, m2, n2), rb)
        + primitive_overlap(a, lmn1, ra, b, (l2, m2 + 2, n2), rb)
        + primitive_overlap(a, lmn1, ra, b, (l2, m2, n2 + 2), rb)
    )
    term2 = -0.5 * (
        l2 * (l2 - 1) * primitive_overlap(a, lmn1, ra, b, (l2 - 2, m2, n2), rb)
        + m2 * (m2 - 1) * primitive_overlap(a, lmn1, ra, b, (l2, m2 - 2, n2), rb)
        + n2 * (n2 - 1) * primitive_overlap(a, lmn1, ra, b, (l2, m2, n2 - 2), rb)
    )
    return term0 + term1 + term2


def hermite_coulomb_table(tmax: int, umax: int, vmax: int, p: float,
                          pc: np.ndarray) -> np.ndarray:
    """R^0_{tuv} for all t<=tmax, u<=umax, v<=vmax (one Boys sequence)."""
    n_max = tmax + umax + vmax
    f = boys_sequence(n_max, p * float(pc @ pc))
    r = np.zeros((n_max + 1, tmax + 1, umax + 1, vmax + 1))
    scale = 1.0
    for n in range(n_max + 1):
        r[n, 0, 0, 0] = scale * f[n]
        scale *= -2.0 * p
    for t in range(1, tmax + 1):
        for n in range(n_max - t + 1):
            val = pc[0] * r[n + 1, t - 1, 0, 0]
            if t > 1:
                val += (t - 1) * r[n + 1, t - 2, 0, 0]
            r[n, t, 0, 0] = val
    for u in range(1, umax + 1):
        for t in range(tmax + 1):
            for n in range(n_max - t - u + 1):
                val = pc[1] * r[n + 1, t, u - 1, 0]
                if u > 1:
                    val += (u - 1) * r[n + 1, t, u - 2, 0]
                r[n, t, u, 0] = val
    for v in range(1, vmax + 1):
        for u in range(umax + 1):
            for t in range(tmax + 1):
                for n in range(n_max - t - u - v + 1):
                    val = pc[2] * r[n + 1, t, u, v - 1]
                    if v > 1:
                        val += (v - 1) * r[n + 1, t, u, v - 2]
                    r[n, t, u, v] = val
    return r[0]


def hermite_coulomb(t: int, u: int, v: int, n: int, p: float, pc: np.ndarray,
                    dist2: float) -> float:
    if t == u == v == 0:
        return (-2.0 * p) ** n * boys(n, p * dist2)
    if t > 0:
        val = 0.0
        if t > 1:
            val += (t - 1) * hermite_coulomb(t - 2, u, v, n + 1, p, pc, dist2)
        return val + pc[0] * hermite_coulomb(t - 1, u, v, n + 1, p, pc, dist2)
    if u > 0:
        val = 0.0
        if u > 1:
            val += (u - 1) * hermite_coulomb(t, u - 2, v, n + 1, p, pc, dist2)
        return val + pc[1] * hermite_coulomb(t, u - 1, v, n + 1, p, pc, dist2)
    val = 0.0
    if v > 1:
        val += (v - 1) * hermite_coulomb(t, u, v - 2, n + 1, p, pc, dist2)
    return val + pc[2] * hermite_coulomb(t, u, v - 1, n + 1, p, pc, dist2)


def _hermite_coefs_1d(i: int, j: int, q_dist: float, a: float, b: float) -> np.ndarray:
    return np.array([hermite_coef(i, j, t, q_dist, a, b) for t in range(i + j + 1)])


def primitive_nuclear(a, lmn1, ra, b, lmn2, rb, rc) -> float:
    """Attraction integral against a unit positive charge at rc (sign applied later)."""
    p = a + b
    center = (a * ra + b * rb) / p
    pc = center - rc
    ex = _hermite_coefs_1d(lmn1[0], lmn2[0], ra[0] - rb[0], a, b)
    ey = _hermite_coefs_1d(lmn1[1], lmn2[1], ra[1] - rb[1], a, b)
    ez = _hermite_coefs_1d(lmn1[2], lmn2[2], ra[2] - rb[2], a, b)
    r = hermite_coulomb_table(ex.size - 1, ey.size - 1, ez.size - 1, p, pc)
    val = np.einsum("t,u,v,tuv->", ex, ey, ez, r)
    return 2.0 * math.pi / p * float(val)


def primitive_eri(a, lmn1, ra, b, lmn2, rb, c, lmn3, rc, d, lmn4, rd) -> float:
    """Chemists' (ab|cd) over primitives."""
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    rp = (a * ra + b * rb) / p
    rq = (c * rc + d * rd) / q
    pq = rp - rq
    e1 = [
        _hermite_coefs_1d(lmn1[k], lmn2[k], ra[k] - rb[k], a, b) for k in range(3)
    ]
    e2 = [
        _hermite_coefs_1d(lmn3[k], lmn4[k], rc[k] - rd[k], c, d) for k in range(3)
    ]
    # fold (-1)^(tau+nu+phi) into the ket-side coefficients
    for k in range(3):
        signs = np.where(np.arange(e2[k].size) % 2 == 1, -1.0, 1.0)
        e2[k] = e2[k] * signs
    r = hermite_coulomb_table(
        e1[0].size + e2[0].size - 2,
        e1[1].size + e2[1].size - 2,
        e1[2].size + e2[2].size - 2,
        alpha,
        pq,
    )
    ex = np.convolve(e1[0], e2[0])
    ey = np.convolve(e1[1], e2[1])
    ez = np.convolve(e1[2], e2[2])
    val = np.einsum("t,u,v,tuv->", ex, ey, ez, r)
    return float(val) * 2.0 * math.pi**2.5 / (p * q * math.sqrt(p + q))


def primitive_dipole(a, lmn1, ra, b, lmn2, rb, direction: int) -> float:
    """<G_a| x_dir |G_b> about the origin."""
    p = a + b
    center = (a * ra + b * rb) / p
    comps = []
    for k in range(3):
        e0 = hermite_coef(lmn1[k], lmn2[k], 0, ra[k] - rb[k], a, b)
        if k == direction:
            e1 = hermite_coef(lmn1[k], lmn2[k], 1, ra[k] - rb[k], a, b)
            comps.append(e1 + center[k] * e0)
        else:
            comps.append(e0)
    return comps[0] * comps[1] * comps[2] * (math.pi / p) ** 1.5


def _contract2(fn, fa, fb, *extra) -> float:
    total = 0.0
    for a, ca in zip(fa.exponents, fa.coefficients):
        for b, cb in zip(fb.exponents, fb.coefficients):
            total += ca * cb * fn(a, fa.lmn, fa.center, b, fb.lmn, fb.center, *extra)
    return total


def overlap_matrix(aos) -> np.ndarray:
    n = len(aos)
    s = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            s[i, j] = s[j, i] = _contract2(primitive_overlap, aos[i], aos[j])
    return s


def kinetic_matrix(aos) -> np.ndarray:
    n = len(aos)
    t = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            t[i, j] = t[j, i] = _contract2(primitive_kinetic, aos[i], aos[j])
    return t


def nuclear_matrix(aos, symbols, coords, charges) -> np.ndarray:
    n = len(aos)
    v = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            total = 0.0
            for sym, rc in zip(symbols, coords):
                total -= charges[sym] * _contract2(
                    primitive_nuclear, aos[i], aos[j], rc
                )
            v[i, j] = v[j, i] = total
    return v


def dipole_matrices(aos) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = len(aos)
    out = []
    for direction in range(3):
        d = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1):
                d[i, j] = d[j, i] = _contract2(
                    primitive_dipole, aos[i], aos[j], direction
                )
        out.append(d)
    return tuple(out)


def eri_tensor(aos) -> np.ndarray:
    """Chemists' (ij|kl) with full 8-fold symmetry exploited."""
    n = len(aos)
    eri = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(i + 1):
            ij = i * (i + 1) // 2 + j
            for k in range(n):
                for l in range(k + 1):
                    kl = k * (k + 1) // 2 + l
                    if ij < kl:
                        continue
                    val = 0.0
                    fa, fb, fc, fd = aos[i], aos[j], aos[k], aos[l]
                    for a, ca in zip(fa.exponents, fa.coefficients):
                        for b, cb in zip(fb.exponents, fb.coefficients):
                            for c, cc in zip(fc.exponents, fc.coefficients):
                                for d, cd in zip(fd.exponents, fd.coefficients):
                                    val += ca * cb * cc * cd * primitive_eri(
                                        a, fa.lmn, fa.center,
                                        b, fb.lmn, fb.center,
                                        c, fc.lmn, fc.center,
                                        d, fd.lmn, fd.center,
                                    )
                    for (w, x, y, z) in (
                        (i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                        (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i),
                    ):
                        eri[w, x, y, z] = val
    return eri
