"""Reference values for the test suites.

Closed forms are evaluated with mpmath at 40 digits. Perfect-correlation
values are re-derived independently by quadrature: with rho = 1 and the
push-bottom (or no-transfer) policy every quantity reduces to a single
Brownian motion with drift staying above a piecewise-linear barrier.
"""
import mpmath as mp

mp.mp.dps = 40
Phi = mp.ncdf


def two_phase_survival(a, m1, T, m2):
    """P[unit BM with drift m1 from a>0 stays >0 on [0,T], then drift m2 forever]."""
    a, m1, T, m2 = map(mp.mpf, (a, m1, T, m2))
    sT = mp.sqrt(T)
    def dens(z):
        return (mp.npdf((z - a - m1 * T) / sT) - mp.exp(-2 * m1 * a) * mp.npdf((z + a - m1 * T) / sT)) / sT
    tail = (lambda z: 1 - mp.exp(-2 * m2 * z)) if m2 > 0 else (lambda z: 0)
    return mp.quad(lambda z: dens(z) * tail(z), [0, a + abs(m1) * T, mp.inf])


def v_ext_quad(x, y, mub, s1, s2, d):
    x, y, mub, s1, s2, d = map(mp.mpf, (x, y, mub, s1, s2, d))
    if s1 * y < s2 * x:
        return v_ext_quad(y, x, mub, s2, s1, d)
    eta = mub + d * (s1 + s2)
    T = (s1 * y - s2 * x) / (s2 * eta)
    return two_phase_survival(x / s1, (mub + d * s2) / s1, T, mub / (s1 + s2))


def surv_quad(x, y, m1, m2, s1, s2):
    x, y, m1, m2, s1, s2 = map(mp.mpf, (x, y, m1, m2, s1, s2))
    r1, r2 = m1 / s1, m2 / s2
    a1, a2 = x / s1, y / s2
    if r1 == r2 or (r1 > r2 and a1 >= a2) or (r1 < r2 and a1 <= a2):
        return 1 - mp.exp(-2 * min(r1 * a1, r2 * a2))
    if r1 < r2:
        return surv_quad(y, x, m2, m1, s2, s1)
    T = (a2 - a1) / (r1 - r2)
    return two_phase_survival(a1, r1, T, r2)


def v_unit(x, y):
    x, y = mp.mpf(x), mp.mpf(y)
    if x == y:
        return 1 - mp.exp(-x)
    m, M, g = min(x, y), max(x, y), abs(y - x)
    s = mp.sqrt(g)
    return Phi(M / s) - mp.exp(-2 * m) * Phi((g - m) / s) - mp.exp(-(x + y) / 2) * (2 * Phi(m / s) - 1)


def v_ext(x, y, mub, s1, s2, d):
    x, y, mub, s1, s2, d = map(mp.mpf, (x, y, mub, s1, s2, d))
    if s1 * y < s2 * x:
        return v_ext(y, x, mub, s2, s1, d)
    if s1 * y == s2 * x:
        return 1 - mp.exp(-2 * mub * x / (s1 * (s1 + s2)))
    N = mp.sqrt(s2 * (s1 * y - s2 * x) * (mub + d * (s1 + s2)))
    A = 2 * mub + d * (s1 + s2)
    B = (mub + d * s2) * (s1 + s2) - 2 * mub * s1
    C = d * s1**2 + 3 * d * s1 * s2 + 2 * (mub + d * s2) * s2
    S = s1 + s2
    return (Phi((d * s2 * x + (mub + d * s2) * y) / N)
            - mp.exp(-2 * mub * (x + y) / S**2) * Phi((A * s2 * x + B * y) / (S * N))
            - mp.exp(-2 * (mub + d * s2) * x / s1**2) * Phi(((mub + d * s2) * y - (A + d * s2) * s2 / s1 * x) / N)
            + mp.exp(-2 * mub * y / S**2 - 2 * s2 * x / s1**2 * (mub * s2 / S**2 + d)) * Phi((B * y - C * s2 / s1 * x) / (S * N)))


def surv(x, y, m1, m2, s1, s2):
    x, y, m1, m2, s1, s2 = map(mp.mpf, (x, y, m1, m2, s1, s2))
    r1, r2 = m1 / s1, m2 / s2
    if r1 == r2 or (r1 > r2 and x / s1 >= y / s2) or (r1 < r2 and x / s1 <= y / s2):
        return 1 - mp.exp(-2 * min(m1 * x / s1**2, m2 * y / s2**2))
    L = mp.sqrt((s1 * y - s2 * x) * (m1 * s2 - m2 * s1))
    D12 = m1 - 2 * m2 * s1 / s2
    D21 = m2 - 2 * m1 * s2 / s1
    mn = min(m2 * x, m1 * y)
    return (Phi(abs(m1 * y - m2 * x) / L)
            - mp.exp(-2 * m1 * x / s1**2) * Phi((m1 * y + D21 * x) / L)
            - mp.exp(-2 * m2 * y / s2**2) * Phi((m2 * x + D12 * y) / L)
            + mp.exp(-2 * m1 * x / s1**2 - 2 * m2 * y / s2**2 + 4 * mn / (s1 * s2)) * Phi((D21 * x + D12 * y + 2 * mn) / L))


def mckean_shepp(x, y):
    m = min(x, y)
    return 1 - mp.exp(-2 * m) - 2 * m * mp.exp(-x - y)


def grandits_printed(x, y, m1, m2, d):
    x, y, d = map(mp.mpf, (x, y, d))
    mub = mp.mpf(m1) + m2
    m = min(x, y)
    return 1 - mp.exp(-(mub + d) * m) - (mub + d) / d * mp.exp(-mub * (x + y)) * (1 - mp.exp(-2 * d * m))


def show(name, v):
    print(f"{name:48s} {mp.nstr(v, 20)}")


if __name__ == "__main__":
    show("Phi(1)", Phi(1))
    show("Phi(-8)", Phi(-8))
    show("Phi(-5)", Phi(-5))
    show("Phi(-1.5)", Phi(-1.5))
    show("Phi(0.3)", Phi(0.3))
    show("Phi(3)", Phi(3))
    show("Phi(-37)", Phi(-37))
    show("mckean_shepp(1,1)", mckean_shepp(1, 1))
    show("mckean_shepp(1,2)", mckean_shepp(1, 2))
    show("grandits_printed(1,1;.5,.5,-.25)", grandits_printed(1, 1, 0.5, 0.5, -0.25))
    show("v_unit(1,1)", v_unit(1, 1))
    show("v_unit(1,2)", v_unit(1, 2))
    show("v_unit(1,2) quad", v_ext_quad(1, 2, 1, 1, 1, 0))
    for d in (mp.mpf(-1) / 4, 2):
        for (x, y) in [(1, 2), (0.5, 0.5), (1, 1), (2, 0.5), (3, 2), (2, 3), (0.5, 1.5)]:
            show(f"v_ext({x},{y};2,1,d={d})", v_ext(x, y, 1, 2, 1, d))
            show(f"   quad", v_ext_quad(x, y, 1, 2, 1, d))
    show("surv(1,2;.5,.5,1,1)", surv(1, 2, 0.5, 0.5, 1, 1))
    show("surv(2,1;.25,.75,1,1)", surv(2, 1, 0.25, 0.75, 1, 1))
    show("   quad", surv_quad(2, 1, 0.25, 0.75, 1, 1))
    show("surv(1,3;.25,.75,2,1)", surv(1, 3, 0.25, 0.75, 2, 1))
    show("   quad", surv_quad(1, 3, 0.25, 0.75, 2, 1))
    show("surv(3,1;.25,.75,1.5,1)", surv(3, 1, 0.25, 0.75, 1.5, 1))
    show("   quad", surv_quad(3, 1, 0.25, 0.75, 1.5, 1))
    show("gap unit (1,3) = 2e^-2 Phi(1/sqrt2)", 2 * mp.exp(-2) * Phi(1 / mp.sqrt(2)))
    show("gap unit (1,3) numeric", mp.diff(lambda t: v_unit(t, 3), 1) - mp.diff(lambda t: v_unit(1, t), 3))
    show("asym x->inf s1=2,s2=1,d=2,y=1: V(1000,1)", v_ext(1000, 1, 1, 2, 1, 2))
    show("   1-e^-10", 1 - mp.exp(-10))
    show("V(1,200;2,1,d=2)", v_ext(1, 200, 1, 2, 1, 2))
    show("   1-e^-1.5", 1 - mp.exp(-1.5))
