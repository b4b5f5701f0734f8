"""Independent quadrature values of h(X'|X) for x' = g(x) + b m(y), Y ~ U([1, 2]).

Without noise, h(X'|X) is the differential entropy of U = b m(Y). Its density
follows from the change of variables p_U(u) = 1 / |b m'(m^-1(u / b))|, so
h = E[ln |b m'(Y)|], integrated here with mpmath at 30 digits.

With uniform noise of width eps and m = identity the conditional density is a
trapezoid; its entropy is integrated directly from the piecewise formula.

Run: python3 tests/oracles/hcond_quadrature.py
"""
import mpmath as mp

mp.mp.dps = 30

derivs = {
    "identity": lambda y: mp.mpf(1),
    "square": lambda y: 2 * y,
    "log": lambda y: 1 / y,
}

for name, d in derivs.items():
    for b in (mp.mpf("0.5"), mp.mpf(1), mp.mpf(2)):
        h = mp.quad(lambda y: mp.log(abs(b * d(y))), [1, 2])
        print(f"noiseless m={name:8s} b={float(b):3.1f} h={mp.nstr(h, 17)}")


def trapezoid_entropy(b, eps):
    # density of b*Y + Z on [b - eps/2, 2b + eps/2], Y ~ U[1,2], Z ~ U(-eps/2, eps/2), b > eps
    b = mp.mpf(b)
    eps = mp.mpf(eps)
    lo, hi = b - eps / 2, 2 * b + eps / 2

    def p(u):
        left = max(lo, min(u - lo, eps) + lo) - lo
        # overlap length of [u - eps/2, u + eps/2] with [b, 2b], divided by b * eps
        a = max(u - eps / 2, b)
        c = min(u + eps / 2, 2 * b)
        return max(c - a, 0) / (b * eps)

    f = lambda u: -p(u) * mp.log(p(u)) if p(u) > 0 else mp.mpf(0)
    return mp.quad(f, [lo, b + eps / 2, 2 * b - eps / 2, hi])


for b, eps in (("1", "0.01"), ("1", "0.1"), ("2", "0.05"), ("0.5", "0.001")):
    print(f"uniform-noise b={b} eps={eps} h={mp.nstr(trapezoid_entropy(b, eps), 17)}")
