"""Independent numerical oracles used only by the test suite.

Finite differences here are deliberately formula-free: central stencils plus
Richardson extrapolation on plain point evaluations, so that agreement with
the jet engine is evidence and not circularity.

Accuracy note, measured while tuning: for derivative orders 5 and 6 the
rounding noise of a k-th order stencil grows like eps/h^k while truncation
forces h below a fraction of the pole distance, and the two constraints leave
central differences a floor of roughly 1e-6..5e-6 relative error in double
precision for the function families used.  fd_derivative_best gets close to
that floor by scanning a step ladder and trusting the best-agreeing pair.
Orders through 4 are comfortably below 1e-6.
"""

import cmath
import math

# central stencils with O(h^2) truncation error, keyed by derivative order
_STENCILS = {
    0: {0: 1.0},
    1: {-1: -0.5, 1: 0.5},
    2: {-1: 1.0, 0: -2.0, 1: 1.0},
    3: {-2: -0.5, -1: 1.0, 1: -1.0, 2: 0.5},
    4: {-2: 1.0, -1: -4.0, 0: 6.0, 1: -4.0, 2: 1.0},
    5: {-3: -0.5, -2: 2.0, -1: -2.5, 1: 2.5, 2: -2.0, 3: 0.5},
    6: {-3: 1.0, -2: -6.0, -1: 15.0, 0: -20.0, 1: 15.0, 2: -6.0, 3: 1.0},
}


def _stencil_1d(f, x0, k, h):
    if k == 0:
        return f(x0)
    acc = 0j
    for j, c in _STENCILS[k].items():
        acc += c * f(x0 + j * h)
    return acc / h ** k


def fd_derivative(f, x0, k, h=0.08, levels=2, rho=2.0):
    """k-th derivative of f at x0 by central differences + Richardson."""
    vals = [_stencil_1d(f, x0, k, h / rho ** i) for i in range(levels + 1)]
    for lev in range(1, levels + 1):
        factor = rho ** (2 * lev)
        vals = [(factor * vals[i + 1] - vals[i]) / (factor - 1.0)
                for i in range(len(vals) - 1)]
    return vals[0]


def fd_derivative_best(f, x0, k):
    """Step-adaptive variant for high orders.

    Runs a level-4 Richardson scheme with refinement ratio 1.5 (the gentle
    ratio keeps the finest step large, which is what controls rounding at
    k >= 5) over a ladder of base steps, then returns the estimate at the
    step whose successive ladder values agree best.
    """
    steps = [0.34 * 0.88 ** i for i in range(14)]
    ests = [fd_derivative(f, x0, k, h=h, levels=4, rho=1.5) for h in steps]
    return _best_of_ladder(ests)


def fd_partial(f, t0, u0, k, l, h=0.08, levels=2, rho=2.0, uscale=0.5):
    """Mixed partial d^{k+l} f / dt^k du^l at (t0, u0), nested stencils.

    The u step is half the t step: the u displacement shifts the poles seen
    by the t stencil, so keeping it small buys truncation accuracy at almost
    no rounding cost (l stays <= 2 here).
    """

    def one(step):
        acc = 0j
        for i, ci in _STENCILS[k].items():
            for j, cj in _STENCILS[l].items():
                acc += ci * cj * f(t0 + i * step, u0 + j * step * uscale)
        return acc / (step ** k * (step * uscale) ** l)

    vals = [one(h / rho ** i) for i in range(levels + 1)]
    for lev in range(1, levels + 1):
        factor = rho ** (2 * lev)
        vals = [(factor * vals[i + 1] - vals[i]) / (factor - 1.0)
                for i in range(len(vals) - 1)]
    return vals[0]


def fd_partial_best(f, t0, u0, k, l):
    """Step-ladder best-agreement version of fd_partial."""
    steps = [0.26 * 0.88 ** i for i in range(16)]
    ests = [fd_partial(f, t0, u0, k, l, h=h, levels=4, rho=1.5) for h in steps]
    return _best_of_ladder(ests)


def _best_of_ladder(ests):
    """Pick the ladder entry where a 3-wide window agrees best.

    A two-point gap can dip by coincidence when the truncation term changes
    sign between steps; requiring three consecutive estimates to huddle makes
    the selection robust.
    """
    best = ests[0]
    best_gap = None
    for i in range(len(ests) - 2):
        gap = max(abs(ests[i + 1] - ests[i]), abs(ests[i + 2] - ests[i + 1]))
        if best_gap is None or gap < best_gap:
            best_gap = gap
            best = ests[i + 1]
    return best


def rational_pole_distance(p, u0, t0):
    """Distance from t0 to the nearest pole of 1/((1-t)^p - u0).

    Poles sit at t = 1 - s with s = |u0|^(1/p) e^{i(arg u0 + 2 pi k)/p} and
    Arg(s) in (-pi, pi], matching the principal branch used everywhere.
    """
    if u0 == 0:
        return abs(1.0 - t0)
    r = abs(u0) ** (1.0 / p)
    a = cmath.phase(u0)
    best = math.inf
    for k in range(-5, 6):
        ang = (a + 2.0 * math.pi * k) / p
        if -math.pi < ang <= math.pi:
            best = min(best, abs(t0 - (1.0 - r * cmath.exp(1j * ang))))
    return best


def quad_monomial_norm(ps, alphas):
    """Monomial L2 norm on sum |z_j|^(2/p_j) < 1 by nested radial quadrature.

    Integrates prod |z_j|^(2 a_j) over the domain as iterated 1-dim integrals
    in the radii, each angular factor contributing 2 pi.  Slow but independent
    of the Gamma closed form.
    """
    from scipy.integrate import quad

    n = len(ps)

    def inner(level, budget):
        if level == n:
            return 1.0
        p, a = ps[level], alphas[level]
        upper = budget ** (p / 2.0)
        if upper <= 0.0:
            return 0.0
        val, _ = quad(
            lambda r: r ** (2 * a + 1) * inner(level + 1, budget - r ** (2.0 / p)),
            0.0, upper, epsabs=1e-14, epsrel=1e-11, limit=300)
        return val

    return (2.0 * math.pi) ** n * inner(0, 1.0)
