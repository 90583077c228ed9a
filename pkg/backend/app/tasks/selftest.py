"""Desk-scale invariant suites behind the ``selftest`` command.

Each suite returns CheckResult rows; exceptions inside a check are caught
and recorded as failures so one broken invariant never hides the others.
"""
import logging
import math
import random
import time
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

import numpy as np
from mpmath import mp

from app.errors import PentatileError
from app.models.weights import VertexWeights
from app.schemas import CheckResult, PentagonSpec
from app.services import asymptotics as asym
from app.services import exact_core, gefp, six_vertex

logger = logging.getLogger(__name__)

ALPHAS = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


def _check(results: List[CheckResult], suite: str, name: str, fn: Callable[[], Tuple[bool, str]]):
    try:
        passed, detail = fn()
    except (PentatileError, ArithmeticError, ValueError, AssertionError) as e:
        passed, detail = False, f"{type(e).__name__}: {e}"
    if not passed:
        logger.warning(f"{suite}/{name} failed: {detail}")
    results.append(CheckResult(suite=suite, check=name, passed=passed, detail=detail))


def exact_core_suite(quick: bool, rng: random.Random) -> List[CheckResult]:
    out: List[CheckResult] = []
    l_max, mn_max = (10, 3) if quick else (20, 6)

    def residue_routes():
        bad = [
            (l, m, n)
            for l in range(l_max + 1)
            for m in range(mn_max + 1)
            for n in range(mn_max + 1)
            if l - m - n + 1 >= 0
            and exact_core.p_poly(l, m, n) != exact_core.p_poly_residues(l, m, n)
        ]
        return not bad, f"mismatches: {bad[:5]}" if bad else f"l<={l_max}, m,n<={mn_max}"

    def degrees():
        bad = [
            (l, m, n)
            for l in range(l_max + 1)
            for m in range(1, mn_max + 1)
            for n in range(mn_max + 1)
            if l - m - n + 1 >= 0 and exact_core.p_poly(l, m, n).degree != l - m - n + 1
        ]
        return not bad, f"bad degrees: {bad[:5]}" if bad else "degree l-m-n+1"

    def cofactor():
        for _ in range(5):
            m = [[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(5)] for _ in range(5)]
            if exact_core.det_exact(m) != exact_core.det_cofactor(m):
                return False, f"matrix {m}"
        return True, "5x5 random rational"

    def block_and_swap():
        a = [[Fraction(rng.randint(-5, 5)) for _ in range(3)] for _ in range(3)]
        b = [[Fraction(rng.randint(-5, 5)) for _ in range(2)] for _ in range(2)]
        block = [row + [0, 0] for row in a] + [[0, 0, 0] + row for row in b]
        product = exact_core.det_exact(a) * exact_core.det_exact(b)
        swapped = [a[1], a[0], a[2]]
        ok = exact_core.det_exact(block) == product
        ok = ok and exact_core.det_exact(swapped) == -exact_core.det_exact(a)
        return ok, "block product and row swap"

    def float_precisions():
        n = 8 if quick else 24
        m = [[rng.uniform(-1, 1) + (n if i == j else 0) for j in range(n)] for i in range(n)]
        p = 128
        low = exact_core.det_float(m, p)
        high = exact_core.det_float(m, 2 * p)
        with mp.workprec(2 * p):
            rel = abs(low - high) / abs(high)
            ok = rel <= mp.ldexp(1, -(p - 16))
        return ok, f"n={n}, relative difference {mp.nstr(rel, 3)}"

    _check(out, "exact-core", "residue routes agree", residue_routes)
    _check(out, "exact-core", "degree", degrees)
    _check(out, "exact-core", "bareiss vs cofactor", cofactor)
    _check(out, "exact-core", "determinant properties", block_and_swap)
    _check(out, "exact-core", "float precision doubling", float_precisions)
    return out


def oracle_suite(quick: bool, rng: random.Random) -> List[CheckResult]:
    out: List[CheckResult] = []
    n_count, n_gefp = (4, 4) if quick else (6, 5)

    def counts():
        bad = [
            N for N in range(1, n_count + 1)
            if not (sum(1 for _ in six_vertex.enumerate_dwbc(N)) == six_vertex.asm_count(N)
                    == six_vertex.count_dwbc(N))
        ]
        return not bad, f"N<={n_count}" if not bad else f"bad N: {bad}"

    def z_values():
        for N in range(1, n_count + 1):
            for rho, alpha in ((Fraction(2), Fraction(1, 2)), (Fraction(3, 2), Fraction(1, 3))):
                w = VertexWeights.free_fermion(rho, alpha)
                if six_vertex.z_bruteforce(N, w) != gefp.z_ff(N, rho, alpha):
                    return False, f"N={N}, rho={rho}, alpha={alpha}"
        return True, "Z = rho^{N(N+1)/2}"

    def pairing():
        censuses = {N: six_vertex.vertex_type_census(N) for N in range(1, n_count + 1)}
        ok = all(c == {(0, 0)} for c in censuses.values())
        return ok, "n1 = n2 and n3 = n4 in every configuration"

    def gefp_equality():
        checked = 0
        for N in range(1, n_gefp + 1):
            for alpha in ALPHAS:
                w = VertexWeights.free_fermion(1, alpha)
                for spec in six_vertex.emptiness_specs(N):
                    if gefp.gefp_det(spec, alpha) != six_vertex.gefp_bruteforce(spec, w):
                        return False, f"N={N}, r={spec.r}, alpha={alpha}"
                    checked += 1
        return True, f"{checked} specs"

    _check(out, "oracle", "configuration counts", counts)
    _check(out, "oracle", "partition function", z_values)
    _check(out, "oracle", "vertex pairing", pairing)
    _check(out, "oracle", "gefp determinant", gefp_equality)
    return out


def representation_suite(quick: bool, rng: random.Random) -> List[CheckResult]:
    out: List[CheckResult] = []
    size = 8 if quick else 12

    def det_vs_sum():
        for total in range(1, size + 1):
            for s in range(0, total):
                spec = PentagonSpec(r=total - s, s=s)
                for alpha in ALPHAS:
                    if gefp.tdefp_det(spec, alpha) != gefp.tdefp_sum(spec, alpha):
                        return False, f"r={spec.r}, s={s}, alpha={alpha}"
        return True, f"r+s<={size}"

    def probability_range():
        for total in range(1, size + 1):
            for s in range(total):
                value = gefp.tdefp_det(PentagonSpec(r=total - s, s=s), Fraction(1, 2))
                if not 0 <= value <= 1:
                    return False, f"r={total - s}, s={s}: {value}"
        return True, "0 <= T <= 1"

    def monotone_in_s():
        N = 8 if quick else 12
        values = [gefp.tdefp_det(PentagonSpec(r=N - s, s=s), Fraction(1, 2)) for s in range(N)]
        ok = all(b <= a for a, b in zip(values, values[1:]))
        return ok, f"N={N}"

    def triangular_gefp():
        for total in range(2, size + 1):
            for s in range(1, total):
                spec = PentagonSpec(r=total - s, s=s)
                for alpha in ALPHAS:
                    if gefp.tdefp_det(spec, alpha) != gefp.gefp_det(spec.emptiness_spec(), alpha):
                        return False, f"r={spec.r}, s={s}, alpha={alpha}"
        return True, f"r_j = r+j-1, r+s<={size}"

    _check(out, "representation", "determinant equals sum", det_vs_sum)
    _check(out, "representation", "triangular case of gefp", triangular_gefp)
    _check(out, "representation", "probability range", probability_range)
    _check(out, "representation", "non-increasing in s", monotone_in_s)
    return out


def product_formula_suite(quick: bool, rng: random.Random) -> List[CheckResult]:
    out: List[CheckResult] = []
    size = 7 if quick else 10

    def forms():
        for total in range(1, size + 1):
            for s in range(total):
                r = total - s
                values = {
                    gefp.c_rs_product(r, s),
                    gefp.c_rs_binomial_det(r, s),
                    gefp.c_rs_residue_det(r, s),
                    gefp.c_rs_reversed_det(r, s),
                    gefp.g_rs(PentagonSpec(r=r, s=s), 1),
                }
                if len(values) != 1:
                    return False, f"r={r}, s={s}: {sorted(values)}"
        return True, f"r+s<={size}"

    _check(out, "product-formula", "all forms of C_rs agree", forms)
    return out


def criticality_suite(quick: bool, rng: random.Random) -> List[CheckResult]:
    out: List[CheckResult] = []
    grid = np.linspace(0.02, 0.98, 10 if quick else 50)

    def junction():
        worst = max(abs(asym.phi_one(a) - asym.phi_two(asym.theta_c(a), a)) for a in grid)
        return worst < 1e-12, f"max difference {worst:.3g}"

    def derivatives():
        worst = 0.0
        for a in grid:
            tc = asym.theta_c(a)
            h = 1e-4 * tc
            f = lambda t: asym.phi_two(t, a)
            first = (f(tc + h) - f(tc - h)) / (2 * h)
            second = (f(tc + h) - 2 * f(tc) + f(tc - h)) / h**2
            worst = max(worst, abs(first), abs(second))
        return worst < 1e-6, f"max |Phi_II' - Phi_I'|, |Phi_II'' - Phi_I''| = {worst:.3g}"

    def jump():
        worst = 0.0
        for a in (0.25, 0.5, 0.75):
            exact = asym.third_derivative_jump(a)
            numeric = asym.third_derivative_jump_numeric(a)
            worst = max(worst, abs(numeric - exact) / abs(exact))
        return worst < 1e-2, f"max relative deviation {worst:.3g}"

    def sigma_shape():
        omegas = np.linspace(0.005, 0.995, 200 if quick else 2000)
        for a in (0.1, 0.25, 0.5, 0.75, 0.9):
            values = [asym.sigma(float(w), a) for w in omegas]
            if min(values) < -1e-15:
                return False, f"alpha={a}: min sigma {min(values):.3g}"
            if any(later < earlier - 1e-15 for earlier, later in zip(values, values[1:])):
                return False, f"alpha={a}: sigma decreases"
        return True, f"{len(omegas)} omega points"

    def jump_in_theta():
        worst = 0.0
        for a in (0.25, 0.5, 0.75):
            exact = asym.third_derivative_jump(a)
            worst = max(worst, abs(asym.jump_from_theta(a) - exact) / abs(exact))
        return worst < 1e-2, f"max relative deviation {worst:.3g}"

    _check(out, "criticality", "continuity at theta_c", junction)
    _check(out, "criticality", "sigma non-negative and non-decreasing", sigma_shape)
    _check(out, "criticality", "first and second derivatives", derivatives)
    _check(out, "criticality", "third derivative jump", jump)
    _check(out, "criticality", "third derivative jump from Phi", jump_in_theta)
    return out


def saddle_point_grid(quick: bool) -> List[Tuple[float, float]]:
    count = 3 if quick else 10
    points = []
    for a in np.linspace(0.1, 0.9, count):
        tc = asym.theta_c(a)
        for f in np.linspace(0.3, 2.0, count):
            points.append((float(1.0 + (tc - 1.0) * f), float(a)))
    return points


def saddle_point_suite(quick: bool, rng: random.Random) -> List[CheckResult]:
    out: List[CheckResult] = []
    grid = saddle_point_grid(quick)

    def residuals():
        worst = 0.0
        for theta, a in grid:
            band = asym.endpoints(theta, a)
            for t in (0.25, 0.5, 0.75):
                x = band.a + t * (band.b - band.a)
                worst = max(worst, asym.spe_residual(x, theta, a))
        return worst < 1e-4, f"max residual {worst:.3g}"

    def endpoint_equations():
        worst = 0.0
        for theta, a in grid:
            band = asym.endpoints(theta, a)
            if band.scenario == "I":
                worst = max(worst, abs(band.a * band.b - 1.0))
            else:
                worst = max(worst, *(abs(x) for x in asym.endpoint_residuals(theta, a)))
        return worst < 1e-10, f"max residual {worst:.3g}"

    def density_bounds():
        worst = 0.0
        for theta, a in grid:
            band = asym.endpoints(theta, a)
            for t in np.linspace(0.0, 1.0, 12)[1:-1]:
                rho = asym.band_density(float(band.a + t * (band.b - band.a)), theta, a)
                worst = max(worst, -rho, rho - 1.0)
        return worst < 1e-9, f"max excursion outside [0, 1]: {worst:.3g}"

    def moments():
        worst = 0.0
        for theta, a in grid:
            e = asym.first_moment(theta, a)
            for radius in (1e2, 1e3, 1e4):
                mass, moment = asym.resolvent_moments(theta, a, radius=radius)
                worst = max(worst, abs(mass - 1.0), abs(moment - e) / abs(e))
        return worst < 1e-4, f"max deviation {worst:.3g}"

    def quadratures():
        worst = 0.0
        for theta, a in grid:
            worst = max(
                worst,
                abs(asym.band_mass(theta, a) - 1.0),
                abs(asym.band_moment(theta, a) - asym.first_moment(theta, a)),
            )
        return worst < 1e-6, f"max deviation {worst:.3g}"

    _check(out, "saddle-point", "endpoint equations", endpoint_equations)
    _check(out, "saddle-point", "density bounds", density_bounds)
    _check(out, "saddle-point", "on-band residual", residuals)
    _check(out, "saddle-point", "large-z coefficients", moments)
    _check(out, "saddle-point", "density quadratures", quadratures)
    return out


def limits_suite(quick: bool, rng: random.Random) -> List[CheckResult]:
    out: List[CheckResult] = []

    def small_alpha():
        for r, s in ((3, 2), (5, 3)):
            spec = PentagonSpec(r=r, s=s)
            values = [gefp.tdefp_det(spec, Fraction(1, 10**k)) for k in range(2, 7)]
            if not all(a < b < 1 for a, b in zip(values, values[1:])):
                return False, f"r={r}, s={s}: {[float(v) for v in values]}"
        return True, "T increases to 1 as alpha -> 0"

    def alpha_to_one():
        worst = max(abs(asym.phi(t, 1 - 1e-8) - asym.psi(t)) for t in (1.5, 2.0, 2.5))
        return worst < 1e-5, f"max |Phi - psi| = {worst:.3g}"

    def alpha_to_zero():
        worst = max(abs(asym.phi(t, 1e-8) + 0.25 * math.log(1e-8)) for t in (1.5, 2.0, 5.0))
        return worst < 1e-6, f"max |Phi + log(alpha)/4| = {worst:.3g}"

    _check(out, "limits", "alpha -> 0 exact", small_alpha)
    _check(out, "limits", "alpha -> 1 free energy", alpha_to_one)
    _check(out, "limits", "alpha -> 0 free energy", alpha_to_zero)
    return out


SUITES: Dict[str, Callable[[bool, random.Random], List[CheckResult]]] = {
    "exact-core": exact_core_suite,
    "oracle": oracle_suite,
    "representation": representation_suite,
    "product-formula": product_formula_suite,
    "criticality": criticality_suite,
    "saddle-point": saddle_point_suite,
    "limits": limits_suite,
}


def run_selftest(quick: bool = False, seed: int = 0) -> Tuple[List[CheckResult], Dict[str, float]]:
    """Run every suite; returns the results and the wall time per suite."""
    results: List[CheckResult] = []
    timings: Dict[str, float] = {}
    for name, suite in SUITES.items():
        started = time.perf_counter()
        results.extend(suite(quick, random.Random(f"{seed}:{name}")))
        timings[name] = time.perf_counter() - started
        logger.info(f"Suite {name} finished in {timings[name]:.2f}s")
    return results, timings
