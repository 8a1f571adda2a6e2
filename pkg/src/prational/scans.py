"""The two headline scans.

(A) Wieferich-ideal scan: for each n, split the ideal generated by the n-th
cyclotomic value of a powered unit, and look for a prime ideal P of
valuation exactly 1 with p coprime to n, residue order exactly n, and
v**n != 1 mod P**2.  Distinct n give distinct ideals, so a window count
turns the successes into a lower bound on rational primes up to X.

(B) p-rationality scan for real quadratic fields: a prime p (odd,
unramified, coprime to the class number and above the excluded-prime bound)
is classified through the Fermat-quotient test eps**(N(P)-1) mod P**2 at
the primes P above p.  A nontrivial quotient at any P certifies
p-rationality; the all-trivial outcome is reported as non-p-rational at
criterion level.

Plus the classical rational Wieferich search and a rational-prime-level
scan for user-supplied units of arbitrary degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InsufficientRecordsError
from .factorint import Status, factor, ideal_valuations, sieve
from .numerics import AlgebraicUnit, CircleTest, GrowthConstants, circle_test
from .polyarith import IntPoly, cyclotomic, discriminant, euler_phi, power_poly, resultant
from .quadfield import (
    PrimeIdealAboveP,
    QuadField,
    QuadInt,
    Splitting,
    excluded_prime_bound,
    residue_is_one,
    residue_value_mod_p,
    split_prime,
    unit_pow_mod_p2,
)

SUCCESS = "success"
NO_QUALIFYING_PRIME = "no_qualifying_prime"
SKIPPED = "skipped"

REASON_PHI = "phi_condition"
REASON_PARTIAL = "partial_factorization"
REASON_HIGHER_DEGREE = "higher_degree_prime"

EXCLUDED = "excluded"
P_RATIONAL = "p_rational"
NON_P_RATIONAL = "non_p_rational"

REASON_GROUP_ORDER = "divides_group_order"
REASON_RAMIFIED = "ramified"
REASON_CLASS_NUMBER = "divides_class_number"
REASON_BELOW_P0 = "below_p0"


@dataclass(frozen=True)
class ScanRecord:
    """One row of the Wieferich-ideal scan."""

    n: int
    phi_ok: bool
    cyclo_norm: int
    factor_status: str | None
    prime: int | None
    residue_degree: int | None
    ideal_norm: int | None
    root: int | None              # Hensel root mod p**2 identifying the ideal; None if inert
    order_is_n: bool
    wieferich_ok: bool
    coprime_to_n: bool
    status: str
    reason: str = ""


@dataclass(frozen=True)
class PRationalityVerdict:
    p: int
    verdict: str
    reason: str
    witnesses: tuple[tuple[int, bool], ...]   # (N(P), fermat quotient nonzero)


@dataclass(frozen=True)
class CountReport:
    limit: int
    n_start: int
    n_stop: int
    eligible: int
    successes: int
    distinct_primes: int
    prime_lower_bound: int
    log_density: float


def _prime_divisors(n: int) -> list[int]:
    if n == 1:
        return []
    f = factor(n)
    return [p for p, _ in f.factors]


def _order_is_n(F: QuadField, v: QuadInt, P: PrimeIdealAboveP, n: int) -> bool:
    """Exact multiplicative order n in O/P, via the prime divisors of n."""
    p = P.p
    if P.splitting is Splitting.SPLIT:
        base = residue_value_mod_p(F, v, P)
        if pow(base, n, p) != 1:
            return False
        return all(pow(base, n // q, p) != 1 for q in _prime_divisors(n))
    from .quadfield import _pair_pow

    bx, by = v.x % p, v.y % p
    one = (1 % p, 0)
    if _pair_pow(bx, by, n, F.t, F.s, p) != one:
        return False
    return all(_pair_pow(bx, by, n // q, F.t, F.s, p) != one for q in _prime_divisors(n))


def _skip_record(n, phi_ok, cyclo_norm, factor_status, reason):
    return ScanRecord(
        n=n,
        phi_ok=phi_ok,
        cyclo_norm=cyclo_norm,
        factor_status=factor_status,
        prime=None,
        residue_degree=None,
        ideal_norm=None,
        root=None,
        order_is_n=False,
        wieferich_ok=False,
        coprime_to_n=False,
        status=SKIPPED,
        reason=reason,
    )


def wieferich_scan(
    F: QuadField,
    u: QuadInt,
    constants: GrowthConstants,
    n_max: int,
    **factor_opts,
) -> list[ScanRecord]:
    """Scan n = 1..n_max for Wieferich-free prime ideals of the cyclotomic
    values of v = u**power.

    Candidates at level n are the unramified prime ideals of valuation
    exactly 1 in (Phi_n(v)) whose rational prime does not divide n and whose
    norm is at most norm_base**n; among those meeting the order and mod-P^2
    conditions, the smallest (p, hensel root) wins, for determinism.
    Rows are emitted for every n, including failures and skips.
    """
    if not u.is_unit():
        raise ValueError("u must be a unit")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    v = u ** constants.power
    records = []
    for n in range(1, n_max + 1):
        phi_ok = 2 * euler_phi(n) >= n
        value = cyclotomic(n).evaluate(v)
        cyclo_norm = abs(value.norm())
        if not phi_ok:
            records.append(_skip_record(n, phi_ok, cyclo_norm, None, REASON_PHI))
            continue
        split = ideal_valuations(F, value, **factor_opts)
        if split.status is Status.PARTIAL:
            records.append(_skip_record(n, phi_ok, cyclo_norm, "partial", REASON_PARTIAL))
            continue
        cap = constants.norm_base ** n
        candidates = sorted(
            (
                P
                for P, val in split.entries
                if val == 1
                and P.splitting is not Splitting.RAMIFIED
                and n % P.p != 0
                and Fraction(P.norm) <= cap
            ),
            key=lambda P: (P.p, P.hensel_root if P.hensel_root is not None else -1),
        )
        chosen = None
        for P in candidates:
            if not _order_is_n(F, v, P, n):
                continue
            if residue_is_one(unit_pow_mod_p2(F, v, n, P), P):
                continue
            chosen = P
            break
        if chosen is None:
            records.append(
                ScanRecord(
                    n=n,
                    phi_ok=True,
                    cyclo_norm=cyclo_norm,
                    factor_status="complete",
                    prime=None,
                    residue_degree=None,
                    ideal_norm=None,
                    root=None,
                    order_is_n=False,
                    wieferich_ok=False,
                    coprime_to_n=False,
                    status=NO_QUALIFYING_PRIME,
                )
            )
        else:
            records.append(
                ScanRecord(
                    n=n,
                    phi_ok=True,
                    cyclo_norm=cyclo_norm,
                    factor_status="complete",
                    prime=chosen.p,
                    residue_degree=chosen.residue_degree,
                    ideal_norm=chosen.norm,
                    root=chosen.hensel_root,
                    order_is_n=True,
                    wieferich_ok=True,
                    coprime_to_n=True,
                    status=SUCCESS,
                )
            )
    return records


def count_report(records: list[ScanRecord], constants: GrowthConstants, X: int) -> CountReport:
    """Window count of scan successes for n in [n_start, n_stop], where
    n_stop is the largest n with norm_base**n <= X."""
    if X < 1:
        raise ValueError("X must be >= 1")
    gamma = constants.norm_base
    n_stop = 0
    while gamma ** (n_stop + 1) <= X:
        n_stop += 1
    max_n = max((r.n for r in records), default=0)
    if max_n < n_stop:
        raise InsufficientRecordsError(
            f"records cover n <= {max_n} but the window needs n <= {n_stop}"
        )
    window = [r for r in records if constants.n_start <= r.n <= n_stop and r.phi_ok]
    successes = [r for r in window if r.status == SUCCESS]
    distinct = len({r.prime for r in successes})
    lower = -(-len(successes) // constants.degree)
    density = len(successes) / (constants.degree * math.log(X)) if X > 1 else 0.0
    return CountReport(
        limit=X,
        n_start=constants.n_start,
        n_stop=n_stop,
        eligible=len(window),
        successes=len(successes),
        distinct_primes=distinct,
        prime_lower_bound=lower,
        log_density=density,
    )


def classify_prime(
    F: QuadField,
    p: int,
    unit: QuadInt | None = None,
    p0: int | None = None,
) -> PRationalityVerdict:
    """Classify one prime: excluded (hypothesis failure or below the excluded
    bound), p-rational (some Fermat quotient nonzero), or non-p-rational."""
    u = F.fundamental_unit if unit is None else unit
    if not u.is_unit():
        raise ValueError("unit argument must be a unit")
    if p == 2:
        return PRationalityVerdict(p, EXCLUDED, REASON_GROUP_ORDER, ())
    if F.disc % p == 0:
        return PRationalityVerdict(p, EXCLUDED, REASON_RAMIFIED, ())
    if F.class_number % p == 0:
        return PRationalityVerdict(p, EXCLUDED, REASON_CLASS_NUMBER, ())
    bound = excluded_prime_bound(F) if p0 is None else p0
    if p <= bound:
        return PRationalityVerdict(p, EXCLUDED, REASON_BELOW_P0, ())
    witnesses = []
    for P in split_prime(F, p):
        res = unit_pow_mod_p2(F, u, P.norm - 1, P)
        witnesses.append((P.norm, not residue_is_one(res, P)))
    verdict = P_RATIONAL if any(w for _, w in witnesses) else NON_P_RATIONAL
    return PRationalityVerdict(p, verdict, "", tuple(witnesses))


def prationality_scan(F: QuadField, X: int, unit: QuadInt | None = None) -> list[PRationalityVerdict]:
    """Classify every odd prime p <= X."""
    if X < 1:
        raise ValueError("X must be >= 1")
    p0 = excluded_prime_bound(F)
    return [classify_prime(F, p, unit=unit, p0=p0) for p in sieve(X) if p > 2]


def rational_wieferich_scan(alpha: int, X: int) -> list[int]:
    """Primes p <= X with p coprime to alpha and alpha**(p-1) = 1 mod p**2."""
    if alpha < 2:
        raise ValueError("alpha must be >= 2")
    if X < 3:
        raise ValueError("X must be >= 3")
    return [
        p
        for p in sieve(X)
        if alpha % p != 0 and pow(alpha, p - 1, p * p) == 1
    ]


# --- rational-prime-level scan for user-supplied units ----------------------

def _pmod_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod_rem(a: list[int], b: list[int], p: int) -> list[int]:
    """a mod b over F_p; b need not be monic."""
    a = [c % p for c in a]
    _pmod_trim(a)
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _pmod_trim(a)
        if not a:
            break
    return a


def _pmod_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, c in enumerate(a):
        if c:
            for j, d in enumerate(b):
                out[i + j] = (out[i + j] + c * d) % p
    return _pmod_trim(out)


def _pmod_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = [c % p for c in a], [c % p for c in b]
    _pmod_trim(a)
    _pmod_trim(b)
    while b:
        a, b = b, _pmod_rem(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _pmod_pow(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod_rem(base, mod, p)
    while e:
        if e & 1:
            result = _pmod_rem(_pmod_mul(result, base, p), mod, p)
        base = _pmod_rem(_pmod_mul(base, base, p), mod, p)
        e >>= 1
    return result


def _roots_mod_p(f: IntPoly, p: int, max_tries: int = 64) -> list[int]:
    """Roots of a monic squarefree-mod-p polynomial over F_p (deterministic
    sequence of splitting shifts, so scans are reproducible)."""
    fb = _pmod_trim([c % p for c in f.coeffs])
    if p <= 3 or len(fb) <= 3:
        return sorted(r for r in range(p) if _pmod_eval(fb, r, p) == 0)
    xp = _pmod_pow([0, 1], p, fb, p)
    xp_minus_x = xp[:]
    while len(xp_minus_x) < 2:
        xp_minus_x.append(0)
    xp_minus_x[1] = (xp_minus_x[1] - 1) % p
    linear_part = _pmod_gcd(_pmod_trim(xp_minus_x), fb, p)
    roots: list[int] = []

    def split(h: list[int], depth: int):
        if len(h) <= 1:
            return
        if len(h) == 2:
            roots.append((-h[0]) * pow(h[1], -1, p) % p)
            return
        for a in range(depth, depth + max_tries):
            w = _pmod_pow([a, 1], (p - 1) // 2, h, p)
            if len(w) == 0:
                w = [0]
            w = w[:]
            w[0] = (w[0] - 1) % p
            g1 = _pmod_gcd(_pmod_trim(w), h, p)
            if 0 < len(g1) - 1 < len(h) - 1:
                quot = _pmod_quot(h, g1, p)
                split(g1, a + 1)
                split(quot, a + 1)
                return
        raise RuntimeError("equal-degree splitting stalled")

    split(linear_part, 0)
    return sorted(roots)


def _pmod_eval(a: list[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def _pmod_quot(a: list[int], b: list[int], p: int) -> list[int]:
    a = [c % p for c in a]
    q = [0] * (len(a) - len(b) + 1)
    inv_lead = pow(b[-1], -1, p)
    while len(_pmod_trim(a)) >= len(b):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        q[shift] = coef
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * c) % p
    return _pmod_trim(q)


def _lift_root(g: IntPoly, r: int, p: int) -> int:
    """Hensel lift of a simple root of g from mod p to mod p**2."""
    p2 = p * p
    deriv = g.derivative().evaluate(r) % p2
    return (r - g.evaluate(r) * pow(deriv, -1, p2)) % p2


def _int_order_is_n(r: int, p: int, n: int) -> bool:
    if pow(r, n, p) != 1:
        return False
    return all(pow(r, n // q, p) != 1 for q in _prime_divisors(n))


def generic_unit_scan(
    unit: AlgebraicUnit,
    constants: GrowthConstants,
    n_max: int,
    **factor_opts,
) -> list[ScanRecord]:
    """Rational-prime-level scan for a user-supplied unit of any degree.

    Works entirely through resultants of the powered unit's minimal
    polynomial: candidate primes p divide |Res(g, Phi_n)| exactly once in
    |Res(g, x^n - 1)|, avoid n and disc(g), and must admit a root of g mod p
    (a degree-1 prime).  Levels where every candidate prime has residue
    degree > 1 are reported as skipped, so the completeness loss is visible.
    """
    if circle_test(unit) is not CircleTest.CLEAR:
        raise ValueError("the unit must have no conjugate on the unit circle")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    g = power_poly(unit.minpoly, constants.power)
    disc_g = abs(discriminant(g))
    if disc_g == 0:
        raise ValueError("powered unit has repeated conjugates; use a different power or unit")
    records = []
    for n in range(1, n_max + 1):
        phi_ok = 2 * euler_phi(n) >= n
        r_cyclo = abs(resultant(cyclotomic(n), g))
        if not phi_ok:
            records.append(_skip_record(n, phi_ok, r_cyclo, None, REASON_PHI))
            continue
        fact = factor(r_cyclo, **factor_opts) if r_cyclo > 1 else None
        if fact is not None and fact.status is Status.PARTIAL:
            records.append(_skip_record(n, phi_ok, r_cyclo, "partial", REASON_PARTIAL))
            continue
        r_full = abs(resultant(IntPoly.x_pow_minus_one(n), g))
        cap = constants.norm_base ** n
        primes = [p for p, _ in fact.factors] if fact is not None else []
        candidates = [
            p
            for p in primes
            if n % p != 0
            and disc_g % p != 0
            and r_full % (p * p) != 0
            and Fraction(p) <= cap
        ]
        chosen = None
        saw_higher_degree = False
        for p in candidates:
            roots = _roots_mod_p(g, p)
            if not roots:
                saw_higher_degree = True
                continue
            for r in roots:
                if not _int_order_is_n(r, p, n):
                    continue
                r2 = _lift_root(g, r, p)
                if pow(r2, n, p * p) == 1:
                    continue
                chosen = (p, r2)
                break
            if chosen:
                break
        if chosen is not None:
            p, r2 = chosen
            records.append(
                ScanRecord(
                    n=n,
                    phi_ok=True,
                    cyclo_norm=r_cyclo,
                    factor_status="complete",
                    prime=p,
                    residue_degree=1,
                    ideal_norm=p,
                    root=r2,
                    order_is_n=True,
                    wieferich_ok=True,
                    coprime_to_n=True,
                    status=SUCCESS,
                )
            )
        elif saw_higher_degree:
            records.append(_skip_record(n, phi_ok, r_cyclo, "complete", REASON_HIGHER_DEGREE))
        else:
            records.append(
                ScanRecord(
                    n=n,
                    phi_ok=True,
                    cyclo_norm=r_cyclo,
                    factor_status="complete",
                    prime=None,
                    residue_degree=None,
                    ideal_norm=None,
                    root=None,
                    order_is_n=False,
                    wieferich_ok=False,
                    coprime_to_n=False,
                    status=NO_QUALIFYING_PRIME,
                )
            )
    return records
