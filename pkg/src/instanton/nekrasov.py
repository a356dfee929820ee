"""Fixed-point sums for instanton partition-function coefficients.

Every coefficient family here is a sum over r-tuples of Young diagrams of a
rational (or trigonometric) function of the parameters.  The families are

* multiplicative (K-theoretic) coefficients in two equivalent forms,
  ``"N"`` and ``"M"``, in variables q1, q2, u, p;
* the same coefficients written in exponential variables
  lambda, eps1, eps2, a, w, plus the sinh-normalised pure-gauge variant;
* homological coefficients (the lambda -> 0 limit);
* the pair-of-partitions sum Z_n(q, t, Q) that matches the norm of the
  Gaiotto state;
* conformal-block coefficients F_n built from bifundamental factors.

Component indices (alpha, beta) are 0-based.  Boxes are 1-based.
"""
from __future__ import annotations

import cmath
import contextvars
import math
from dataclasses import dataclass, field
from typing import Sequence

import mpmath

from .errors import DegenerateFactor, GridViolation, InadmissibleParameters
from .partitions import MultiPartition, Partition, arm, enumerate_tuples, leg

TAU_GRID = 1e-9
REGIME_TOL = 1e-12
# "auto" precision recomputes in extended precision when the estimated
# relative error (cancellation ratio times double epsilon) exceeds this
AUTO_ERROR_TARGET = 1e-12
_EPS = 2.0 ** -52
MAX_DIGITS = 400


def _ctuple(xs) -> tuple:
    return tuple(complex(x) for x in xs)


@dataclass(frozen=True)
class MultiplicativeParams:
    q1: complex
    q2: complex
    u: tuple
    p: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "q1", complex(self.q1))
        object.__setattr__(self, "q2", complex(self.q2))
        object.__setattr__(self, "u", _ctuple(self.u))
        object.__setattr__(self, "p", _ctuple(self.p))
        if not self.u:
            raise InadmissibleParameters("u must have at least one component")

    @property
    def r(self) -> int:
        return len(self.u)

    @property
    def s(self) -> int:
        return len(self.p)

    def admissibility_violations(self) -> list[str]:
        """Human-readable list of violated integral-side hypotheses."""
        out = []
        q1, q2 = self.q1, self.q2
        for name, q in (("q1", q1), ("q2", q2)):
            if not abs(q) < 1:
                out.append(f"|{name}| = {abs(q):.6g} is not < 1")
        conj = abs(q1.conjugate() - q2) <= REGIME_TOL * max(1.0, abs(q1))
        real = (abs(q1.imag) <= REGIME_TOL and abs(q2.imag) <= REGIME_TOL
                and 0 < q1.real < 1 and 0 < q2.real < 1)
        if not (conj or real):
            out.append("need conj(q1) = q2 or both q1, q2 real in (0, 1)")
        umax = max(abs(x) for x in self.u)
        umin = min(abs(x) for x in self.u)
        if umin == 0:
            out.append("u has a zero component")
        for name, q in (("q1", q1), ("q2", q2)):
            if not abs(q) * umax < umin:
                out.append(f"|{name}|*max|u| = {abs(q) * umax:.6g} is not < min|u| = {umin:.6g}")
        return out

    def check_admissible(self) -> None:
        bad = self.admissibility_violations()
        if bad:
            raise InadmissibleParameters("; ".join(bad))


@dataclass(frozen=True)
class ExponentialParams:
    lam: float
    eps1: complex
    eps2: complex
    a: tuple
    w: tuple = ()
    coupling: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "eps1", complex(self.eps1))
        object.__setattr__(self, "eps2", complex(self.eps2))
        object.__setattr__(self, "a", _ctuple(self.a))
        object.__setattr__(self, "w", _ctuple(self.w))
        object.__setattr__(self, "coupling", complex(self.coupling))
        if not self.lam > 0:
            raise InadmissibleParameters("lambda must be positive")

    @property
    def r(self) -> int:
        return len(self.a)

    @property
    def s(self) -> int:
        return len(self.w)

    def to_multiplicative(self) -> MultiplicativeParams:
        lam = self.lam
        return MultiplicativeParams(
            q1=cmath.exp(-lam * self.eps1),
            q2=cmath.exp(-lam * self.eps2),
            u=[cmath.exp(-lam * a) for a in self.a],
            p=[cmath.exp(lam * w) for w in self.w],
        )

    def admissibility_violations(self) -> list[str]:
        out = []
        if not (self.eps1.real > 0 and self.eps2.real > 0):
            out.append("need Re eps1 > 0 and Re eps2 > 0")
        conj = abs(self.eps1.conjugate() - self.eps2) <= REGIME_TOL * max(1.0, abs(self.eps1))
        real = abs(self.eps1.imag) <= REGIME_TOL and abs(self.eps2.imag) <= REGIME_TOL
        if not (conj or real):
            out.append("need conj(eps1) = eps2 or both real")
        spread = max(a.real for a in self.a) - min(a.real for a in self.a)
        for name, e in (("eps1", self.eps1), ("eps2", self.eps2)):
            if not spread < e.real:
                out.append(f"max Re a - min Re a = {spread:.6g} is not < Re {name} = {e.real:.6g}")
        return out

    def check_admissible(self) -> None:
        bad = self.admissibility_violations()
        if bad:
            raise InadmissibleParameters("; ".join(bad))


@dataclass(frozen=True)
class CoefficientValue:
    n: int
    value: complex
    form: str


@dataclass
class SeriesReport:
    """Rows (n, Z_n, |Z_n|^(1/n), bound)."""
    rows: list = field(default_factory=list)

    def add(self, n: int, value: complex, bound: float | None) -> None:
        root = abs(value) ** (1.0 / n) if n > 0 else float("nan")
        self.rows.append((n, complex(value), root, bound))


# -- grid conditions --------------------------------------------------------

def _close(a: complex, b: complex, tol: float = TAU_GRID) -> bool:
    return abs(a - b) <= tol * max(abs(a), abs(b))


def check_grid(mp: MultiplicativeParams, n: int) -> list[tuple]:
    """Resonances that can make individual fixed-point terms singular.

    Returns tuples ("u", alpha, beta, x, y) for u_alpha/u_beta = q1^x q2^y
    (alpha != beta, |x|, |y| <= n, 1-based component labels) and
    ("q", x, y) for q1^x = q2^(y+1) or q1^(x+1) = q2^y with 0 <= x, y < n.
    """
    q1, q2 = mp.q1, mp.q2
    out = []
    for al in range(mp.r):
        for be in range(mp.r):
            if al == be:
                continue
            ratio = mp.u[al] / mp.u[be]
            for x in range(-n, n + 1):
                for y in range(-n, n + 1):
                    if _close(ratio, q1 ** x * q2 ** y):
                        out.append(("u", al + 1, be + 1, x, y))
    for x in range(n):
        for y in range(n):
            if _close(q1 ** x, q2 ** (y + 1)) or _close(q1 ** (x + 1), q2 ** y):
                out.append(("q", x, y))
    return out


# -- multiplicative coefficients --------------------------------------------

# While a term is evaluated, factors add their relative condition numbers
# here so that rounding in near-vanishing factors enters the error estimate.
_COND: contextvars.ContextVar = contextvars.ContextVar("factor_condition", default=None)


def _note(big, diff) -> None:
    acc = _COND.get()
    if acc is not None and diff:
        acc[0] += float(big / abs(diff))


def _minus(a, b):
    d = a - b
    _note(abs(a) + abs(b), d)
    return d


def _one_minus(c):
    # generic over complex and mpmath numbers
    f = 1 - c
    _note(abs(c), f)
    if abs(f) <= TAU_GRID * max(1.0, abs(c)):
        raise DegenerateFactor(f"factor 1 - ({complex(c):.6g}) vanishes")
    return f


def n_factor_N(q1, q2, u, V: MultiPartition, alpha: int, beta: int) -> complex:
    Ya, Yb = V[alpha], V[beta]
    ratio = u[alpha] / u[beta]
    prod = 1
    for s in Ya.boxes():
        prod *= _one_minus(ratio * q1 ** (leg(Ya, s) + 1) * q2 ** (-arm(Yb, s)))
    for t in Yb.boxes():
        prod *= _one_minus(ratio * q1 ** (-leg(Yb, t)) * q2 ** (arm(Ya, t) + 1))
    return prod


def n_factor_M(q1, q2, u, V: MultiPartition, alpha: int, beta: int) -> complex:
    Ya, Yb = V[alpha], V[beta]
    ratio = u[alpha] / u[beta]
    prod = 1
    for s in Ya.boxes():
        prod *= _one_minus(ratio * q1 ** (-leg(Yb, s)) * q2 ** (arm(Ya, s) + 1))
    for t in Yb.boxes():
        prod *= _one_minus(ratio * q1 ** (leg(Ya, t) + 1) * q2 ** (-arm(Yb, t)))
    return prod


def box_position(mp: MultiplicativeParams, alpha: int, box) -> complex:
    """The pole location u_alpha q1^(x-1) q2^(y-1) attached to a box."""
    return _box_position(mp.q1, mp.q2, mp.u, alpha, box)


def _box_position(q1, q2, u, alpha, box):
    x, y = box
    return u[alpha] * q1 ** (x - 1) * q2 ** (y - 1)


def _numerator(q1, q2, u, p, V):
    prod = 1
    for al, Y in enumerate(V):
        for s in Y.boxes():
            z = _box_position(q1, q2, u, al, s)
            for pm in p:
                prod *= _minus(z, pm)
    return prod


def numerator_kappa(mp: MultiplicativeParams, V: MultiPartition) -> complex:
    return complex(_numerator(mp.q1, mp.q2, mp.u, mp.p, V))


def _term(q1, q2, u, p, V, form):
    factor = {"N": n_factor_N, "M": n_factor_M}[form]
    den = 1
    for al in range(len(u)):
        for be in range(len(u)):
            den *= factor(q1, q2, u, V, al, be)
    return _numerator(q1, q2, u, p, V) / den


def term_multiplicative(mp: MultiplicativeParams, V: MultiPartition, form: str = "N") -> complex:
    return complex(_term(mp.q1, mp.q2, mp.u, mp.p, V, form))


def _cancellation(terms) -> float:
    total = abs(sum(terms))
    return math.fsum(abs(t) for t in terms) / total if total else float("inf")


# rounding per arithmetic operation is folded into this multiple of the
# accumulated factor condition numbers
_COND_SAFETY = 10.0


def _conditioned_terms(term, args, items) -> tuple[list, float]:
    """Evaluate the terms; return them with sum (|t| kappa_t) / |sum t|.

    kappa_t is one plus the summed condition numbers of the factors of t, so
    the ratio times the unit roundoff bounds the relative error of the sum up
    to a modest constant.
    """
    terms, weights = [], []
    for V in items:
        acc = [0.0]
        token = _COND.set(acc)
        try:
            t = term(*args, V)
        finally:
            _COND.reset(token)
        terms.append(t)
        weights.append(float(abs(t)) * (1.0 + _COND_SAFETY * acc[0]))
    total = abs(sum(terms)) if terms else 0.0
    return terms, (math.fsum(weights) / float(total) if total else math.inf)


def _digits_needed(ratio: float) -> int:
    # 16 digits of headroom for the answer plus the digits lost to cancellation
    return 20 + max(0, math.ceil(math.log10(ratio))) if math.isfinite(ratio) else MAX_DIGITS


def _check_precision(precision):
    if precision not in ("auto", "double") and not (isinstance(precision, int) and precision >= 15):
        raise ValueError("precision must be 'auto', 'double' or a digit count >= 15")


def _to_mp(x):
    if isinstance(x, (list, tuple)):
        return [_to_mp(v) for v in x]
    return mpmath.mpc(x)


def _adaptive_sum(term, args, items, precision) -> complex:
    """Sum term(*args, item) over items, escalating precision as requested.

    precision: "double" sums in complex doubles; an int sums with that many
    decimal digits; "auto" uses doubles unless the conditioned cancellation ratio
    (see _conditioned_terms) predicts a relative error above AUTO_ERROR_TARGET,
    then redoes the sum with enough digits to absorb it.
    """
    _check_precision(precision)
    if isinstance(precision, int):
        with mpmath.workdps(precision):
            margs = [_to_mp(a) for a in args]
            return complex(mpmath.fsum(term(*margs, V) for V in items))
    terms, ratio = _conditioned_terms(term, args, items)
    if precision == "double" or ratio * _EPS <= AUTO_ERROR_TARGET:
        return complex(sum(terms, 0j))
    # a badly cancelled double sum understates the ratio, so iterate until the
    # ratio measured at the working precision is covered
    digits = _digits_needed(ratio)
    while True:
        with mpmath.workdps(digits):
            margs = [_to_mp(a) for a in args]
            terms, ratio = _conditioned_terms(term, margs, items)
            total = mpmath.fsum(terms)
        if ratio * 10.0 ** (1 - digits) <= AUTO_ERROR_TARGET * 1e-3 or digits >= MAX_DIGITS:
            return complex(total)
        digits = min(MAX_DIGITS, max(digits + 10, _digits_needed(ratio)))


def zn_multiplicative(mp: MultiplicativeParams, n: int, form: str = "N", precision="auto") -> complex:
    """Sum over r-tuples of size n of the closed-form fixed-point terms (see _adaptive_sum)."""
    if form not in ("N", "M"):
        raise ValueError("form must be 'N' or 'M'")
    term = lambda q1, q2, u, p, V: _term(q1, q2, u, p, V, form)  # noqa: E731
    try:
        return _adaptive_sum(term, (mp.q1, mp.q2, mp.u, mp.p), enumerate_tuples(mp.r, n), precision)
    except DegenerateFactor as exc:
        viol = check_grid(mp, n)
        raise GridViolation(f"degenerate fixed-point term at n={n}: {exc}; resonances: {viol}", viol) from exc


def cancellation_ratio(mp: MultiplicativeParams, n: int, form: str = "N") -> float:
    """sum |term| / |sum term|; times machine epsilon this estimates the relative error.

    Near-resonances q1^x ~ q2^y make single terms huge while the sum stays
    moderate, so large n loses digits to cancellation in double precision.
    """
    return _cancellation([term_multiplicative(mp, V, form) for V in enumerate_tuples(mp.r, n)])


def radius_bound(mp: MultiplicativeParams) -> float:
    """Upper bound for limsup |Z_n|^(1/n): prod_m max(|p_m|, max_alpha |u_alpha|)."""
    mp.check_admissible()
    umax = max(abs(x) for x in mp.u)
    return float(math.prod(max(abs(p), umax) for p in mp.p))


def invert_params(mp: MultiplicativeParams) -> MultiplicativeParams:
    """(q1, q2, u) -> (1/q1, 1/q2, 1/u); only defined without matter."""
    if mp.p:
        raise ValueError("inversion is only defined for p = ()")
    vals = (mp.q1, mp.q2) + mp.u
    if any(v == 0 for v in vals):
        raise InadmissibleParameters("cannot invert a zero parameter")
    return MultiplicativeParams(1 / mp.q1, 1 / mp.q2, [1 / x for x in mp.u])


# -- exponential variables --------------------------------------------------

def _one_minus_exp(x):
    """1 - exp(-x), accurate for small x."""
    f = -_expm1(-x)
    # d log(1 - e^-x) / d log x = x e^-x / (1 - e^-x)
    _note(abs(x) * abs(_exp(-x)), f)
    if abs(f) <= TAU_GRID * max(1.0, abs(_exp(-x))):
        raise DegenerateFactor(f"factor 1 - exp(-({complex(x):.6g})) vanishes")
    return f


def _exp(z):
    return mpmath.exp(z) if isinstance(z, mpmath.mpc) else cmath.exp(z)


def _expm1(z):
    if isinstance(z, mpmath.mpc):
        return mpmath.expm1(z)
    # cmath has no expm1; split into modulus and phase parts
    if abs(z) > 1e-3:
        return cmath.exp(z) - 1
    x, y = z.real, z.imag
    em = math.expm1(x)
    # exp(x + iy) - 1 = (e^x - 1) cos y + (cos y - 1) + i e^x sin y
    return complex(em * math.cos(y) - 2 * math.sin(y / 2) ** 2, math.exp(x) * math.sin(y))


def _tangent_weights(eps1, eps2, a, V: MultiPartition):
    """Yield the 2 r n linear forms E appearing in the fixed-point weights."""
    r = len(a)
    for al in range(r):
        for be in range(r):
            Ya, Yb = V[al], V[be]
            da = a[al] - a[be]
            for s in Ya.boxes():
                yield -leg(Yb, s) * eps1 + (arm(Ya, s) + 1) * eps2 + da
            for t in Yb.boxes():
                yield (leg(Ya, t) + 1) * eps1 - arm(Yb, t) * eps2 + da


def _term_exponential(lam, eps1, eps2, a, w, V):
    den = 1
    for E in _tangent_weights(eps1, eps2, a, V):
        den *= _one_minus_exp(lam * E)
    num = 1
    for al, Y in enumerate(V):
        for x, y in Y.boxes():
            z = _exp(-lam * (a[al] + (x - 1) * eps1 + (y - 1) * eps2))
            for wj in w:
                num *= _minus(z, _exp(lam * wj))
    return num / den


def zn_exponential(ep: ExponentialParams, n: int, precision="auto") -> complex:
    args = (ep.lam, ep.eps1, ep.eps2, ep.a, ep.w)
    try:
        return _adaptive_sum(_term_exponential, args, enumerate_tuples(ep.r, n), precision)
    except DegenerateFactor as exc:
        raise GridViolation(f"degenerate fixed-point term at n={n}: {exc}") from exc


def series_prefactor(ep: ExponentialParams) -> complex:
    """coupling * lambda^(2r-s) * exp(-r lambda (eps1+eps2)/2)."""
    return (ep.coupling * ep.lam ** (2 * ep.r - ep.s)
            * cmath.exp(-ep.r * ep.lam * (ep.eps1 + ep.eps2) / 2))


def domain_bound(ep: ExponentialParams) -> float:
    """Radius in the coupling below which the series converges."""
    ep.check_admissible()
    lam = ep.lam
    amin = min(a.real for a in ep.a)
    expo = ep.r * (ep.eps1 + ep.eps2).real / 2
    expo += sum(min(-w.real, amin) for w in ep.w)
    return lam ** (ep.s - 2 * ep.r) * math.exp(lam * expo)


def partition_function_partial(ep: ExponentialParams, N_max: int) -> tuple[complex, SeriesReport]:
    report = SeriesReport()
    c = series_prefactor(ep)
    try:
        bound = radius_bound(ep.to_multiplicative())
    except InadmissibleParameters:
        bound = None
    total = 0j
    for n in range(N_max + 1):
        zn = zn_exponential(ep, n)
        report.add(n, zn, bound)
        total += c ** n * zn
    return total, report


def zn_sinh_intro(ep: ExponentialParams, n: int) -> complex:
    """Pure-gauge coefficient in the symmetric sinh normalisation.

    Equals lambda^(2rn) exp(-lambda (eps1+eps2) r n / 2) zn_exponential.
    """
    if ep.s:
        raise ValueError("the sinh form is defined for pure gauge theory only")
    lam, e1, e2, a = ep.lam, ep.eps1, ep.eps2, ep.a
    half = (lam / 2) ** 2
    total = 0j
    for V in enumerate_tuples(ep.r, n):
        term = 1.0 + 0j
        for al in range(ep.r):
            for be in range(ep.r):
                Ya, Yb = V[al], V[be]
                for b in Ya.boxes():
                    E = a[al] - a[be] - leg(Yb, b) * e1 + (arm(Ya, b) + 1) * e2
                    den = cmath.sinh(lam * E / 2) * cmath.sinh(lam * (e1 + e2 - E) / 2)
                    if abs(den) <= TAU_GRID * half:
                        raise GridViolation(f"sinh factor vanishes for {V!r}")
                    term *= half / den
        total += term
    return total


# -- homological limit ------------------------------------------------------

def zn_homological(eps1, eps2, a: Sequence[complex], n: int) -> complex:
    eps1, eps2 = complex(eps1), complex(eps2)
    a = _ctuple(a)
    scale = abs(eps1) + abs(eps2)
    total = 0j
    for V in enumerate_tuples(len(a), n):
        den = 1.0 + 0j
        for E in _tangent_weights(eps1, eps2, a, V):
            if abs(E) <= TAU_GRID * scale:
                raise DegenerateFactor(f"linear weight vanishes for {V!r}")
            den *= E
        total += 1 / den
    return total


# -- pairs of partitions: norm of the Gaiotto state -------------------------

def _gaiotto_N(q, t, Q, nu: Partition, mu: Partition) -> complex:
    prod = 1.0 + 0j
    for s in mu.boxes():
        prod *= _one_minus(Q * q ** arm(nu, s) * t ** (leg(mu, s) + 1))
    for s in nu.boxes():
        prod *= _one_minus(Q * q ** (-arm(mu, s) - 1) * t ** (-leg(nu, s)))
    return prod


def _term_gaiotto(q, t, Q, pair):
    nu, mu = pair
    return 1 / (_gaiotto_N(q, t, Q, nu, mu) * _gaiotto_N(q, t, 1 / Q, mu, nu)
                * _gaiotto_N(q, t, 1, nu, nu) * _gaiotto_N(q, t, 1, mu, mu))


def zn_gaiotto(q, t, Q, n: int, precision="auto") -> complex:
    return _adaptive_sum(_term_gaiotto, (complex(q), complex(t), complex(Q)), enumerate_tuples(2, n), precision)


def gaiotto_as_multiplicative(q, t, Q) -> MultiplicativeParams:
    """q1 = t, q2 = 1/q, u = (Q^(1/2), Q^(-1/2)) with the principal root."""
    sq = cmath.sqrt(complex(Q))
    return MultiplicativeParams(q1=t, q2=1 / complex(q), u=(sq, 1 / sq))


# -- conformal blocks -------------------------------------------------------

def z_bif(alpha, b, P_prime, V_prime: MultiPartition, P, V: MultiPartition) -> complex:
    """Bifundamental factor for pairs of partitions with vectors (P', -P'), (P, -P)."""
    Pp = (complex(P_prime), -complex(P_prime))
    Pv = (complex(P), -complex(P))
    binv = 1 / b
    prod = 1.0 + 0j
    for i in range(2):
        for j in range(2):
            Yi, Ypj = V[i], V_prime[j]
            d = Pp[j] - Pv[i] - alpha
            for s in Yi.boxes():
                prod *= d + b * (leg(Ypj, s) + 1) - binv * arm(Yi, s)
            for t in Ypj.boxes():
                prod *= d - b * leg(Yi, t) + binv * (arm(Ypj, t) + 1)
    return prod


def conformal_shifts(b, alpha_r, alpha_l, P_r, P_l) -> tuple:
    """The four matter shifts v_1..v_4."""
    c = b + 1 / b
    return (alpha_r + P_r, alpha_r - P_r, -alpha_l + c + P_l, -alpha_l + c - P_l)


def conformal_numerator_product(b, alpha_r, alpha_l, P_r, P_m, P_l, V: MultiPartition) -> complex:
    """Product form of the two matter bifundamental factors."""
    v = conformal_shifts(b, alpha_r, alpha_l, P_r, P_l)
    Pv = (P_m, -P_m)
    prod = 1.0 + 0j
    for i in range(2):
        for x, y in V[i].boxes():
            base = Pv[i] + b * (x - 1) + (y - 1) / b
            for vm in v:
                prod *= base + vm
    return prod


def conformal_block_Fn(b, alpha_r, alpha_l, P_r, P_m, P_l, n: int) -> complex:
    b = complex(b)
    empty = MultiPartition(((), ()))
    total = 0j
    for V in enumerate_tuples(2, n):
        den = z_bif(0, b, P_m, V, P_m, V)
        if abs(den) == 0:
            raise DegenerateFactor(f"vector-multiplet factor vanishes for {V!r}")
        num = z_bif(alpha_r, b, P_r, empty, P_m, V) * z_bif(alpha_l, b, P_m, V, P_l, empty)
        total += num / den
    return total


def conformal_as_exponential(b, alpha_r, alpha_l, P_r, P_m, P_l, lam: float) -> ExponentialParams:
    return ExponentialParams(lam=lam, eps1=b, eps2=1 / complex(b), a=(P_m, -P_m),
                             w=conformal_shifts(b, alpha_r, alpha_l, P_r, P_l))
