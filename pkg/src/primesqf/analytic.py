"""Rigorous evaluation of the explicit main terms and error envelopes.

All quantities are evaluated in mpmath working precision well beyond the
certification needs, and every bound-certifying operation applies directed
safety nudges: error addends are pushed up, main terms down, so a positive
certified value is sound despite floating arithmetic.  The nudges (1e-30
relative) exceed the worst-case accumulated rounding of the ~10^4 operations
per bound by many orders of magnitude.

The progression constants c_theta(m) live in a CThetaTable.  Only the three
modulus-1 rows are bundled; tables for moduli >= 3 (Bennett-Martin-O'Bryant-
Rechnitzer style) must be supplied as a data file, and their absence is
always a reported condition, never a silent default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import mpmath as mp

from . import arith, sieve

__all__ = [
    "Enclosure",
    "PrecisionError",
    "CThetaEntry",
    "CThetaTable",
    "CThetaMissingError",
    "CThetaParseError",
    "Rounding",
    "BoundParams",
    "AnalyticConstants",
    "LowerBoundReport",
    "EdeBreakdown",
    "ChenBoundReport",
    "ARTIN_REFERENCE",
    "ZETA_RATIO_REFERENCE",
    "CHEBYSHEV_CONSTANTS",
    "artin_constant",
    "artin_product_upto",
    "zeta_ratio",
    "zeta_ratio_routes",
    "zeta_ratio_product_enclosure",
    "A_de",
    "A_k",
    "A_k_l",
    "tail_phi_sum",
    "E_de",
    "E_de_breakdown",
    "E_k",
    "even_lower_bound",
    "odd_lower_bound",
    "asymptotic_main_term",
    "chen_factor_bound",
    "load_ctheta",
    "default_constants",
]

_DPS = 50

# 10-digit truncation of the 45-decimal reference value of Artin's constant;
# a truncation is a lower bound, which is the safe direction for main terms.
ARTIN_REFERENCE = "0.3739558136"

# zeta(2)*zeta(3)/zeta(6) to 11 significant digits, for test reference.
ZETA_RATIO_REFERENCE = "1.9435964368"

EVEN_BOUND_MIN_N = 4 * 10**18
ODD_BOUND_MIN_N = 8 * 10**9
EVEN_BOUND_MAX_K = 2 * 10**5
ODD_BOUND_MAX_K = 10**5

# Classical explicit Chebyshev bounds (Rosser & Schoenfeld 1962 family),
# deliberately conservative; validity is re-checked numerically in the tests.
CHEBYSHEV_CONSTANTS = {
    "theta_lower_slope": "0.84",  # theta(x) > 0.84 x for x >= theta_lower_from
    "theta_lower_from": 101,
    "pi_upper_factor": "1.3",  # pi(x) < 1.3 x / log x for x >= pi_upper_from
    "pi_upper_from": 17,
    "source": "Rosser-Schoenfeld-type explicit prime bounds",
}


class PrecisionError(ValueError):
    """Requested precision cannot be certified with the configured truncation."""


def _up(x):
    return x + abs(x) * mp.mpf("1e-30")


def _down(x):
    return x - abs(x) * mp.mpf("1e-30")


@dataclass(frozen=True)
class Enclosure:
    """Certified interval [lo, hi] around a real constant."""

    lo: mp.mpf
    hi: mp.mpf

    @property
    def value(self) -> mp.mpf:
        return (self.lo + self.hi) / 2

    @property
    def radius(self) -> mp.mpf:
        return (self.hi - self.lo) / 2

    def contains(self, x) -> bool:
        return self.lo <= mp.mpf(x) <= self.hi


# ---------------------------------------------------------------------------
# constants

def _euler_factors(prime_limit: int):
    return sieve.base_primes(prime_limit).tolist()


@lru_cache(maxsize=8)
def artin_product_upto(prime_limit: int) -> mp.mpf:
    """Truncated product prod_{p <= P} (1 - 1/(p(p-1))); decreasing in P."""
    with mp.workdps(40):
        acc = mp.mpf(1)
        for p in _euler_factors(prime_limit):
            acc *= 1 - mp.mpf(1) / (p * (p - 1))
        return acc


@lru_cache(maxsize=8)
def _artin_enclosure(prime_limit: int) -> Enclosure:
    partial = artin_product_upto(prime_limit)
    with mp.workdps(40):
        # tail: 1 >= prod_{p > P}(1 - x_p) > 1 - sum x_p > 1 - 1/P,
        # since sum_{p > P} 1/(p(p-1)) < sum_{m > P} 1/(m(m-1)) = 1/P.
        slack = mp.mpf("1e-25")  # covers accumulated product rounding
        lo = partial * (1 - mp.mpf(1) / prime_limit) * (1 - slack)
        hi = partial * (1 + slack)
        return Enclosure(lo=lo, hi=hi)


_ARTIN_LADDER = (10**4, 10**5, 10**6, 10**7)


def artin_constant(target_digits: int, prime_limit: int = 10**7) -> Enclosure:
    """Certified enclosure of Artin's constant from a truncated Euler product.

    The enclosure width is about 0.374/P for truncation prime P; the ladder
    picks the smallest P with 1/P below 10^(3 - target_digits), so requests
    beyond 10 digits exceed the default truncation and raise PrecisionError.
    """
    if not 1 <= target_digits <= 30:
        raise ValueError(f"target_digits must be in 1..30, got {target_digits}")
    required = mp.mpf(10) ** (3 - target_digits)
    chosen = None
    for p in _ARTIN_LADDER:
        if p <= prime_limit and mp.mpf(1) / p <= required:
            chosen = p
            break
    if chosen is None:
        raise PrecisionError(
            f"{target_digits} digits unachievable with truncation at {prime_limit}"
        )
    enc = _artin_enclosure(chosen)
    if not enc.contains(mp.mpf(ARTIN_REFERENCE)):
        raise AssertionError("artin enclosure lost the reference value")
    return enc


def _zeta3_apery() -> mp.mpf:
    # zeta(3) = (5/2) * sum_{k>=1} (-1)^(k-1) / (k^3 C(2k,k)); alternating with
    # |terms| ~ 4^-k, so 90 terms leave a remainder below 1e-54.
    total = Fraction(0)
    for k in range(1, 91):
        total += Fraction((-1) ** (k - 1), k**3 * math.comb(2 * k, k))
    total *= Fraction(5, 2)
    with mp.workdps(_DPS):
        return mp.mpf(total.numerator) / total.denominator


def zeta_ratio_routes() -> tuple[mp.mpf, mp.mpf]:
    """(explicit route, mpmath-zeta route) for zeta(2)zeta(3)/zeta(6).

    Explicit route: zeta(2) = pi^2/6 and zeta(6) = pi^6/945 in closed form,
    zeta(3) from the Apery-style central-binomial series.
    """
    with mp.workdps(_DPS):
        explicit = (mp.pi**2 / 6) * _zeta3_apery() * (945 / mp.pi**6)
        via_zeta = mp.zeta(2) * mp.zeta(3) / mp.zeta(6)
        return explicit, via_zeta


@lru_cache(maxsize=1)
def zeta_ratio() -> mp.mpf:
    """zeta(2)zeta(3)/zeta(6) = sum over squarefree a of 1/phi(a^2)."""
    explicit, via_zeta = zeta_ratio_routes()
    if abs(explicit - via_zeta) > mp.mpf("1e-12") * explicit:
        raise AssertionError("zeta ratio routes disagree")
    return explicit


@lru_cache(maxsize=4)
def zeta_ratio_product_enclosure(prime_limit: int = 10**7) -> Enclosure:
    """Enclosure from the Euler product prod_p (1 + 1/(p^2 - p)).

    The omitted tail multiplies the partial product by a factor in
    [1, exp(1/P)], which is the width floor of this route (about 2e-7 at
    P = 10^7); the tighter zeta-value routes are cross-checked against it
    by containment.
    """
    with mp.workdps(40):
        acc = mp.mpf(1)
        for p in _euler_factors(prime_limit):
            acc *= 1 + mp.mpf(1) / (p * p - p)
        slack = mp.mpf("1e-25")
        lo = acc * (1 - slack)
        hi = acc * (1 + slack) * mp.exp(mp.mpf(1) / prime_limit)
        return Enclosure(lo=lo, hi=hi)


@dataclass(frozen=True)
class AnalyticConstants:
    artin_c: mp.mpf
    zeta_ratio: mp.mpf
    truncation_prime: int


def default_constants() -> AnalyticConstants:
    return AnalyticConstants(
        artin_c=artin_constant(10).value,
        zeta_ratio=zeta_ratio(),
        truncation_prime=10**7,
    )


# ---------------------------------------------------------------------------
# c_theta table

class CThetaParseError(ValueError):
    pass


class CThetaMissingError(LookupError):
    """No valid c_theta entry for the requested (modulus, n)."""

    def __init__(self, moduli, n):
        self.moduli = tuple(sorted(set(moduli)))
        self.n = n
        named = ", ".join(str(m) for m in self.moduli)
        super().__init__(f"no c_theta entry valid at n = {n} for moduli: {named}")


@dataclass(frozen=True)
class CThetaEntry:
    m: int
    x0: int
    c: mp.mpf


_BUNDLED_NAME = "data/ctheta_default.txt"


class CThetaTable:
    """Map modulus -> validity-threshold rows for |theta(n;m,n) - n/phi(m)| < c n/log n."""

    def __init__(self, entries: list[CThetaEntry], provenance: str):
        self.provenance = provenance
        self._by_m: dict[int, list[CThetaEntry]] = {}
        seen = set()
        for ent in entries:
            if ent.m < 1 or ent.x0 < 2 or not ent.c > 0:
                raise ValueError(f"invalid c_theta entry {ent}")
            if (ent.m, ent.x0) in seen:
                raise ValueError(f"duplicate c_theta row for (m={ent.m}, x0={ent.x0})")
            seen.add((ent.m, ent.x0))
            self._by_m.setdefault(ent.m, []).append(ent)
        for m, rows in self._by_m.items():
            rows.sort(key=lambda r: r.x0)
            for a, b in zip(rows, rows[1:]):
                if not b.c < a.c:
                    raise ValueError(
                        f"c_theta rows for m={m} must have strictly decreasing "
                        f"constants as thresholds grow (x0={a.x0} -> {b.x0})"
                    )

    def moduli(self) -> set[int]:
        return set(self._by_m)

    def entries(self) -> list[CThetaEntry]:
        return [e for rows in self._by_m.values() for e in rows]

    def query(self, m: int, n: int) -> CThetaEntry:
        """Entry with the largest threshold x0 <= n (the smallest valid constant)."""
        rows = self._by_m.get(m)
        if not rows:
            raise CThetaMissingError([m], n)
        best = None
        for row in rows:
            if row.x0 <= n:
                best = row
        if best is None:
            raise CThetaMissingError([m], n)
        return best


def _parse_ctheta_text(text: str, origin: str) -> list[CThetaEntry]:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise CThetaParseError(
                f"{origin}:{lineno}: expected 'modulus, threshold, constant', got {raw!r}"
            )
        try:
            m = int(parts[0])
            x0 = int(parts[1])
            with mp.workdps(_DPS):
                c = mp.mpf(parts[2])
        except (ValueError, TypeError) as exc:
            raise CThetaParseError(f"{origin}:{lineno}: {exc}") from None
        entries.append(CThetaEntry(m=m, x0=x0, c=c))
    return entries


@lru_cache(maxsize=1)
def _bundled_entries() -> tuple[CThetaEntry, ...]:
    text = resources.files("primesqf").joinpath(_BUNDLED_NAME).read_text()
    return tuple(_parse_ctheta_text(text, "bundled"))


def bundled_table() -> CThetaTable:
    return CThetaTable(list(_bundled_entries()), provenance="bundled m=1 defaults")


def load_ctheta(path) -> CThetaTable:
    """Parse a c_theta data file and merge it with the bundled m=1 rows."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    entries = _parse_ctheta_text(text, str(path))
    merged = list(_bundled_entries()) + entries
    return CThetaTable(merged, provenance=f"{path} + bundled m=1 defaults")


# ---------------------------------------------------------------------------
# bound parameters

class Rounding(Enum):
    CONSERVATIVE_DIRECTED = "conservative-directed"
    NEAREST = "nearest"


@dataclass(frozen=True)
class BoundParams:
    """Free parameters of the error envelope: exponent split C, progression
    cutoff N, admissible floor n0 (must satisfy n0^C > sqrt(N))."""

    C: float
    N: int = 10**5
    n0: int = 0
    rounding: Rounding = Rounding.CONSERVATIVE_DIRECTED

    def __post_init__(self):
        if not 0 < self.C < 0.5:
            raise ValueError(f"C must lie in (0, 1/2), got {self.C}")
        if self.N <= 0:
            raise ValueError(f"N must be positive, got {self.N}")
        n0 = self.n0 if self.n0 else self.minimal_n0(self.C, self.N)
        object.__setattr__(self, "n0", n0)
        with mp.workdps(_DPS):
            if not mp.mpf(n0) ** self.C > mp.sqrt(mp.mpf(self.N)):
                raise ValueError(f"n0 = {n0} violates n0^C > sqrt(N) for C={self.C}, N={self.N}")

    @staticmethod
    def minimal_n0(C: float, N) -> int:
        with mp.workdps(_DPS):
            floor = mp.mpf(N) ** (1 / (2 * mp.mpf(C)))
            n0 = int(mp.floor(floor)) + 1
            while not mp.mpf(n0) ** C > mp.sqrt(mp.mpf(N)):
                n0 += 1
            return n0


# ---------------------------------------------------------------------------
# main-term products

def _artin_lower() -> mp.mpf:
    return mp.mpf(ARTIN_REFERENCE)


def _prod_over_n(n: int) -> mp.mpf:
    acc = mp.mpf(1)
    for p in arith.factorize(n).prime_factors():
        acc *= 1 + mp.mpf(1) / (p * p - p - 1)
    return acc


def _prod_over_k(k: int) -> mp.mpf:
    acc = mp.mpf(1)
    for q in arith.factorize(k).prime_factors():
        acc *= 1 - mp.mpf(q - 1) / (q * q - q - 1)
    return acc


def _prod_over_l(l: int) -> mp.mpf:
    acc = mp.mpf(1)
    for r in arith.factorize(l).prime_factors():
        acc *= mp.mpf(r - 1) / (r * r - r - 1)
    return acc


def _require_squarefree(x: int, name: str) -> None:
    if x < 1 or arith.mobius(x) == 0:
        raise ValueError(f"{name} = {x} must be a positive squarefree integer")


def A_de(n: int, d: int, e: int) -> mp.mpf:
    """Main-term density piece for one (d, e) progression block; sign is mu(e)."""
    _require_squarefree(d, "d")
    if e < 1 or d % e != 0:
        raise ValueError(f"e = {e} must divide d = {d}")
    with mp.workdps(_DPS):
        denom = mp.mpf(1)
        for q in arith.factorize(d).prime_factors():
            denom *= q * q - q - 1
        return (
            _artin_lower()
            * n
            * _prod_over_n(n)
            * arith.mobius(e)
            * (mp.mpf(d) / e)
            / denom
        )


def A_k(n: int, k: int) -> mp.mpf:
    """Collapsed main term c n prod_{p|n}(1 + 1/(p^2-p-1)) prod_{q|k}(1 - (q-1)/(q^2-q-1)).

    At q = 2 the k-factor is exactly 0 (2^2 - 2 - 1 = 1), so A_k vanishes for
    even k; the even-modulus bounds therefore always route through k/2.
    """
    _require_squarefree(k, "k")
    with mp.workdps(_DPS):
        return _artin_lower() * n * _prod_over_n(n) * _prod_over_k(k)


def A_k_l(n: int, k: int, l: int) -> mp.mpf:
    """A_k scaled by the density of progressions eta = 0 (mod l)."""
    _require_squarefree(k, "k")
    _require_squarefree(l, "l")
    if math.gcd(k, l) != 1:
        raise ValueError(f"k = {k} and l = {l} must be coprime")
    with mp.workdps(_DPS):
        return A_k(n, k) * _prod_over_l(l)


# ---------------------------------------------------------------------------
# error envelope

def _cut_values(d: int, e: int, N) -> list[int]:
    """Squarefree a with (a, d) = e and a^2 d <= N e, ascending."""
    nfrac = Fraction(N)
    out = []
    a = e
    while Fraction(a * a * d) <= nfrac * e:
        if math.gcd(a, d) == e and arith.mobius(a) != 0:
            out.append(a)
        a += e
    return out


def tail_phi_sum(d: int, e: int, N) -> mp.mpf:
    """(1/phi(d/e)) * sum over squarefree a > sqrt(N e/d) with (a,d)=e of 1/phi(a^2),
    via the closed-form total minus the exact finite partial sum.

    Closed form: the full constrained sum equals
    (d/e) / prod_{p|d}(p^2 - p + 1) * zeta(2)zeta(3)/zeta(6).
    """
    _require_squarefree(d, "d")
    if e < 1 or d % e != 0:
        raise ValueError(f"e = {e} must divide d = {d}")
    with mp.workdps(_DPS):
        denom = mp.mpf(1)
        for p in arith.factorize(d).prime_factors():
            denom *= p * p - p + 1
        total = (mp.mpf(d) / e) / denom * zeta_ratio()
        finite = Fraction(0)
        for a in _cut_values(d, e, N):
            finite += Fraction(1, a * arith.euler_phi(a))  # phi(a^2) = a phi(a)
        finite /= arith.euler_phi(d // e)
        finite_mp = mp.mpf(finite.numerator) / finite.denominator
        tail = total - finite_mp
        if tail < 0:
            raise AssertionError("negative tail: closed form below the partial sum")
        return tail


@dataclass(frozen=True)
class EdeBreakdown:
    n: int
    d: int
    e: int
    comp_ctheta: mp.mpf
    comp_tail: mp.mpf
    comp_sigma3: mp.mpf
    total: mp.mpf
    used_moduli: tuple[int, ...]


def E_de_breakdown(n: int, d: int, e: int, params: BoundParams, table: CThetaTable) -> EdeBreakdown:
    """The three-part error envelope around A_de for one progression block.

    Components (all nonnegative, each rounded upward in conservative mode):
    a progression-constant sum scaled by n/log n, a Brun-Titchmarsh inflated
    reciprocal-totient tail scaled by n, and the crude large-progression
    remainder scaled by n log n.
    """
    _require_squarefree(d, "d")
    if e < 1 or d % e != 0:
        raise ValueError(f"e = {e} must divide d = {d}")
    if n < params.n0:
        raise ValueError(f"n = {n} is below the admissible floor n0 = {params.n0}")
    conservative = params.rounding is Rounding.CONSERVATIVE_DIRECTED
    rnd = _up if conservative else (lambda x: x)
    with mp.workdps(_DPS):
        nn = mp.mpf(n)
        logn = mp.log(nn)
        avals = _cut_values(d, e, params.N)
        missing = []
        csum = mp.mpf(0)
        moduli = []
        for a in avals:
            m = d * a * a // e
            try:
                csum += table.query(m, n).c
                moduli.append(m)
            except CThetaMissingError:
                missing.append(m)
        if missing:
            raise CThetaMissingError(missing, n)
        comp1 = rnd(nn / logn * csum)
        bt = mp.mpf(1 + 2 * params.C) / (1 - 2 * params.C)
        comp2 = rnd(nn * bt * tail_phi_sum(d, e, params.N))
        sigma3 = (
            nn ** mp.mpf("-0.5") * (mp.mpf(1) / e - mp.mpf(1) / d)
            + nn ** (-mp.mpf(params.C)) / mp.sqrt(mp.mpf(d) * e)
            + nn ** (-2 * mp.mpf(params.C))
        )
        comp3 = rnd(nn * logn * sigma3)
        return EdeBreakdown(
            n=n,
            d=d,
            e=e,
            comp_ctheta=comp1,
            comp_tail=comp2,
            comp_sigma3=comp3,
            total=rnd(comp1 + comp2 + comp3),
            used_moduli=tuple(moduli),
        )


def E_de(n: int, d: int, e: int, params: BoundParams, table: CThetaTable) -> mp.mpf:
    return E_de_breakdown(n, d, e, params, table).total


def E_k(n: int, k: int, params: BoundParams, table: CThetaTable) -> mp.mpf:
    """Sum of E_de over e | d | k."""
    _require_squarefree(k, "k")
    with mp.workdps(_DPS):
        total = mp.mpf(0)
        for d in arith.squarefree_divisors(k):
            for e in arith.squarefree_divisors(d):
                total += E_de(n, d, e, params, table)
        return total


# ---------------------------------------------------------------------------
# certified lower bounds for Rbar_k(n)/n

_DATA_NOTE = (
    "certification is relative to the supplied c_theta table; the bundled data "
    "covers modulus 1 only, so the published verification thresholds "
    "(4e18 even / 8e9 general) are not reproducible without an externally "
    "supplied table for moduli >= 3"
)


@dataclass(frozen=True)
class LowerBoundReport:
    """Explicit lower bound for Rbar_k(n)/n, component by component.

    `value` is main_term minus the four penalty groups; it is None whenever
    the c_theta table lacks required moduli, in which case `verdict` is
    "insufficient-table" and `ctheta_sum` holds the partial sum over the
    covered moduli only.
    """

    n: int
    k: int
    parity: str
    C: float
    N: int
    main_term: mp.mpf
    ctheta_sum: mp.mpf
    tail_sum: mp.mpf
    sigma3_sum: mp.mpf
    log_k_over_n: mp.mpf
    log_n_over_n: mp.mpf
    missing_moduli: tuple[int, ...]
    covered_moduli: tuple[int, ...]
    value: mp.mpf | None
    verdict: str
    table_provenance: str
    data_note: str = _DATA_NOTE

    def certifies(self) -> bool:
        return self.verdict == "yes"

    def penalty_total(self) -> mp.mpf:
        return self.ctheta_sum + self.tail_sum + self.sigma3_sum + self.log_k_over_n + self.log_n_over_n

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "parity": self.parity,
            "C": self.C,
            "N": self.N,
            "main_term": mp.nstr(self.main_term, 17),
            "ctheta_sum": mp.nstr(self.ctheta_sum, 17),
            "tail_sum": mp.nstr(self.tail_sum, 17),
            "sigma3_sum": mp.nstr(self.sigma3_sum, 17),
            "log_k_over_n": mp.nstr(self.log_k_over_n, 17),
            "log_n_over_n": mp.nstr(self.log_n_over_n, 17),
            "missing_moduli": list(self.missing_moduli),
            "covered_moduli": list(self.covered_moduli),
            "value": None if self.value is None else mp.nstr(self.value, 17),
            "verdict": self.verdict,
            "table_provenance": self.table_provenance,
            "data_note": self.data_note,
        }


def _lower_bound(n, k, divisor_root, main_term, params, table, parity):
    conservative = params.rounding is Rounding.CONSERVATIVE_DIRECTED
    rnd_up = _up if conservative else (lambda x: x)
    with mp.workdps(_DPS):
        nn = mp.mpf(n)
        logn = mp.log(nn)
        if not nn ** mp.mpf(params.C) > mp.sqrt(mp.mpf(params.N)):
            raise ValueError(f"n^C must exceed sqrt(N); n={n}, C={params.C}, N={params.N}")
        csum = mp.mpf(0)
        sigma3 = mp.mpf(0)
        tails = mp.mpf(0)
        missing: list[int] = []
        covered: list[int] = []
        for d in arith.squarefree_divisors(divisor_root):
            for e in arith.squarefree_divisors(d):
                for a in _cut_values(d, e, params.N):
                    m = d * a * a // e
                    try:
                        csum += table.query(m, n).c
                        covered.append(m)
                    except CThetaMissingError:
                        missing.append(m)
                tails += tail_phi_sum(d, e, params.N)
                sigma3 += (
                    nn ** mp.mpf("-0.5") * (mp.mpf(1) / e - mp.mpf(1) / d)
                    + nn ** (-mp.mpf(params.C)) / mp.sqrt(mp.mpf(d) * e)
                    + nn ** (-2 * mp.mpf(params.C))
                )
        bt = mp.mpf(1 + 2 * params.C) / (1 - 2 * params.C)
        ctheta_sum = rnd_up(csum / logn)
        tail_sum = rnd_up(bt * tails)
        sigma3_sum = rnd_up(logn * sigma3)
        log_k_over_n = rnd_up(mp.log(k) / nn)
        log_n_over_n = rnd_up(logn / nn)
        if missing:
            value = None
            verdict = "insufficient-table"
        else:
            value = main_term - (ctheta_sum + tail_sum + sigma3_sum + log_k_over_n + log_n_over_n)
            verdict = "yes" if value > 0 else "no"
        return LowerBoundReport(
            n=n,
            k=k,
            parity=parity,
            C=params.C,
            N=params.N,
            main_term=main_term,
            ctheta_sum=ctheta_sum,
            tail_sum=tail_sum,
            sigma3_sum=sigma3_sum,
            log_k_over_n=log_k_over_n,
            log_n_over_n=log_n_over_n,
            missing_moduli=tuple(sorted(set(missing))),
            covered_moduli=tuple(sorted(set(covered))),
            value=value,
            verdict=verdict,
            table_provenance=table.provenance,
        )


def even_lower_bound(n: int, k: int, params: BoundParams, table: CThetaTable) -> LowerBoundReport:
    """Certified lower bound for Rbar_k(n)/n with n even and k even squarefree.

    Main term 2c prod_{q | k/2}(1 - (q-1)/(q^2-q-1)); the divisor sums run
    over d | k/2.  A positive value certifies Rbar_k(n) > 0 for that n.
    """
    _require_squarefree(k, "k")
    if k % 2 != 0 or not 2 <= k <= EVEN_BOUND_MAX_K:
        raise ValueError(f"k must be even squarefree with 2 <= k <= {EVEN_BOUND_MAX_K}, got {k}")
    if n % 2 != 0 or n < EVEN_BOUND_MIN_N:
        raise ValueError(f"n must be even with n >= {EVEN_BOUND_MIN_N}, got {n}")
    conservative = params.rounding is Rounding.CONSERVATIVE_DIRECTED
    with mp.workdps(_DPS):
        main = 2 * _artin_lower() * _prod_over_k(k // 2)
        if conservative:
            main = _down(main)
    return _lower_bound(n, k, k // 2, main, params, table, parity="even")


def odd_lower_bound(n: int, k: int, params: BoundParams, table: CThetaTable) -> LowerBoundReport:
    """Certified lower bound for Rbar_k(n)/n with k odd squarefree (any parity of n).

    Main term c prod_{q|k}(1 - (q-1)/(q^2-q-1)); divisor sums run over d | k.
    """
    _require_squarefree(k, "k")
    if k % 2 == 0 or not 1 <= k <= ODD_BOUND_MAX_K:
        raise ValueError(f"k must be odd squarefree with 1 <= k <= {ODD_BOUND_MAX_K}, got {k}")
    if n < ODD_BOUND_MIN_N:
        raise ValueError(f"n must satisfy n >= {ODD_BOUND_MIN_N}, got {n}")
    conservative = params.rounding is Rounding.CONSERVATIVE_DIRECTED
    with mp.workdps(_DPS):
        main = _artin_lower() * _prod_over_k(k)
        if conservative:
            main = _down(main)
    return _lower_bound(n, k, k, main, params, table, parity="odd")


def asymptotic_main_term(n: int, k: int, l: int = 1) -> mp.mpf:
    """Limit density of R_k^l(n)/n:
    c prod_{p|n}(1+1/(p^2-p-1)) prod_{q|k_n}(1-(q-1)/(q^2-q-1)) prod_{r|l}((r-1)/(r^2-r-1))
    with k_n = k/(k, n).  Strictly positive on its domain.

    Requires (l, n) = 1 (a representation with l | eta pins p = (n, l), which
    fails squarefreeness infinitely often otherwise) and, when k is even,
    even n (for odd n the only admissible prime is p = 2, so no positive
    density exists).
    """
    _require_squarefree(k, "k")
    _require_squarefree(l, "l")
    if math.gcd(k, l) != 1:
        raise ValueError(f"k = {k} and l = {l} must be coprime")
    if math.gcd(l, n) != 1:
        raise ValueError(f"l = {l} must be coprime to n = {n}")
    if k % 2 == 0 and n % 2 != 0:
        raise ValueError("even modulus k requires even n (no positive density for odd n)")
    kn = k // math.gcd(k, n)
    with mp.workdps(_DPS):
        return _artin_lower() * _prod_over_n(n) * _prod_over_k(kn) * _prod_over_l(l)


# ---------------------------------------------------------------------------
# prime-factor-count bound for the Chen-style corollary

@dataclass(frozen=True)
class ChenBoundReport:
    theta_13: mp.mpf
    e36: mp.mpf
    prime_upper: mp.mpf
    count_upper: mp.mpf
    value: int
    e33: mp.mpf

    def to_json(self) -> dict:
        return {
            "theta_13": mp.nstr(self.theta_13, 17),
            "e36": mp.nstr(self.e36, 17),
            "prime_upper": mp.nstr(self.prime_upper, 17),
            "count_upper": mp.nstr(self.count_upper, 17),
            "value": self.value,
            "e33": mp.nstr(self.e33, 17),
            "constants": dict(CHEBYSHEV_CONSTANTS),
        }


def chen_factor_bound() -> ChenBoundReport:
    """Upper bound for max{m : prod_{i=1..m} p_{i+6} < exp(exp(36))}.

    If the product stays below exp(e^36) then theta(p_{m+6}) - theta(13) < e^36.
    Inverting with theta(x) > 0.84 x (x >= 101) caps p_{m+6}, and
    pi(x) < 1.3 x / log x (x >= 17) caps its index; every step rounds toward
    the safe side, and the result is checked against e^33.
    """
    with mp.workdps(_DPS):
        theta13 = _up(mp.fsum(mp.log(p) for p in (2, 3, 5, 7, 11, 13)))
        e36 = _up(mp.exp(36))
        slope = mp.mpf(CHEBYSHEV_CONSTANTS["theta_lower_slope"])
        x_upper = _up((e36 + theta13) / slope)
        log_lower = _down(mp.log(x_upper))
        pi_factor = mp.mpf(CHEBYSHEV_CONSTANTS["pi_upper_factor"])
        count_upper = _up(pi_factor * x_upper / log_lower)
        value = int(mp.ceil(count_upper)) - 6
        e33 = _down(mp.exp(33))
        if not value < e33:
            raise AssertionError("prime-factor-count bound failed the e^33 check")
        return ChenBoundReport(
            theta_13=theta13,
            e36=e36,
            prime_upper=x_upper,
            count_upper=count_upper,
            value=value,
            e33=mp.exp(33),
        )
