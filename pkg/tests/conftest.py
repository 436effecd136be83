import math
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make `oracles` importable

from primesqf import analytic, arith


def needed_moduli(roots, N=10**5) -> list[int]:
    """Every c_theta modulus d a^2 / e the bound sums touch for the given
    divisor roots (k for the odd bound, k/2 for the even one)."""
    mods = set()
    for root in roots:
        for d in arith.squarefree_divisors(root):
            for e in arith.squarefree_divisors(d):
                a = e
                while Fraction(a * a * d) <= Fraction(N) * e:
                    if math.gcd(a, d) == e and arith.mobius(a) != 0:
                        mods.add(d * a * a // e)
                    a += e
    mods.discard(1)
    return sorted(mods)


def write_synthetic_table(path: Path, roots, N=10**5, x0=8_000_000_000, c="2.5e-3") -> Path:
    """Bennett-style placeholder table covering every modulus the given
    roots need.  Synthetic test data: the constants are plausible in size
    but carry no certification value."""
    rows = ["# synthetic test table"]
    rows += [f"{m}, {x0}, {c}" for m in needed_moduli(roots, N)]
    path.write_text("\n".join(rows) + "\n")
    return path


@pytest.fixture(scope="session")
def synthetic_table_k1(tmp_path_factory):
    """Table sufficient for k = 1 / k = 2 bounds at N = 1e5."""
    path = tmp_path_factory.mktemp("ctheta") / "synthetic_k1.txt"
    return analytic.load_ctheta(write_synthetic_table(path, [1]))


@pytest.fixture(scope="session")
def synthetic_table_wide(tmp_path_factory):
    """Table sufficient for the odd bound at k in {1, 3, 33, 105} and the
    even bound at k in {2, 6, 66, 210}."""
    path = tmp_path_factory.mktemp("ctheta") / "synthetic_wide.txt"
    return analytic.load_ctheta(write_synthetic_table(path, [1, 3, 33, 105]))
