"""Acceptance criteria, one test each.

Every test prints a single PASS/FAIL line; the lines are also collected and
repeated in the pytest terminal summary. Run directly with
``python tests/test_acceptance.py`` for just the lines.
"""
import sys

import pytest

from dgahh import verify

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE_LINES = []

CRITERIA = [
    ("1", "HH(Y2; F_2) degrees 0..6 = 1,0,1,0,0,0,1", verify.check_hh_y2),
    ("2", "HH(formal polynomial model; F_2) degrees 0..7 = 1,0,1,1,1,1,1,1", verify.check_hh_formal),
    ("3", "homology ring of F_2 ⊗ Y2 is F_2[xi]/(xi^4)", verify.check_mod2_ring),
    ("4", "endomorphism DGA valid, homology F_p in degrees -1 and 0 for p = 2, 3, 5", verify.check_endomorphism),
    ("5", "bar complex equals closed form for p = 2, 3, 5 through degree 12", verify.check_oracle_equivalence),
    ("6", "turned Y and X_m pages give F_p[mu]/(mu^p) at p = 3, 5", verify.check_spectral_sequences),
    ("7", "p = 2 page without differentials equals HH(Y2) in degrees 0..6", verify.check_p2_abutment),
    ("8", "property suites: axioms, internal degree, Künneth, normalization, truncation",
     verify.check_properties),
]


def _line(num, title, result):
    return f"{'PASS' if result.passed else 'FAIL'}  criterion {num}: {title}  ({result.seconds:.2f}s)"


@pytest.mark.parametrize("num,title,check", CRITERIA, ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_criterion(num, title, check):
    result = check()
    line = _line(num, title, result)
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert result.passed, f"expected {result.expected}, got {result.actual}"


def main():
    ok = True
    for num, title, check in CRITERIA:
        result = check()
        ok &= result.passed
        print(_line(num, title, result))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
