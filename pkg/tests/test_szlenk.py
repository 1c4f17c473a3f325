from fractions import Fraction as Q

import pytest

from schreierlab.averages import IndexStream
from schreierlab.errors import BudgetExceeded
from schreierlab.norms import Norm
from schreierlab.ordinal import parse_ordinal
from schreierlab.schreier import SchreierFamily
from schreierlab.szlenk import (
    TreeCertificate,
    ell_p_equivalence_check,
    enumerate_branches,
    growth_set,
    szlenk_threshold,
    szlenk_witness,
    threshold_holds,
    verify_branch_lower,
)
from schreierlab.values import NormValue, RationalVector


def test_branches_examples():
    assert enumerate_branches(TreeCertificate("1", 3)) == [[(1,)], [(2,), (2, 3)], [(3,)]]
    assert enumerate_branches(TreeCertificate("0", 2)) == [[(1,)], [(2,)]]
    branches = enumerate_branches(TreeCertificate("2", 4))
    nodes = {E for b in branches for E in b}
    assert nodes == {E for E in SchreierFamily(2).enumerate(4) if E}


def test_canonical_vectors_are_normalized():
    cert = TreeCertificate("2", 6)
    assert cert.check_normalized(Norm.baernstein("2", 2)) == []


@pytest.mark.parametrize("alpha,N", [("1", 6), ("2", 5), ("2", 6)])
def test_branch_identity(alpha, N):
    rep = verify_branch_lower(TreeCertificate(alpha, N), Norm.baernstein(alpha, 2), samples=16, seed=2)
    assert rep.status == "pass" and rep.get("equality_violations") == 0


def test_branch_identity_single_example():
    norm = Norm.baernstein("1", 2)
    assert norm.evaluate(RationalVector.ones([2, 3])) == NormValue.exact(2)


def test_certificate_validation():
    with pytest.raises(ValueError):
        TreeCertificate("1", 4, rho=2)
    with pytest.raises(ValueError):
        TreeCertificate("1", 4, rule="custom")


def test_threshold():
    assert szlenk_threshold(1, 2) == 6401
    assert threshold_holds(6401, 1, 2) and not threshold_holds(6400, 1, 2)
    assert szlenk_threshold(1, "3/2") == 512001
    assert szlenk_threshold(1, "inf") == 81
    assert szlenk_threshold(Q(1, 2), 2) > 6401
    with pytest.raises(ValueError):
        szlenk_threshold(2, 2)


def test_witness_level_one():
    rep = szlenk_witness("1", 2, 2)
    assert rep.status == "pass"
    assert rep.get("mass") == 2 and rep.get("norm_within_bound") is True
    assert rep.get("norm").exact_power(2) == 2


def test_witness_level_zero():
    rep = szlenk_witness("0", 2, 3)
    assert rep.status == "pass" and rep.get("norm").exact_power(2) == 3


def test_witness_level_two_exceeds_budget():
    with pytest.raises(BudgetExceeded):
        szlenk_witness("2", 2, 2)


def test_growth_set_is_maximal():
    E = growth_set(parse_ordinal("1"), 2)
    assert E[0] == 2 and all(3 * a <= b for a, b in zip(E, E[1:]))
    assert SchreierFamily(2).is_maximal(E)


def test_ell_p_equivalence_small():
    rep = ell_p_equivalence_check("1", 2, IndexStream.geometric(1, 3), 3, samples=8, seed=0)
    assert rep.status == "pass"
    with pytest.raises(BudgetExceeded):
        ell_p_equivalence_check("1", 2, IndexStream.geometric(1, 3), 4)
