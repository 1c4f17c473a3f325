"""Finite certificates around Szlenk-index lower bounds.

* the canonical tree over ``S_a`` (``x_E = e_{max E}``) and its branches;
* lower estimates ``||sum a_i x_{E_i}|| >= rho * sum a_i`` along branches;
* the threshold ``5 i^(1/p) < (rho/16) i`` and the averaging construction
  that uses it;
* two-sided l_p estimates for repeated averages.

Results are finite checks that are consistent with the index bound; they
do not prove it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from .averages import IndexStream, generate
from .config import DEFAULT_BUDGET, Budget
from .intervals import iroot
from .norms import Norm, coefficient_search_set, lp_norm
from .ordinal import Ordinal, as_ordinal
from .report import FAIL, PASS, CheckReport, timed
from .schreier import FiniteSet, SchreierFamily, maximal_branch_ends
from .values import Exponent, NormValue, RationalVector, as_fraction, compare_values, ratio

MAX_WITNESSES = 10


def canonical_vector(E: FiniteSet) -> RationalVector:
    return RationalVector.basis(E[-1])


@dataclass(frozen=True)
class TreeCertificate:
    alpha: Ordinal
    N: int
    rho: Fraction = Fraction(1)
    rule: str = "canonical"
    assign: Callable[[FiniteSet], RationalVector] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", as_ordinal(self.alpha))
        object.__setattr__(self, "rho", as_fraction(self.rho))
        if not 0 < self.rho <= 1:
            raise ValueError("rho must lie in (0, 1]")
        if self.rule == "canonical":
            object.__setattr__(self, "assign", canonical_vector)
        elif self.assign is None:
            raise ValueError("a custom rule needs an assignment function")

    def vector(self, E: FiniteSet) -> RationalVector:
        return self.assign(E)

    def check_normalized(self, norm: Norm, *, budget: Budget = DEFAULT_BUDGET) -> list[FiniteSet]:
        """Nodes whose vector does not have norm exactly 1."""
        family = SchreierFamily(self.alpha, enum_ceiling=budget.enum_ceiling, scan_cap=budget.limit_scan_cap)
        one = NormValue.exact(Fraction(1))
        return [E for E in family.enumerate(self.N) if E and compare_values(norm.evaluate(self.vector(E), budget=budget, witness=False), one) != 0]


def enumerate_branches(cert: TreeCertificate, *, budget: Budget = DEFAULT_BUDGET) -> list[list[FiniteSet]]:
    """Maximal chains of initial segments inside {1..N}, one per maximal end set."""
    family = SchreierFamily(cert.alpha, enum_ceiling=budget.enum_ceiling, scan_cap=budget.limit_scan_cap)
    return [[E[:r] for r in range(1, len(E) + 1)] for E in maximal_branch_ends(family, cert.N)]


def verify_branch_lower(
    cert: TreeCertificate,
    norm: Norm,
    *,
    samples: int | None = None,
    seed: int = 0,
    budget: Budget = DEFAULT_BUDGET,
) -> CheckReport:
    """Check ``||sum a_i x_{E_i}|| >= rho * sum a_i`` on every branch.

    For the canonical rule the end set ``E`` of the branch is itself a
    member, so the left side equals ``sum a_i`` exactly; that equality is
    asserted as well.
    """
    samples = budget.coefficient_samples if samples is None else samples
    with timed() as ms:
        branches = enumerate_branches(cert, budget=budget)
        lower_bad, eq_bad = [], []
        checked = 0
        for b, branch in enumerate(branches):
            rows = coefficient_search_set(len(branch), seed=seed + b, samples=samples)
            sums = [sum(r, Fraction(0)) for r in rows]
            if cert.rule == "canonical":
                E = branch[-1]
                D = math.lcm(*(a.denominator for r in rows for a in r))
                W = np.array([[int(a * D) for a in r] for r in rows], dtype=np.int64)
                values = norm.evaluate_rows(E, W, D, budget=budget)
            else:
                values = []
                for r in rows:
                    x = RationalVector([])
                    for a, node in zip(r, branch):
                        x = x + cert.vector(node) * a
                    values.append(norm.evaluate(x, budget=budget, witness=False))
            for r, total, value in zip(rows, sums, values):
                checked += 1
                target = NormValue.exact(total)
                if compare_values(value, target, cert.rho) == -1:
                    lower_bad.append({"branch": branch, "coefficients": list(r), "norm": value, "sum": total})
                if cert.rule == "canonical" and compare_values(value, target) != 0:
                    eq_bad.append({"branch": branch, "coefficients": list(r), "norm": value, "sum": total})
        ok = not lower_bad and not eq_bad
        report = CheckReport(
            check_name="szlenk.branch_lower",
            status=PASS if ok else FAIL,
            parameters={"alpha": str(cert.alpha), "N": cert.N, "rho": cert.rho, "rule": cert.rule, "norm": str(norm), "seed": seed, "random_samples": samples},
            witnesses=(lower_bad + eq_bad)[:MAX_WITNESSES],
        )
        report.observe("branches", len(branches))
        report.observe("coefficient_vectors_checked", checked)
        report.observe("lower_violations", len(lower_bad))
        if cert.rule == "canonical":
            report.observe("equality_violations", len(eq_bad))
        report.notes.append("finite check along the truncated tree; consistent with, not a proof of, an index bound")
    report.runtime_ms = ms[0]
    return report


# -- threshold ---------------------------------------------------------------

def threshold_holds(i: int, rho: Any, p: Exponent | str | int | Fraction) -> bool:
    """Exact test of ``5 i^(1/p) < (rho/16) i``."""
    rho, p = as_fraction(rho), Exponent.parse(p)
    if p.is_inf:
        return 5 < rho * i / 16
    # raise both sides to the power num(p): 5^a i^b < (rho i / 16)^a with p = a/b
    a, b = p.value.numerator, p.value.denominator
    return 5**a * Fraction(i) ** b < (rho * i / 16) ** a


def szlenk_threshold(rho: Any, p: Exponent | str | int | Fraction) -> int:
    """Least integer ``i`` with ``5 i^(1/p) < (rho/16) i``."""
    rho, p = as_fraction(rho), Exponent.parse(p)
    if not 0 < rho <= 1:
        raise ValueError("rho must lie in (0, 1]")
    if p.is_inf:
        i = math.floor(80 / rho) + 1
    else:
        if p.value <= 1:
            raise ValueError("p must exceed 1: for p = 1 no integer satisfies the threshold")
        # i^(a-b) > (80/rho)^a with p = a/b
        a, b = p.value.numerator, p.value.denominator
        t = (80 / rho) ** a
        i = iroot(t.numerator // t.denominator, a - b) + 1
    assert threshold_holds(i, rho, p) and not threshold_holds(i - 1, rho, p)
    return i


def threshold_report(rho: Any, p: Any) -> CheckReport:
    with timed() as ms:
        i = szlenk_threshold(rho, p)
        report = CheckReport(
            check_name="szlenk.threshold",
            status=PASS,
            parameters={"rho": as_fraction(rho), "p": Exponent.parse(p)},
        )
        report.observe("threshold", i)
        report.observe("holds_at_threshold", threshold_holds(i, rho, p))
        report.observe("holds_below_threshold", threshold_holds(i - 1, rho, p))
    report.runtime_ms = ms[0]
    return report


# -- averaging witness ------------------------------------------------------------

def growth_set(alpha: Ordinal, i1: int, *, budget: Budget = DEFAULT_BUDGET) -> FiniteSet:
    """Maximal member of ``S_{alpha+1}`` with least element ``i1`` and 3-fold growth.

    Greedy extension by ``3 * last`` runs one membership test per element, so
    the size is first bounded by generating the matching level-``alpha+1``
    average on the stream ``i1, 3 i1, 9 i1, ...`` (whose support is the same
    set) under the entry budget.
    """
    stream = IndexStream.geometric(i1, 3)
    size = len(generate(alpha.successor(), stream, 1, budget=budget, check=False).vectors[0])
    family = SchreierFamily(alpha.successor(), scan_cap=budget.limit_scan_cap)
    E = family.maximal_extension((i1,), i1 + 1, growth=3, max_size=size + 1)
    if len(E) != size:
        raise AssertionError("greedy growth set disagrees with the averaging support")
    return E


def szlenk_witness(
    alpha: Ordinal | str | int,
    p: Exponent | str | int | Fraction,
    i1: int,
    *,
    budget: Budget = DEFAULT_BUDGET,
) -> CheckReport:
    """Averaging construction on ``I = E u {3^k max E}``: mass of ``x_1..x_{i1}`` and its norm bound.

    Checks that the averages ``x_1, ..., x_{i1}`` of level ``alpha`` carry
    total l1 mass exactly ``i1`` and that
    ``||x_1 + ... + x_{i1}||_{X_alpha^p} <= 5 i1^(1/p)``.
    """
    alpha = as_ordinal(alpha)
    p = Exponent.parse(p)
    if i1 < 1:
        raise ValueError("i1 must be >= 1")
    with timed() as ms:
        E = growth_set(alpha, i1, budget=budget)
        stream = IndexStream(E, "geometric", 3, growth3=True)
        prefix = generate(alpha, stream, i1, budget=budget)
        mass = sum((x.l1() for x in prefix.vectors), Fraction(0))
        y = prefix.total()
        norm = Norm.baernstein(alpha, p).evaluate(y, budget=budget)
        unit = lp_norm(p, RationalVector.ones(range(1, i1 + 1)), tolerance=budget.tolerance)  # i1^(1/p)
        cmp = compare_values(norm, unit, Fraction(5))
        ok_mass = mass == i1
        ok_norm = cmp is not None and cmp <= 0
        ok = ok_mass and ok_norm
        report = CheckReport(
            check_name="szlenk.witness",
            status=PASS if ok else FAIL,
            parameters={"alpha": str(alpha), "p": p, "i1": i1},
            witnesses=[] if ok else [{"mass": mass, "norm": norm.with_witness(None)}],
        )
        report.observe("growth_set_size", len(E))
        report.observe("growth_set", list(E))
        report.observe("mass", mass)
        report.observe("mass_equals_i1", ok_mass)
        report.observe("norm", norm.with_witness(None))
        report.observe("i1_root_p", unit)
        report.observe("norm_within_bound", ok_norm)
        report.notes.append(
            "the lower estimate along an arbitrary weakly null tree has no finite certificate and is not checked here"
        )
    report.runtime_ms = ms[0]
    return report


# -- two-sided l_p estimate for averages -------------------------------------------

def ell_p_equivalence_check(
    alpha: Ordinal | str | int,
    p: Exponent | str | int | Fraction,
    stream: IndexStream,
    k: int,
    *,
    samples: int | None = None,
    seed: int = 0,
    constant: Fraction = Fraction(5),
    budget: Budget = DEFAULT_BUDGET,
) -> CheckReport:
    """``||a||_p <= ||sum_{n<=k} a_n x_n||_{X_alpha^p} <= C ||a||_p`` for tested ``a >= 0``.

    Raises :class:`BudgetExceeded` when ``x_1..x_k`` cannot be generated.
    """
    alpha = as_ordinal(alpha)
    p = Exponent.parse(p)
    samples = budget.coefficient_samples if samples is None else samples
    with timed() as ms:
        prefix = generate(alpha, stream, k, budget=budget)
        norm = Norm.baernstein(alpha, p)
        rows = coefficient_search_set(k, seed=seed, samples=samples)
        bad = []
        worst_hi = worst_lo = None
        for r in rows:
            x = RationalVector([])
            for a, v in zip(r, prefix.vectors):
                if a:
                    x = x + v * a
            value = norm.evaluate(x, budget=budget, witness=False)
            ap = lp_norm(p, RationalVector((n, a) for n, a in enumerate(r, start=1)), tolerance=budget.tolerance)
            below = compare_values(value, ap)
            above = compare_values(value, ap, constant)
            if below is None or above is None or below < 0 or above > 0:
                bad.append({"coefficients": list(r), "norm": value, "lp": ap})
            rt = ratio(value, ap, budget.tolerance)
            if worst_hi is None or compare_values(rt, worst_hi) == 1:
                worst_hi = rt
            if worst_lo is None or compare_values(rt, worst_lo) == -1:
                worst_lo = rt
        report = CheckReport(
            check_name="szlenk.ell_p_equivalence",
            status=PASS if not bad else FAIL,
            parameters={"alpha": str(alpha), "p": p, "stream": stream.to_json(), "k": k, "constant": constant, "seed": seed, "random_samples": samples},
            witnesses=bad[:MAX_WITNESSES],
        )
        report.observe("coefficient_vectors", len(rows))
        report.observe("support_sizes", [len(v) for v in prefix.vectors])
        report.observe("min_ratio", worst_lo)
        report.observe("max_ratio", worst_hi)
        report.observe("violations", len(bad))
    report.runtime_ms = ms[0]
    return report
