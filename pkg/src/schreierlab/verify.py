"""The acceptance suite: one check per criterion plus an aggregated summary.

Every criterion returns a :class:`CheckReport`.  ``run_all`` runs them in
order and wraps the results in a :class:`SuiteResult`, whose canonical JSON
(runtime fields removed) is identical for identical configurations.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .averages import IndexStream, generate_upto, mass_bound_check
from .config import Config
from .errors import BudgetExceeded
from .norms import BlockBatch, BlockSequence, Norm, baernstein_norm, check_domination, composite_norm, scaled_weights
from .oracles import baernstein_brute_powers, member_brute
from .ordinal import Ordinal, parse_ordinal
from .report import FAIL, INFO, PASS, CheckReport, canonical_dumps, timed
from .schreier import SchreierFamily, all_subsets, iter_spreads
from .szlenk import (
    TreeCertificate,
    ell_p_equivalence_check,
    szlenk_threshold,
    szlenk_witness,
    threshold_holds,
    verify_branch_lower,
)
from .values import NormValue, RationalVector, compare_values

FAMILY_ALPHAS = ("1", "2", "3", "w", "w+1", "w*2")
CORPUS_SIZE = 120
CORPUS_GROUND = 12
CORPUS_MAX_SUPPORT = 10
CORPUS_ENTRIES = (Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3), Fraction(-1, 3))
BLOCK_SAMPLES = 10_000
BLOCK_GROUND = 15
BLOCK_MAX_LENGTH = 5
BLOCK_RANDOM_COEFFICIENTS = 8
MAX_WITNESSES = 10


def _alpha(text: str) -> Ordinal:
    return parse_ordinal(text)


def build_corpus(seed: int, size: int = CORPUS_SIZE) -> list[RationalVector]:
    """Fixed examples followed by seeded random vectors on {1..12}."""
    corpus = [
        RationalVector.ones([1, 2, 3]),
        RationalVector.ones([2, 3, 4, 5]),
        RationalVector({1: 1, 2: Fraction(1, 2), 3: Fraction(1, 3)}),
        RationalVector.basis(7),
    ]
    rng = random.Random(seed)
    while len(corpus) < size:
        k = rng.randint(1, CORPUS_MAX_SUPPORT)
        support = sorted(rng.sample(range(1, CORPUS_GROUND + 1), k))
        corpus.append(RationalVector({i: rng.choice(CORPUS_ENTRIES) for i in support}))
    return corpus


def sample_block_sequence(rng: random.Random) -> BlockSequence:
    """Successive blocks inside {1..15}: 1-5 blocks, entries in {+-1, +-1/2, +-1/3}."""
    n = rng.randint(1, BLOCK_MAX_LENGTH)
    size = rng.randint(n, BLOCK_GROUND)
    positions = sorted(rng.sample(range(1, BLOCK_GROUND + 1), size))
    cuts = sorted(rng.sample(range(1, size), n - 1))
    bounds = [0] + cuts + [size]
    return BlockSequence(tuple(
        RationalVector({i: rng.choice(CORPUS_ENTRIES) for i in positions[a:b]})
        for a, b in zip(bounds, bounds[1:])
    ))


def _finish(report: CheckReport, ms: list[int]) -> CheckReport:
    report.runtime_ms = ms[0]
    return report


# -- criteria ---------------------------------------------------------------------

def membership_oracle(config: Config) -> CheckReport:
    """Greedy membership agrees with the all-decompositions oracle on every subset of {1..12}."""
    with timed() as ms:
        bad, counts = [], {}
        subsets = list(all_subsets(12))
        for text in FAMILY_ALPHAS:
            fam = SchreierFamily(text, scan_cap=config.budget.limit_scan_cap)
            members = 0
            for E in subsets:
                fast = fam.is_member(E)
                members += fast
                if fast != member_brute(fam.alpha, E):
                    bad.append({"alpha": text, "set": list(E), "greedy": fast})
            counts[text] = members
        report = CheckReport("membership_oracle", PASS if not bad else FAIL,
                             {"alphas": list(FAMILY_ALPHAS), "N": 12}, witnesses=bad[:MAX_WITNESSES])
        report.observe("subsets_per_alpha", len(subsets))
        report.observe("members", counts)
        report.observe("disagreements", len(bad))
    return _finish(report, ms)


def family_structure(config: Config) -> CheckReport:
    """Hereditary and spreading hold exhaustively on {1..12}."""
    with timed() as ms:
        bad, results = [], {}
        for text in FAMILY_ALPHAS:
            audit = SchreierFamily(text, scan_cap=config.budget.limit_scan_cap).audit(12)
            h, s = audit.get("hereditary"), audit.get("spreading")
            results[text] = {"hereditary": h, "spreading": s, "successor_monotone": audit.get("successor_monotone")}
            if h != PASS or s != PASS:
                bad.append({"alpha": text, "audit_witnesses": audit.witnesses[:MAX_WITNESSES]})
            if "nesting_findings" in dict(audit.observed):
                results[text]["nesting_findings"] = audit.get("nesting_findings")
        report = CheckReport("family_structure", PASS if not bad else FAIL,
                             {"alphas": list(FAMILY_ALPHAS), "N": 12}, witnesses=bad)
        report.observe("audits", results)
    return _finish(report, ms)


def averages_mass_bound(config: Config) -> CheckReport:
    """``||E(x_1 + ... + x_N)||_1 <= 2`` for every member ``E`` and every ``N`` within budget."""
    with timed() as ms:
        rows, bad = [], []
        for text in ("1", "2", "w"):
            for i1 in (1, 2):
                stream = IndexStream.geometric(i1, 3, growth3=True)
                prefix, reason = generate_upto(text, stream, 8, budget=config.budget)
                maxima = []
                for n in range(1, len(prefix) + 1):
                    rep = mass_bound_check(prefix, n, budget=config.budget)
                    maxima.append(rep.get("max_mass"))
                    if not rep.passed:
                        bad.append({"alpha": text, "i1": i1, "N_sum": n, "witness": rep.witnesses})
                rows.append({"alpha": text, "i1": i1, "vectors_within_budget": len(prefix),
                             "max_mass_by_N": maxima, "stopped_by": reason or "none"})
        report = CheckReport("averages_mass_bound", PASS if not bad else FAIL,
                             {"alphas": ["1", "2", "w"], "i1": [1, 2], "ratio": 3, "entry_cap": config.budget.entry_cap},
                             witnesses=bad)
        report.observe("configurations", rows)
        report.notes.append("the maximum runs over all members E (members may be shrunk to the support), computed exactly")
    return _finish(report, ms)


def baernstein_correctness(config: Config) -> CheckReport:
    """Block DP = brute force over successive members, and interval blocking = successive sets."""
    with timed() as ms:
        corpus = build_corpus(config.seed)
        bad, checked = [], 0
        for text in ("1", "2"):
            alpha = _alpha(text)
            for x in corpus:
                coords = {i: abs(v) for i, v in x.coords}
                brutes = baernstein_brute_powers(alpha, (1, 2), coords)
                for p in (1, 2):
                    brute = brutes[p]
                    fast = baernstein_norm(alpha, p, x, budget=config.budget)
                    structural = baernstein_norm(alpha, p, x, budget=config.budget, engine="structural", witness=False)
                    comp = composite_norm(Norm.schreier(alpha), Norm.lp(p), x, budget=config.budget)
                    wit = sum((sum(coords[i] for i in B) ** p for B in fast.witness), Fraction(0))
                    checked += 1
                    values = {"dp": fast.exact_power(p), "structural": structural.exact_power(p),
                              "composite": comp.exact_power(p), "witness": wit}
                    if any(v != brute for v in values.values()):
                        bad.append({"alpha": text, "p": p, "x": x, "brute": brute, **values})
        report = CheckReport("baernstein_correctness", PASS if not bad else FAIL,
                             {"alphas": ["1", "2"], "p": [1, 2], "corpus_seed": config.seed, "corpus_size": len(corpus)},
                             witnesses=bad[:MAX_WITNESSES])
        report.observe("comparisons", checked)
        report.observe("mismatches", len(bad))
    return _finish(report, ms)


def composition_idempotence(config: Config) -> CheckReport:
    """Interval blocking of the Baernstein norm under an outer l_2 gives the Baernstein norm back."""
    with timed() as ms:
        corpus = build_corpus(config.seed)
        bad, checked = [], 0
        for text in ("1", "2"):
            inner = Norm.baernstein(text, 2)
            for x in corpus:
                direct = inner.evaluate(x, budget=config.budget, witness=False)
                comp = composite_norm(inner, Norm.lp(2), x, budget=config.budget)
                checked += 1
                if compare_values(direct, comp) != 0:
                    bad.append({"alpha": text, "x": x, "direct": direct, "composite": comp})
        report = CheckReport("composition_idempotence", PASS if not bad else FAIL,
                             {"alphas": ["1", "2"], "p": 2, "corpus_seed": config.seed}, witnesses=bad[:MAX_WITNESSES])
        report.observe("comparisons", checked)
        report.observe("mismatches", len(bad))
    return _finish(report, ms)


def right_dominance(config: Config) -> CheckReport:
    """Moving the support of ``x`` to any spread inside {1..12} never lowers the norm."""
    with timed() as ms:
        corpus = build_corpus(config.seed)
        ground = tuple(range(1, CORPUS_GROUND + 1))
        bad, checked = [], 0
        for text in ("1", "2"):
            batch = BlockBatch(_alpha(text), ground, config.budget)
            for x in corpus:
                _, weights, L = scaled_weights(x)
                spreads = list(iter_spreads(x.support, CORPUS_GROUND))
                W = np.zeros((len(spreads), len(ground)), dtype=np.int64)
                for r, G in enumerate(spreads):
                    W[r, [g - 1 for g in G]] = weights
                for p in (1, 2):
                    totals = batch.totals(W, p)
                    base = totals[0]  # the first spread is the support itself
                    checked += len(spreads)
                    for G, t in zip(spreads, totals):
                        if t < base:
                            bad.append({"alpha": text, "p": p, "x": x, "spread": list(G),
                                        "original_pth": Fraction(base, L**p), "spread_pth": Fraction(t, L**p)})
        report = CheckReport("right_dominance", PASS if not bad else FAIL,
                             {"alphas": ["1", "2"], "p": [1, 2], "ground": CORPUS_GROUND, "corpus_seed": config.seed},
                             witnesses=bad[:MAX_WITNESSES])
        report.observe("spread_comparisons", checked)
        report.observe("violations", len(bad))
    return _finish(report, ms)


def upper_block_estimates(config: Config, samples: int = BLOCK_SAMPLES) -> CheckReport:
    """Normalized block sequences are 4-dominated by the basis at their support minima."""
    with timed() as ms:
        summary, bad = {}, []
        C = Fraction(4)
        for text in ("1", "2"):
            norm = Norm.baernstein(text, 2)
            rng = random.Random(f"{config.seed}:{text}")
            violations = undecided = vectors = 0
            worst, worst_seq, worst_hi = None, None, None
            for s in range(samples):
                z = sample_block_sequence(rng)
                rep = check_domination(z, norm, z.minima, norm, C, normalize=True, seed=rng.getrandbits(32),
                                       samples=BLOCK_RANDOM_COEFFICIENTS, budget=config.budget)
                vectors += rep.get("coefficient_vectors")
                violations += rep.get("violations")
                undecided += rep.get("undecided")
                if rep.status == FAIL and len(bad) < MAX_WITNESSES:
                    bad.append({"alpha": text, "blocks": z, "witnesses": rep.witnesses})
                mr: NormValue = rep.get("max_ratio")
                hi = mr.enclosure(config.budget.tolerance).hi
                if worst_hi is None or hi > worst_hi:
                    worst, worst_seq, worst_hi = mr, z, hi
            summary[text] = {"block_sequences": samples, "coefficient_vectors": vectors, "violations": violations,
                             "undecided": undecided, "max_ratio": worst, "max_ratio_blocks": worst_seq}
        total_undecided = sum(v["undecided"] for v in summary.values())
        status = FAIL if bad else (INFO if total_undecided else PASS)
        report = CheckReport("upper_block_estimates", status,
                             {"alphas": ["1", "2"], "p": 2, "C": C, "block_sequences": samples,
                              "max_length": BLOCK_MAX_LENGTH, "ground": BLOCK_GROUND,
                              "random_coefficients_per_sequence": BLOCK_RANDOM_COEFFICIENTS, "seed": config.seed},
                             witnesses=bad)
        report.observe("results", summary)
        report.notes.append("falsifier: no violation found among the tested coefficients; not a proof")
    return _finish(report, ms)


def ell_p_equivalence(config: Config) -> CheckReport:
    """``||a||_2 <= ||sum a_n x_n|| <= 5 ||a||_2`` for averages on I = 1, 3, 9, ... and k <= 4."""
    with timed() as ms:
        rows, bad = [], []
        for text in ("1", "2"):
            for k in range(1, 5):
                stream = IndexStream.geometric(1, 3)
                try:
                    rep = ell_p_equivalence_check(text, 2, stream, k, seed=config.seed,
                                                  samples=config.budget.coefficient_samples, budget=config.budget)
                except BudgetExceeded as exc:
                    rows.append({"alpha": text, "k": k, "status": "unattainable", "reason": str(exc)})
                    bad.append({"alpha": text, "k": k, "budget_exceeded": str(exc)})
                    continue
                rows.append({"alpha": text, "k": k, "status": rep.status, "min_ratio": rep.get("min_ratio"),
                             "max_ratio": rep.get("max_ratio"), "coefficient_vectors": rep.get("coefficient_vectors")})
                if not rep.passed:
                    bad.append({"alpha": text, "k": k, "witnesses": rep.witnesses})
        report = CheckReport("ell_p_equivalence", PASS if not bad else FAIL,
                             {"alphas": ["1", "2"], "p": 2, "stream": "1, 3, 9, ...", "k": [1, 2, 3, 4],
                              "entry_cap": config.budget.entry_cap, "seed": config.seed},
                             witnesses=bad)
        report.observe("configurations", rows)
        if any(r["status"] == "unattainable" for r in rows):
            report.notes.append(
                "some configurations need more coefficient entries than any desk-scale budget allows: "
                "at level 1 the fourth average on 1, 3, 9, ... has 3^85 entries"
            )
    return _finish(report, ms)


def canonical_tree_identity(config: Config) -> CheckReport:
    """``||sum a_i e_{max E_i}|| = sum a_i`` exactly along every branch of the truncated tree."""
    with timed() as ms:
        results, bad = {}, []
        for text in ("1", "2"):
            cert = TreeCertificate(text, 6)
            rep = verify_branch_lower(cert, Norm.baernstein(text, 2), seed=config.seed,
                                      samples=config.budget.coefficient_samples, budget=config.budget)
            results[text] = dict(rep.observed)
            if not rep.passed:
                bad.append({"alpha": text, "witnesses": rep.witnesses})
        report = CheckReport("canonical_tree_identity", PASS if not bad else FAIL,
                             {"alphas": ["1", "2"], "N": 6, "p": 2, "seed": config.seed}, witnesses=bad)
        report.observe("results", results)
    return _finish(report, ms)


def threshold_and_witness(config: Config) -> CheckReport:
    """Threshold 6401 for rho = 1, p = 2 with exact boundary, and the averaging witness for i1 = 2."""
    with timed() as ms:
        i = szlenk_threshold(1, 2)
        boundary = {"6400": threshold_holds(6400, 1, 2), "6401": threshold_holds(6401, 1, 2)}
        wit = szlenk_witness(1, 2, 2, budget=config.budget)
        ok = i == 6401 and not boundary["6400"] and boundary["6401"] and wit.passed and wit.get("mass") == 2
        report = CheckReport("threshold_and_witness", PASS if ok else FAIL, {"rho": 1, "p": 2, "alpha": "1", "i1": 2},
                             witnesses=[] if ok else [{"threshold": i, "boundary": boundary, "witness": wit.canonical()}])
        report.observe("threshold", i)
        report.observe("holds_at", boundary)
        report.observe("mass", wit.get("mass"))
        report.observe("norm", wit.get("norm"))
        report.observe("norm_within_bound", wit.get("norm_within_bound"))
        report.notes.extend(wit.notes)
    return _finish(report, ms)


CRITERIA: list[tuple[str, Callable[[Config], CheckReport]]] = [
    ("membership_oracle", membership_oracle),
    ("family_structure", family_structure),
    ("averages_mass_bound", averages_mass_bound),
    ("baernstein_correctness", baernstein_correctness),
    ("composition_idempotence", composition_idempotence),
    ("right_dominance", right_dominance),
    ("upper_block_estimates", upper_block_estimates),
    ("ell_p_equivalence", ell_p_equivalence),
    ("canonical_tree_identity", canonical_tree_identity),
    ("threshold_and_witness", threshold_and_witness),
]
DETERMINISM = "determinism"
ALL_NAMES = [name for name, _ in CRITERIA] + [DETERMINISM]


@dataclass
class SuiteResult:
    config: Config
    reports: list[CheckReport]
    summary: CheckReport

    @property
    def passed(self) -> bool:
        return self.summary.passed

    def canonical(self) -> dict:
        return {"summary": self.summary.canonical(), "criteria": [r.canonical() for r in self.reports]}

    def canonical_bytes(self) -> bytes:
        return canonical_dumps(self.canonical()).encode()

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_bytes()).hexdigest()

    def to_json(self) -> dict:
        return {"summary": self.summary.to_json(), "criteria": [r.to_json() for r in self.reports],
                "canonical_sha256": self.digest()}


def _run_criteria(config: Config, names: list[str]) -> list[CheckReport]:
    out = []
    for name, fn in CRITERIA:
        if name not in names:
            continue
        try:
            out.append(fn(config))
        except BudgetExceeded as exc:
            out.append(CheckReport(name, FAIL, {}, witnesses=[{"budget_exceeded": str(exc)}]))
    return out


def determinism(config: Config, first: list[CheckReport], names: list[str]) -> CheckReport:
    """Run the selected criteria a second time and compare canonical bytes."""
    with timed() as ms:
        second = _run_criteria(config, names)
        diffs = [a.check_name for a, b in zip(first, second)
                 if canonical_dumps(a.canonical()) != canonical_dumps(b.canonical())]
        digest_a = hashlib.sha256(canonical_dumps([r.canonical() for r in first]).encode()).hexdigest()
        digest_b = hashlib.sha256(canonical_dumps([r.canonical() for r in second]).encode()).hexdigest()
        report = CheckReport(DETERMINISM, PASS if not diffs else FAIL, {"seed": config.seed, "criteria": names},
                             witnesses=[{"differing": diffs}] if diffs else [])
        report.observe("first_sha256", digest_a)
        report.observe("second_sha256", digest_b)
        report.observe("identical", not diffs)
    return _finish(report, ms)


def run_all(config: Config, names: list[str] | None = None) -> SuiteResult:
    """Run the selected criteria (default: all), then the determinism re-run over them."""
    names = list(ALL_NAMES if names is None else names)
    unknown = [n for n in names if n not in ALL_NAMES]
    if unknown:
        raise ValueError(f"unknown criteria: {', '.join(unknown)}")
    with timed() as ms:
        base = [n for n in names if n != DETERMINISM]
        reports = _run_criteria(config, base)
        if DETERMINISM in names:
            reports.append(determinism(config, reports, base))
        summary = CheckReport(
            "verify.all",
            PASS if all(r.passed for r in reports) else FAIL,
            {"config": config.to_json(), "criteria": names},
            witnesses=[{"failed": [r.check_name for r in reports if not r.passed]}] if not all(r.passed for r in reports) else [],
        )
        for r in reports:
            summary.observe(r.check_name, {"status": r.status, "sha256": r.digest()})
    summary.runtime_ms = ms[0]
    return SuiteResult(config, reports, summary)
