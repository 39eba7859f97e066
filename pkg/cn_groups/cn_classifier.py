"""
CN test and the case analysis of G/F

A finite group is CN when every nontrivial element has a nilpotent
centralizer. For CN groups the quotient by the Fitting subgroup falls
into one of five cases; classify() decides which one and records the
side conditions each case imposes on F.
"""

from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Any, Dict, List, Optional, Tuple

from loguru import logger

from cn_groups import __version__
from cn_groups.logging_config import StructuredLogger, log_performance_metrics
from cn_groups.perm_core import PermGroup, Permutation, closure, conjugacy_class_representatives, same_subgroup
from cn_groups.recognition import (
    decompose_cyclic_odd_times_quaternion,
    find_dihedral_frobenius,
    frobenius_structure,
    is_almost_simple,
    is_cyclic,
    is_generalized_quaternion,
    is_sl23,
)
from cn_groups.structure import (
    centralizer_element,
    fitting,
    fitting_height,
    is_nilpotent,
    is_p_element,
    is_soluble,
    minimal_normal_subgroups,
    p_core,
    prime_divisors,
    quotient,
    soluble_radical,
    sylow,
)


class Case(str, Enum):
    CYCLIC = "Cyclic"
    CYCLIC_ODD_TIMES_QUATERNION = "CyclicOddTimesQuaternion"
    FROBENIUS_QUOTIENT = "FrobeniusQuotient"
    SL23 = "SL23"
    ALMOST_SIMPLE = "AlmostSimple"
    NOT_CN = "NotCN"
    THEOREM_VIOLATION = "TheoremViolation"


@dataclass
class SideCondition:
    name: str
    passed: bool


@dataclass
class CNVerdict:
    """Truthy when G is CN; otherwise carries an element with non-nilpotent centralizer"""
    is_cn: bool
    witness: Optional[Permutation] = None

    def __bool__(self) -> bool:
        return self.is_cn


@dataclass
class ClassificationReport:
    group_name: str
    group_order: int
    is_cn: bool
    cn_witness: Optional[Permutation]
    fitting_order: int
    fitting_primes: List[int]
    quotient_order: int
    case: Case
    side_conditions: List[SideCondition] = field(default_factory=list)
    frobenius_data: Optional[Tuple[int, int]] = None

    def to_dict(self, seed: Optional[int] = None) -> Dict[str, Any]:
        """Report body with a fixed field order and no timestamps"""
        frobenius = None
        if self.frobenius_data is not None:
            frobenius = {"kernel_order": self.frobenius_data[0],
                         "complement_order": self.frobenius_data[1]}
        return {
            "group_name": self.group_name,
            "group_order": self.group_order,
            "is_cn": self.is_cn,
            "cn_witness": self.cn_witness.cycle_string() if self.cn_witness is not None else None,
            "fitting_order": self.fitting_order,
            "fitting_primes": list(self.fitting_primes),
            "quotient_order": self.quotient_order,
            "case": self.case.value,
            "side_conditions": [{"name": s.name, "passed": s.passed} for s in self.side_conditions],
            "frobenius_data": frobenius,
            "version": __version__,
            "seed": seed,
        }


@dataclass
class SweepResult:
    name: str
    status: str  # pass | fail | skipped
    detail: str = ""

    @property
    def failed(self) -> bool:
        return self.status == "fail"

    def to_dict(self) -> Dict[str, str]:
        return {"name": self.name, "status": self.status, "detail": self.detail}


def is_cn(G: PermGroup) -> CNVerdict:
    """Centralizers of nontrivial class representatives must all be nilpotent"""
    for rep in conjugacy_class_representatives(G):
        if rep.is_identity():
            continue
        if not is_nilpotent(centralizer_element(G, rep)):
            logger.debug(f"Centralizer of {rep} is not nilpotent")
            return CNVerdict(False, rep)
    return CNVerdict(True)


def _is_two_group_or_trivial(primes: List[int]) -> bool:
    return primes in ([], [2])


@dataclass
class QuotientShape:
    """Where G/F lands in the ordered case tests, independent of the CN verdict"""
    case: Case
    side_conditions: List[SideCondition] = field(default_factory=list)
    frobenius_data: Optional[Tuple[int, int]] = None


def quotient_shape(Q: PermGroup, fitting_primes: List[int]) -> QuotientShape:
    """Run the case tests 1 to 5 on Q = G/F; the first hit wins"""
    primes = fitting_primes
    if is_cyclic(Q):
        return QuotientShape(Case.CYCLIC)
    if decompose_cyclic_odd_times_quaternion(Q) is not None:
        return QuotientShape(Case.CYCLIC_ODD_TIMES_QUATERNION)
    structure = frobenius_structure(Q)
    if (structure is not None
            and structure.kernel.order() % 2 == 1
            and is_cyclic(structure.kernel)
            and is_cyclic(structure.complement)):
        return QuotientShape(
            Case.FROBENIUS_QUOTIENT,
            [SideCondition("F is a p-group", len(primes) <= 1)],
            (structure.kernel.order(), structure.complement.order()),
        )
    if is_sl23(Q):
        # F is nilpotent by construction
        return QuotientShape(Case.SL23, [
            SideCondition("F nilpotent", True),
            SideCondition("|pi(F)| >= 2", len(primes) >= 2),
            SideCondition("2 in pi(F)", 2 in primes),
        ])
    if is_almost_simple(Q):
        return QuotientShape(Case.ALMOST_SIMPLE, [SideCondition("F is a 2-group", _is_two_group_or_trivial(primes))])
    return QuotientShape(Case.THEOREM_VIOLATION, [SideCondition("G/F matches one of the five cases", False)])


def quotient_case(G: PermGroup) -> Case:
    """The case G/F would take if G were CN"""
    F = fitting(G)
    Q, _ = quotient(G, F)
    return quotient_shape(Q, prime_divisors(F.order())).case


@log_performance_metrics
def classify(G: PermGroup, name: Optional[str] = None) -> ClassificationReport:
    """Decide CN and run the ordered case tests on G/F"""
    verdict = is_cn(G)
    F = fitting(G)
    Q, _ = quotient(G, F)
    primes = prime_divisors(F.order())
    report = ClassificationReport(
        group_name=name or G.name or "G",
        group_order=G.order(),
        is_cn=verdict.is_cn,
        cn_witness=verdict.witness,
        fitting_order=F.order(),
        fitting_primes=primes,
        quotient_order=Q.order(),
        case=Case.NOT_CN,
    )
    if verdict:
        shape = quotient_shape(Q, primes)
        report.case = shape.case
        report.side_conditions.extend(shape.side_conditions)
        report.frobenius_data = shape.frobenius_data
        if any(not s.passed for s in report.side_conditions):
            report.case = Case.THEOREM_VIOLATION
    StructuredLogger.log_classification(report.to_dict())
    return report


def _requires_cn(G: PermGroup, name: str) -> Optional[SweepResult]:
    if not is_cn(G):
        return SweepResult(name, "skipped", "group is not CN")
    return None


def lemma41_sweep(G: PermGroup) -> SweepResult:
    """p-elements outside O_p(G) act fixed-point-freely on it and meet F trivially"""
    name = "lemma41_sweep"
    skipped = _requires_cn(G, name)
    if skipped:
        return skipped
    F = fitting(G)
    primes = prime_divisors(F.order())
    if len(primes) < 2:
        return SweepResult(name, "skipped", "pi(F) has fewer than two primes")

    elements = list(G.elements())
    for p in primes:
        P = p_core(G, p)
        core_elements = [x for x in P.elements() if not x.is_identity()]
        for a in elements:
            if a.is_identity() or not is_p_element(a, p) or P.contains(a):
                continue
            fixed = next((x for x in core_elements if a.commutes_with(x)), None)
            if fixed is not None:
                return SweepResult(name, "fail", f"{a} centralizes {fixed} in O_{p}(G)")
            if any(F.contains(a ** k) for k in range(1, a.order())):
                return SweepResult(name, "fail", f"<{a}> meets F nontrivially")
    return SweepResult(name, "pass")


def odd_normal_implies_soluble(G: PermGroup) -> SweepResult:
    """A nontrivial normal subgroup of odd order forces solubility"""
    name = "odd_normal_implies_soluble"
    skipped = _requires_cn(G, name)
    if skipped:
        return skipped
    odd_fitting = any(p != 2 for p in prime_divisors(fitting(G).order()))
    odd_minimal = any(M.order() % 2 == 1 for M in minimal_normal_subgroups(G))
    if not (odd_fitting or odd_minimal):
        return SweepResult(name, "pass", "no odd-order normal subgroup")
    if not is_soluble(G):
        return SweepResult(name, "fail", "odd-order normal subgroup in a non-soluble group")
    return SweepResult(name, "pass")


def soluble_radical_shadow(G: PermGroup) -> SweepResult:
    """The soluble radical of a non-soluble CN group is O_2(G)"""
    name = "soluble_radical_shadow"
    skipped = _requires_cn(G, name)
    if skipped:
        return skipped
    if is_soluble(G):
        return SweepResult(name, "skipped", "group is soluble")
    radical = soluble_radical(G)
    if not same_subgroup(radical, p_core(G, 2)):
        return SweepResult(name, "fail", f"soluble radical of order {radical.order()} is not O_2(G)")
    return SweepResult(name, "pass")


def fitting_is_p_core_product(G: PermGroup) -> SweepResult:
    """The Sylow p-subgroup of F is O_p(G)"""
    name = "fitting_is_p_core_product"
    F = fitting(G)
    for p in prime_divisors(G.order()):
        if not same_subgroup(sylow(F, p), p_core(G, p)):
            return SweepResult(name, "fail", f"Sylow {p}-subgroup of F differs from O_{p}(G)")
    return SweepResult(name, "pass")


def quotient_sylow_shadow(G: PermGroup) -> SweepResult:
    """Sylow subgroups of G/F are cyclic or generalized quaternion, away from the prime of F"""
    name = "quotient_sylow_shadow"
    skipped = _requires_cn(G, name)
    if skipped:
        return skipped
    F = fitting(G)
    primes = prime_divisors(F.order())
    if not primes:
        return SweepResult(name, "skipped", "Fitting subgroup is trivial")
    Q, _ = quotient(G, F)
    bad = []
    for q in prime_divisors(Q.order()):
        S = sylow(Q, q)
        if not (is_cyclic(S) or is_generalized_quaternion(S)):
            bad.append(q)
    allowed = primes if len(primes) == 1 else []
    offending = [q for q in bad if q not in allowed]
    if offending:
        return SweepResult(name, "fail", f"Sylow subgroups of G/F for primes {offending} are neither cyclic nor quaternion")
    return SweepResult(name, "pass")


def quotient_frobenius_free_shadow(G: PermGroup) -> SweepResult:
    """With two primes in pi(F), no 2-generated subgroup of G/F is Frobenius"""
    name = "quotient_frobenius_free_shadow"
    skipped = _requires_cn(G, name)
    if skipped:
        return skipped
    F = fitting(G)
    if len(prime_divisors(F.order())) < 2:
        return SweepResult(name, "skipped", "pi(F) has fewer than two primes")
    Q, _ = quotient(G, F)
    seen = set()
    elements = list(Q.elements())
    for x, y in product(elements, repeat=2):
        H = closure(Q.degree, [x, y])
        key = frozenset(H.elements())
        if key in seen:
            continue
        seen.add(key)
        if H.order() > 1 and frobenius_structure(H) is not None:
            return SweepResult(name, "fail", f"<{x}, {y}> in G/F is a Frobenius group")
    return SweepResult(name, "pass")


def sl23_shadow(G: PermGroup) -> SweepResult:
    """|pi(F)| >= 2, pi(F) meeting pi(G/F) and G/F non-nilpotent force G/F = SL(2,3)"""
    name = "sl23_shadow"
    skipped = _requires_cn(G, name)
    if skipped:
        return skipped
    F = fitting(G)
    primes = prime_divisors(F.order())
    Q, _ = quotient(G, F)
    if len(primes) < 2 or not set(primes) & set(prime_divisors(Q.order())) or is_nilpotent(Q):
        return SweepResult(name, "skipped", "hypotheses not met")
    if not is_sl23(Q):
        return SweepResult(name, "fail", f"G/F of order {Q.order()} is not SL(2,3)")
    return SweepResult(name, "pass")


def nonsoluble_fitting_two_group(G: PermGroup) -> SweepResult:
    """A non-soluble CN group has a Fitting subgroup of 2-power order"""
    name = "nonsoluble_fitting_two_group"
    skipped = _requires_cn(G, name)
    if skipped:
        return skipped
    if is_soluble(G):
        return SweepResult(name, "skipped", "group is soluble")
    primes = prime_divisors(fitting(G).order())
    if not _is_two_group_or_trivial(primes):
        return SweepResult(name, "fail", f"Fitting subgroup has primes {primes}")
    return SweepResult(name, "pass")


def dihedral_frobenius_sweep(G: PermGroup) -> SweepResult:
    """Every non-soluble group has a dihedral Frobenius subgroup"""
    name = "dihedral_frobenius_sweep"
    if is_soluble(G):
        return SweepResult(name, "skipped", "group is soluble")
    found = find_dihedral_frobenius(G)
    if found is None:
        return SweepResult(name, "fail", "no involution with an odd-order commutator")
    return SweepResult(name, "pass", f"<{found.involution}, {found.rotation}>")


def sylow_hypothesis_prime(G: PermGroup) -> Optional[int]:
    """A prime p such that every Sylow q-subgroup, q != p, is cyclic or generalized quaternion"""
    bad = [q for q in prime_divisors(G.order())
           if not (is_cyclic(sylow(G, q)) or is_generalized_quaternion(sylow(G, q)))]
    if len(bad) > 1:
        return None
    return bad[0] if bad else 2


def fitting_height_shadow(G: PermGroup) -> SweepResult:
    """Soluble groups meeting the Sylow hypothesis have Fitting height at most 4"""
    name = "fitting_height_shadow"
    if not is_soluble(G):
        return SweepResult(name, "skipped", "group is not soluble")
    if sylow_hypothesis_prime(G) is None:
        return SweepResult(name, "skipped", "Sylow hypothesis fails for every prime")
    height = fitting_height(G)
    if height > 4:
        return SweepResult(name, "fail", f"Fitting height {height}")
    return SweepResult(name, "pass", f"Fitting height {height}")


def run_sweeps(G: PermGroup) -> List[SweepResult]:
    """Every CN-theory sweep; check_eleme_shadow lives in action_lab"""
    results = []
    for sweep in (lemma41_sweep, odd_normal_implies_soluble, soluble_radical_shadow,
                  fitting_is_p_core_product, quotient_sylow_shadow,
                  quotient_frobenius_free_shadow, sl23_shadow, nonsoluble_fitting_two_group,
                  dihedral_frobenius_sweep, fitting_height_shadow):
        result = sweep(G)
        StructuredLogger.log_sweep_result(result.name, result.status, detail=result.detail)
        results.append(result)
    return results
