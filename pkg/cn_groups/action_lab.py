"""
Coprime-action laboratory

An ActionInstance houses a group G (target) and a group A of automorphisms
of it (actors) inside one permutation group (ambient) where A acts by
conjugation. The checks below test classical statements about such
actions on concrete instances and report pass, fail or inapplicable.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from random import Random
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from sympy import Matrix, isprime

from cn_groups.errors import InputError
from cn_groups.constructors import (
    MatrixAction,
    SemidirectProduct,
    build_semidirect,
    cyclic_group,
    direct_product,
    fpf_search,
    heisenberg_fpf_instance,
    sl23,
    symmetric_group,
)
from cn_groups.perm_core import PermGroup, Permutation, closure, intersection, same_subgroup
from cn_groups.recognition import frobenius_structure, is_abelian, is_cyclic, is_generalized_quaternion
from cn_groups.structure import (
    is_nilpotent,
    is_normal,
    normal_closure,
    normal_subgroups,
    prime_divisors,
    quotient,
    sylow,
)


PASS = "pass"
FAIL = "fail"
INAPPLICABLE = "inapplicable"


@dataclass
class ActionInstance:
    """target normal in ambient, actors a complement to it, ambient = target . actors"""
    ambient: PermGroup
    target: PermGroup
    actors: PermGroup
    name: str = ""

    @classmethod
    def from_semidirect(cls, sd: SemidirectProduct, name: str = "") -> "ActionInstance":
        inst = cls(sd.group, sd.translations, sd.complement, name or sd.group.name or "")
        inst.validate()
        return inst

    def validate(self) -> "ActionInstance":
        if not is_normal(self.ambient, self.target):
            raise InputError(f"{self.name}: target is not normal in the ambient group")
        if intersection(self.target, self.actors).order() != 1:
            raise InputError(f"{self.name}: actors meet the target nontrivially")
        if self.target.order() * self.actors.order() != self.ambient.order():
            raise InputError(f"{self.name}: |target| * |actors| differs from |ambient|")
        return self

    @property
    def coprime(self) -> bool:
        return gcd(self.target.order(), self.actors.order()) == 1


@dataclass
class CheckResult:
    name: str
    status: str
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self):
        return {"name": self.name, "status": self.status, "detail": self.detail}


def _verdict(name: str, ok: bool, failure: str = "") -> CheckResult:
    return CheckResult(name, PASS if ok else FAIL, "" if ok else failure)


def _centralizer(target: PermGroup, actors: Iterable[Permutation]) -> PermGroup:
    actors = list(actors)
    return closure(target.degree, [g for g in target.elements() if all(g.commutes_with(a) for a in actors)])


def _span(target: PermGroup, actors: PermGroup) -> PermGroup:
    gens = [g.inverse() * g.conjugate(a) for g in target.elements() for a in actors.generators]
    return normal_closure(target, gens)


def _nontrivial(G: PermGroup) -> List[Permutation]:
    return sorted((x for x in G.elements() if not x.is_identity()), key=lambda x: x.images)


def centralizer_in_target(inst: ActionInstance, actors: Optional[Sequence[Permutation]] = None) -> PermGroup:
    """C_G(A), or the centralizer of the given actor elements"""
    return _centralizer(inst.target, inst.actors.generators if actors is None else actors)


def commutator_span(inst: ActionInstance) -> PermGroup:
    """[G, A]: generated by g^-1 g^a over all g in G and actor generators a"""
    return _span(inst.target, inst.actors)


def invariant_normal_subgroups(inst: ActionInstance) -> List[PermGroup]:
    return [N for N in normal_subgroups(inst.target)
            if all(N.contains(n.conjugate(a)) for n in N.generators for a in inst.actors.generators)]


def _automorphism_order(target: PermGroup, a: Permutation) -> int:
    """Order of conjugation by a as an automorphism of target"""
    power = a
    for k in range(1, a.order() + 1):
        if all(g.conjugate(power) == g for g in target.generators):
            return k
        power = power * a
    return a.order()


def _acts_trivially(inst: ActionInstance) -> bool:
    return all(g.conjugate(a) == g for g in inst.target.generators for a in inst.actors.generators)


def check_coprime_lemma(inst: ActionInstance) -> List[CheckResult]:
    """The four coprime-action identities, each as a literal subgroup equality"""
    names = ["coprime_lemma_i", "coprime_lemma_ii", "coprime_lemma_iii", "coprime_lemma_iv"]
    if not inst.coprime:
        return [CheckResult(n, INAPPLICABLE, "orders of target and actors are not coprime") for n in names]

    G, A = inst.target, inst.actors
    span = _span(G, A)
    fixed = _centralizer(G, A.generators)
    results = [
        _verdict(names[0], same_subgroup(G, closure(G.degree, list(span.generators) + list(fixed.generators))),
                 "G differs from [G,A] C_G(A)"),
        _verdict(names[1], same_subgroup(_span(span, A), span), "[G,A,A] differs from [G,A]"),
    ]

    failure = ""
    for N in invariant_normal_subgroups(inst):
        Q, projection = quotient(inst.ambient, N)
        image = closure(Q.degree, [projection(g) for g in G.generators])
        actor_images = [projection(a) for a in A.generators]
        lhs = _centralizer(image, actor_images)
        rhs = closure(Q.degree, [projection(c) for c in fixed.generators])
        if not same_subgroup(lhs, rhs):
            failure = f"C_(G/N)(A) differs from C_G(A)N/N for |N| = {N.order()}"
            break
    results.append(_verdict(names[2], not failure, failure))

    if not is_nilpotent(G) or not is_abelian(A) or is_cyclic(A):
        results.append(CheckResult(names[3], INAPPLICABLE, "needs nilpotent target and noncyclic abelian actors"))
    else:
        products = {G.identity}
        for a in _nontrivial(A):
            centralizer = list(_centralizer(G, [a]).elements())
            products = {s * c for s in products for c in centralizer}
        results.append(_verdict(names[3], len(products) == G.order(),
                                f"product of centralizers covers {len(products)} of {G.order()} elements"))
    return results


def check_cyclic_automorphism_lemma(inst: ActionInstance) -> CheckResult:
    """Coprime cyclic actions on cyclic p-groups and generalized quaternion groups"""
    name = "cyclic_automorphism_lemma"
    G, A = inst.target, inst.actors
    if not inst.coprime or not is_cyclic(A):
        return CheckResult(name, INAPPLICABLE, "needs coprime cyclic actors")
    alpha = max(A.elements(), key=lambda x: x.order())
    trivial = _acts_trivially(inst)
    primes = prime_divisors(G.order())

    if is_cyclic(G) and primes == [2]:
        return _verdict(name, trivial, "nontrivial coprime action on a cyclic 2-group")
    if is_cyclic(G) and len(primes) == 1:
        ok = trivial or _centralizer(G, [alpha]).order() == 1
        return _verdict(name, ok, "nontrivial action with nontrivial fixed points on a cyclic p-group")
    if is_generalized_quaternion(G):
        ok = trivial or (_automorphism_order(G, alpha) == 3 and G.order() == 8)
        return _verdict(name, ok, "nontrivial coprime action on a quaternion group other than order 3 on Q8")
    return CheckResult(name, INAPPLICABLE, "target is neither a cyclic p-group nor generalized quaternion")


def check_rank_expo(inst: ActionInstance) -> CheckResult:
    """For A noncyclic of order p^2 on abelian G, every p-th power lies in the join of the C_G(a)"""
    name = "rank_expo"
    G, A = inst.target, inst.actors
    primes = prime_divisors(A.order())
    if len(primes) != 1 or A.order() != primes[0] ** 2 or is_cyclic(A) or not is_abelian(G):
        return CheckResult(name, INAPPLICABLE, "needs abelian target and noncyclic actors of order p^2")
    p = primes[0]
    gens: List[Permutation] = []
    for a in _nontrivial(A):
        gens.extend(_centralizer(G, [a]).generators)
    join = closure(G.degree, gens)
    missing = next((g for g in G.elements() if not join.contains(g ** p)), None)
    return _verdict(name, missing is None, f"{missing}^{p} lies outside the join of centralizers")


def check_frobenius_generation(inst: ActionInstance) -> CheckResult:
    """A Frobenius group FH acting with C_G(F) = 1 coprimely on F: G = <C_G(H)^f : f in F>"""
    name = "frobenius_generation"
    G, A = inst.target, inst.actors
    structure = frobenius_structure(A) if A.order() > 1 else None
    if structure is None:
        return CheckResult(name, INAPPLICABLE, "actors are not a Frobenius group")
    F, H = structure.kernel, structure.complement
    if gcd(G.order(), F.order()) != 1 or _centralizer(G, F.generators).order() != 1:
        return CheckResult(name, INAPPLICABLE, "needs C_G(F) = 1 and gcd(|G|, |F|) = 1")
    fixed = _centralizer(G, H.generators)
    generated = closure(G.degree, [c.conjugate(f) for c in fixed.generators for f in F.elements()])
    return _verdict(name, same_subgroup(generated, G),
                    f"conjugates of C_G(H) generate a subgroup of order {generated.order()}")


def _prime_order_actor(inst: ActionInstance) -> Tuple[Permutation, int]:
    p = inst.actors.order()
    if not isprime(p):
        raise InputError(f"actors must have prime order, got {p}")
    alpha = next(x for x in inst.actors.elements() if not x.is_identity())
    return alpha, p


def is_splitting(inst: ActionInstance, criterion: str = "product") -> bool:
    """x . x^a . ... . x^(a^(p-1)) = 1 for all x in G, or equivalently every x.a has order p"""
    a, p = _prime_order_actor(inst)
    if criterion == "order":
        return all((x * a).order() == p for x in inst.target.elements())
    if criterion != "product":
        raise InputError(f"unknown splitting criterion {criterion!r}")
    conjugators = [a ** k for k in range(p)]
    for x in inst.target.elements():
        total = inst.target.identity
        for c in conjugators:
            total = total * (c * x * c.inverse())
        if not total.is_identity():
            return False
    return True


def check_fpf_nilpotent(inst: ActionInstance) -> CheckResult:
    """A fixed-point-free automorphism of prime order forces nilpotency"""
    name = "fpf_nilpotent"
    if not isprime(inst.actors.order()):
        return CheckResult(name, INAPPLICABLE, "actors must have prime order")
    p = inst.actors.order()
    if inst.target.order() % p == 0 or centralizer_in_target(inst).order() != 1:
        return CheckResult(name, INAPPLICABLE, "action is not coprime and fixed-point-free")
    return _verdict(name, is_nilpotent(inst.target), "target admits a fixed-point-free automorphism but is not nilpotent")


def check_splitting_agreement(inst: ActionInstance) -> CheckResult:
    name = "splitting_agreement"
    if not isprime(inst.actors.order()):
        return CheckResult(name, INAPPLICABLE, "actors must have prime order")
    by_product = is_splitting(inst, "product")
    by_order = is_splitting(inst, "order")
    return _verdict(name, by_product == by_order,
                    f"product criterion says {by_product}, order criterion says {by_order}")


def _elementary_abelian_pairs(G: PermGroup, p: int) -> List[PermGroup]:
    """Noncyclic subgroups of order p^2, from commuting pairs of elements of order p"""
    order_p = [x for x in G.elements() if x.order() == p]
    found: List[PermGroup] = []
    for i, x in enumerate(order_p):
        span_x = closure(G.degree, [x])
        for y in order_p[i + 1:]:
            if not x.commutes_with(y) or span_x.contains(y):
                continue
            # x, y inside a found B generate that B
            if any(B.contains(x) and B.contains(y) for B in found):
                continue
            found.append(closure(G.degree, [x, y]))
    return found


def check_eleme_shadow(G: PermGroup) -> CheckResult:
    """In a CN group a noncyclic B of order p^2 centralizes every B-invariant p'-subgroup

    A violating subgroup contains some y with <y^b : b in B> a p'-group
    not centralized by B, so scanning single elements is exhaustive.
    """
    from cn_groups.cn_classifier import is_cn

    name = "eleme_shadow"
    if not is_cn(G):
        return CheckResult(name, INAPPLICABLE, "group is not CN")
    elements = list(G.elements())
    for p in prime_divisors(G.order()):
        if G.order() % (p * p):
            continue
        for B in _elementary_abelian_pairs(G, p):
            b_elements = list(B.elements())
            for y in elements:
                if y.is_identity() or y.order() % p == 0:
                    continue
                if all(y.commutes_with(b) for b in B.generators):
                    continue
                if any(not _is_p_prime_element(y.inverse() * y.conjugate(b), p) for b in B.generators):
                    continue
                Q = closure(G.degree, [y.conjugate(b) for b in b_elements])
                if Q.order() % p:
                    return CheckResult(name, FAIL, f"B-invariant {p}'-subgroup of order {Q.order()} not centralized")
    return CheckResult(name, PASS)


def _is_p_prime_element(x: Permutation, p: int) -> bool:
    return x.order() % p != 0


def run_lemma_checks(inst: ActionInstance) -> List[CheckResult]:
    results = check_coprime_lemma(inst)
    results.extend([
        check_cyclic_automorphism_lemma(inst),
        check_rank_expo(inst),
        check_frobenius_generation(inst),
        check_fpf_nilpotent(inst),
        check_splitting_agreement(inst),
    ])
    return results


# ---------------------------------------------------------------------------
# Seeded instance generator
# ---------------------------------------------------------------------------

SMALL_PRIMES = (5, 7, 11, 13)


def _element_of_order(n: int, q: int) -> int:
    return next(x for x in range(1, q) if pow(x, n, q) == 1 and all(pow(x, k, q) != 1 for k in range(1, n)))


def _change_basis(action: MatrixAction, rng: Random) -> MatrixAction:
    """Conjugate every matrix by a random invertible P"""
    q, d = action.modulus, action.dim
    while True:
        P = Matrix(d, d, [rng.randrange(q) for _ in range(d * d)])
        if gcd(int(P.det()) % q, q) == 1:
            break
    P_inv = P.inv_mod(q)
    P_np = np.array([[int(x) for x in row] for row in P.tolist()], dtype=np.int64)
    P_inv_np = np.array([[int(x) for x in row] for row in P_inv.tolist()], dtype=np.int64)
    return MatrixAction(d, q, tuple(P_inv_np @ M @ P_np % q for M in action.matrices))


def _cyclic_recipe(rng: Random) -> Tuple[MatrixAction, PermGroup, str]:
    q = rng.choice(SMALL_PRIMES)
    divisors = [n for n in range(2, q) if (q - 1) % n == 0]
    n = rng.choice(divisors)
    r = _element_of_order(n, q)
    action = MatrixAction(1, q, (np.array([[r]], dtype=np.int64),))
    if rng.random() < 0.5:
        s = pow(r, rng.choice([k for k in range(1, n) if gcd(k, n) == 1]), q)
        action = action.block_sum(MatrixAction(1, q, (np.array([[s]], dtype=np.int64),)))
    return action, cyclic_group(n), f"C{n} on Z/{q}^{action.dim}"


def _inversion_recipe(rng: Random) -> Tuple[MatrixAction, PermGroup, str]:
    q = rng.choice((3,) + SMALL_PRIMES)
    d = rng.choice((1, 2))
    return MatrixAction(d, q, (-np.eye(d, dtype=np.int64),)), cyclic_group(2), f"inversion on Z/{q}^{d}"


def _klein_recipe(rng: Random) -> Tuple[MatrixAction, PermGroup, str]:
    q = rng.choice((3, 5, 7))
    K = direct_product(cyclic_group(2), cyclic_group(2), name="V4")
    matrices = (np.diag([-1, 1]).astype(np.int64), np.diag([1, -1]).astype(np.int64))
    return MatrixAction(2, q, matrices), K, f"V4 on Z/{q}^2"


def _s3_recipe(rng: Random) -> Tuple[MatrixAction, PermGroup, str]:
    q = rng.choice(SMALL_PRIMES)
    swap = np.array([[0, 1], [1, 0]], dtype=np.int64)
    rotate = np.array([[0, q - 1], [1, q - 1]], dtype=np.int64)
    return MatrixAction(2, q, (swap, rotate)), symmetric_group(3), f"S3 on Z/{q}^2"


@lru_cache(maxsize=None)
def _sl23_action(q: int) -> MatrixAction:
    action = fpf_search(sl23(), 2, q)
    if action is None:
        raise InputError(f"SL(2,3) has no fixed-point-free action over Z/{q}")
    return action


def _sl23_recipe(rng: Random) -> Tuple[MatrixAction, PermGroup, str]:
    q = rng.choice((5, 7))
    return _sl23_action(q), sl23(), f"SL(2,3) on Z/{q}^2"


RECIPES = (_cyclic_recipe, _inversion_recipe, _klein_recipe, _s3_recipe, _sl23_recipe)


def _internal_instances() -> List[ActionInstance]:
    """Instances that are not module extensions"""
    G = sl23()
    three = next(x for x in G.elements() if x.order() == 3)
    quaternion_on_three = ActionInstance(G, sylow(G, 2), closure(G.degree, [three]), "C3 on Q8 in SL(2,3)")

    C8xC3 = direct_product(cyclic_group(8), cyclic_group(3))
    c8, c3 = C8xC3.generators
    trivial_on_c8 = ActionInstance(C8xC3, closure(C8xC3.degree, [c8]), closure(C8xC3.degree, [c3]), "C3 on C8")

    ambient, target, actors = heisenberg_fpf_instance(7)
    heisenberg = ActionInstance(ambient, target, actors, "C3 on Heis(7)")
    return [quaternion_on_three.validate(), trivial_on_c8.validate(), heisenberg.validate()]


def random_instances(seed: int, count: int) -> List[ActionInstance]:
    """count coprime instances drawn deterministically from seed"""
    rng = Random(seed)
    fixed = _internal_instances()
    instances: List[ActionInstance] = []
    while len(instances) < count:
        slot = rng.randrange(len(RECIPES) + 1)
        if slot == len(RECIPES):
            instances.append(fixed[rng.randrange(len(fixed))])
            continue
        action, K, label = RECIPES[slot](rng)
        if rng.random() < 0.5:
            action = _change_basis(action, rng)
        sd = build_semidirect(action, K, name=label)
        instances.append(ActionInstance.from_semidirect(sd, f"{label} #{len(instances)}"))
    logger.debug(f"generated {count} action instances from seed {seed}")
    return instances
