"""
Isomorphism-type tests used by the classifier
"""

from dataclasses import dataclass
from itertools import combinations
from math import gcd, lcm
from random import Random
from typing import List, Optional

from loguru import logger

from cn_groups.errors import EnumerationBoundError, NotAHomomorphismError
from cn_groups.perm_core import GroupHom, PermGroup, Permutation, closure, conjugacy_class_representatives
from cn_groups.structure import (
    centralizer_subgroup,
    is_nilpotent,
    is_normal,
    normal_closure,
    normal_subgroups,
    prime_divisors,
    socle,
    sylow,
)


ISOMORPHISM_ORACLE_LIMIT = 100


@dataclass
class FrobeniusStructure:
    """Kernel and complement of a Frobenius group"""
    kernel: PermGroup
    complement: PermGroup


@dataclass
class CyclicQuaternionDecomposition:
    """G = odd_part x quaternion with odd_part cyclic of odd order"""
    odd_part: PermGroup
    quaternion: PermGroup


@dataclass
class DihedralFrobenius:
    """<involution, rotation> is dihedral of order 2|rotation| with |rotation| odd"""
    involution: Permutation
    rotation: Permutation


def is_abelian(G: PermGroup) -> bool:
    return all(a.commutes_with(b) for a, b in combinations(G.generators, 2))


def exponent(G: PermGroup) -> int:
    result = 1
    for x in G.elements():
        result = lcm(result, x.order())
    return result


def is_cyclic(G: PermGroup) -> bool:
    if not is_abelian(G):
        return False
    target = G.order()
    return any(x.order() == target for x in G.elements())


def involutions(G: PermGroup) -> List[Permutation]:
    return [x for x in G.elements() if x.order() == 2]


def is_generalized_quaternion(G: PermGroup) -> bool:
    n = G.order()
    if n < 8 or n & (n - 1):
        return False
    return len(involutions(G)) == 1 and not is_cyclic(G)


def decompose_cyclic_odd_times_quaternion(G: PermGroup) -> Optional[CyclicQuaternionDecomposition]:
    """Split a nilpotent G as (cyclic odd order) x (generalized quaternion)"""
    if G.order() % 8 or not is_nilpotent(G):
        return None
    quaternion = sylow(G, 2)
    if not is_generalized_quaternion(quaternion):
        return None
    odd_gens: List[Permutation] = []
    for p in prime_divisors(G.order()):
        if p != 2:
            odd_gens.extend(sylow(G, p).generators)
    odd_part = closure(G.degree, odd_gens)
    if not is_cyclic(odd_part):
        return None
    return CyclicQuaternionDecomposition(odd_part, quaternion)


def _acts_fixed_point_freely(kernel_elements: List[Permutation], H: PermGroup) -> bool:
    """C_N(h) = 1 for every nontrivial h in H"""
    nontrivial = [n for n in kernel_elements if not n.is_identity()]
    for h in H.elements():
        if h.is_identity():
            continue
        if any(h.commutes_with(n) for n in nontrivial):
            return False
    return True


def _complement_candidates(G: PermGroup, size: int):
    """Subgroups of the given order generated by one or two elements, then Sylow subgroups"""
    pool = [x for x in G.elements() if not x.is_identity() and size % x.order() == 0]
    for x in pool:
        if x.order() == size:
            yield closure(G.degree, [x])
    tried = set()
    for x, y in combinations(pool, 2):
        if x.order() == size or y.order() == size:
            continue
        H = closure(G.degree, [x, y])
        if H.order() != size:
            continue
        key = frozenset(H.elements())
        if key in tried:
            continue
        tried.add(key)
        yield H
    primes = prime_divisors(size)
    if len(primes) == 1:
        yield sylow(G, primes[0])


def frobenius_structure(G: PermGroup) -> Optional[FrobeniusStructure]:
    """Find a Frobenius kernel and complement, or None"""
    order = G.order()
    for N in normal_subgroups(G):
        size = order // N.order()
        if N.order() == 1 or size == 1 or gcd(N.order(), size) != 1:
            continue
        kernel_elements = list(N.elements())
        for H in _complement_candidates(G, size):
            # Complements of a normal Hall subgroup are conjugate, so one decides
            if _acts_fixed_point_freely(kernel_elements, H):
                logger.debug(f"Frobenius structure: kernel {N.order()}, complement {size}")
                return FrobeniusStructure(N, H)
            break
    return None


def verify_frobenius_structure(G: PermGroup, structure: FrobeniusStructure,
                               rng: Optional[Random] = None, samples: int = 50) -> bool:
    """Check every Frobenius invariant, plus H meets H^g trivially for random g outside H"""
    kernel, complement = structure.kernel, structure.complement
    if complement.order() == 1 or not is_normal(G, kernel):
        return False
    if kernel.order() * complement.order() != G.order():
        return False
    if any(kernel.contains(h) for h in complement.elements() if not h.is_identity()):
        return False
    if not _acts_fixed_point_freely(list(kernel.elements()), complement):
        return False

    rng = rng or Random(0)
    complement_elements = [h for h in complement.elements() if not h.is_identity()]
    checked = 0
    attempts = 0
    while checked < samples and attempts < samples * 20:
        attempts += 1
        g = G.random_element(rng)
        if complement.contains(g):
            continue
        checked += 1
        if any(complement.contains(h.conjugate(g)) for h in complement_elements):
            return False
    return True


def is_simple(G: PermGroup) -> bool:
    if G.order() == 1:
        return False
    for rep in conjugacy_class_representatives(G):
        if rep.is_identity():
            continue
        if normal_closure(G, [rep]).order() != G.order():
            return False
    return True


def is_almost_simple(G: PermGroup) -> bool:
    """Socle nonabelian simple with trivial centralizer"""
    if G.order() == 1:
        return False
    S = socle(G)
    if is_abelian(S) or not is_simple(S):
        return False
    return centralizer_subgroup(G, S).order() == 1


def is_sl23(G: PermGroup) -> bool:
    """Order 24, not nilpotent, normal generalized quaternion Sylow 2-subgroup"""
    if G.order() != 24 or is_nilpotent(G):
        return False
    P = sylow(G, 2)
    return is_normal(G, P) and is_generalized_quaternion(P)


def is_dihedral_frobenius(a: Permutation, c: Permutation) -> bool:
    if a.is_identity() or not (a * a).is_identity():
        return False
    n = c.order()
    if n == 1 or n % 2 == 0:
        return False
    if c.conjugate(a) != c.inverse():
        return False
    return closure(a.degree, [a, c]).order() == 2 * n


def find_dihedral_frobenius(G: PermGroup) -> Optional[DihedralFrobenius]:
    """An involution a and an odd-order commutator c = [x, a]"""
    elements = list(G.elements())
    for a in sorted((x for x in elements if x.order() == 2), key=lambda p: p.images):
        for x in elements:
            c = x.commutator(a)
            n = c.order()
            if n > 1 and n % 2 == 1:
                return DihedralFrobenius(a, c)
    return None


def isomorphism_search(G: PermGroup, H: PermGroup) -> Optional[List[Permutation]]:
    """Images of G's generators defining an isomorphism G -> H, by backtracking"""
    if G.order() > ISOMORPHISM_ORACLE_LIMIT:
        raise EnumerationBoundError("isomorphism search limited", G.order(), ISOMORPHISM_ORACLE_LIMIT)
    if G.order() != H.order():
        return None

    gens = list(G.generators)
    targets = list(H.elements())
    by_order = {}
    for h in targets:
        by_order.setdefault(h.order(), []).append(h)
    candidates = [by_order.get(g.order(), []) for g in gens]

    def consistent(chosen: List[Permutation]) -> bool:
        i = len(chosen) - 1
        for j in range(i):
            if (gens[j] * gens[i]).order() != (chosen[j] * chosen[i]).order():
                return False
        return True

    def extend(chosen: List[Permutation]) -> Optional[List[Permutation]]:
        if len(chosen) == len(gens):
            try:
                hom = GroupHom(G, H, chosen)
            except NotAHomomorphismError:
                return None
            return list(chosen) if hom.image().order() == H.order() else None
        for h in candidates[len(chosen)]:
            chosen.append(h)
            if consistent(chosen):
                found = extend(chosen)
                if found is not None:
                    return found
            chosen.pop()
        return None

    return extend([])
