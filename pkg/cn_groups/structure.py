"""
Subgroup computations by filtered enumeration

Centralizers, normalizers, Sylow subgroups, p-cores, the Fitting subgroup
and its series, derived and lower central series, minimal normal
subgroups and the normal-subgroup scan. Everything here enumerates
elements and is therefore guarded by the configured bounds.
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from loguru import logger
from sympy import multiplicity, primefactors

from cn_groups.bounds import get_bounds
from cn_groups.errors import NotInGroupError, NotSolubleError, SubgroupScanBoundError
from cn_groups.perm_core import (
    GroupHom,
    PermGroup,
    Permutation,
    StabilizerChain,
    closure,
    conjugacy_class_representatives,
    coset_action,
    is_subgroup,
    same_subgroup,
    trivial_group,
)


@dataclass
class NormalSeriesEntry:
    """One term of a normal series; quotient_order is |term / previous term|"""
    subgroup: PermGroup
    quotient_order: int


def prime_divisors(n: int) -> List[int]:
    return [int(p) for p in primefactors(n)] if n > 1 else []


def p_part(n: int, p: int) -> int:
    return p ** int(multiplicity(p, n)) if n > 1 else 1


def is_p_group(G: PermGroup, p: Optional[int] = None) -> bool:
    """True for prime-power order (trivial group included); p pins the prime"""
    primes = prime_divisors(G.order())
    if p is None:
        return len(primes) <= 1
    return primes in ([], [p])


def is_p_element(x: Permutation, p: int) -> bool:
    return prime_divisors(x.order()) in ([], [p])


def centralizer_element(G: PermGroup, x: Permutation) -> PermGroup:
    if not G.contains(x):
        raise NotInGroupError(f"{x} is not in the group")
    return closure(G.degree, [g for g in G.elements() if g.commutes_with(x)])


def centralizer_subgroup(G: PermGroup, H: Union[PermGroup, Sequence[Permutation]]) -> PermGroup:
    gens = H.generators if isinstance(H, PermGroup) else tuple(H)
    return closure(G.degree, [g for g in G.elements() if all(g.commutes_with(h) for h in gens)])


def normalizer(G: PermGroup, H: PermGroup) -> PermGroup:
    return closure(G.degree, [g for g in G.elements()
                              if all(H.contains(h.conjugate(g)) for h in H.generators)])


def center(G: PermGroup) -> PermGroup:
    return centralizer_subgroup(G, G)


def is_normal(G: PermGroup, H: PermGroup) -> bool:
    """H normal in G, for H a subgroup of G"""
    return all(H.contains(h.conjugate(g)) for h in H.generators for g in G.generators)


def normal_closure(G: PermGroup, S: Union[PermGroup, Iterable[Permutation]]) -> PermGroup:
    """Smallest normal subgroup of G containing S"""
    seeds = list(S.generators if isinstance(S, PermGroup) else S)
    chain = StabilizerChain(G.degree)
    gens: List[Permutation] = []
    queue = list(seeds)
    for x in queue:
        if chain.extend(x):
            gens.append(x)
            queue.extend(x.conjugate(g) for g in G.generators)
    return PermGroup._from_chain(G.degree, gens, chain)


def commutator_subgroup(A: PermGroup, B: PermGroup) -> PermGroup:
    """[A, B], the normal closure of generator commutators in <A, B>"""
    joint = PermGroup(A.degree, A.generators + B.generators)
    return normal_closure(joint, [a.commutator(b) for a in A.generators for b in B.generators])


def derived_subgroup(G: PermGroup) -> PermGroup:
    return commutator_subgroup(G, G)


def derived_series(G: PermGroup) -> List[PermGroup]:
    series = [G]
    while True:
        nxt = derived_subgroup(series[-1])
        if nxt.order() == series[-1].order():
            return series
        series.append(nxt)


def lower_central_series(G: PermGroup) -> List[PermGroup]:
    series = [G]
    while True:
        nxt = commutator_subgroup(series[-1], G)
        if nxt.order() == series[-1].order():
            return series
        series.append(nxt)


def is_soluble(G: PermGroup) -> bool:
    return derived_series(G)[-1].order() == 1


def _lex_least(perms: Iterable[Permutation]) -> Optional[Permutation]:
    return min(perms, key=lambda p: p.images, default=None)


def sylow(G: PermGroup, p: int) -> PermGroup:
    """A Sylow p-subgroup grown by normalizer ascent"""
    target = p_part(G.order(), p)
    if target == 1:
        return trivial_group(G.degree)

    p_elements = [x for x in G.elements() if not x.is_identity() and is_p_element(x, p)]
    top = max(x.order() for x in p_elements)
    start = _lex_least(x for x in p_elements if x.order() == top)
    P = closure(G.degree, [start])

    while P.order() < target:
        N = normalizer(G, P)
        step = _lex_least(y for y in N.elements()
                          if not P.contains(y) and P.contains(y ** p))
        P = closure(G.degree, list(P.generators) + [step])
    logger.debug(f"Sylow {p}-subgroup of order {P.order()} found")
    return P


def core(G: PermGroup, H: PermGroup) -> PermGroup:
    """Largest normal subgroup of G contained in H"""
    inverses = [g.inverse() for g in G.generators]
    current = H
    while True:
        kept = [x for x in current.elements()
                if all(current.contains(x.conjugate(g_inv)) for g_inv in inverses)]
        nxt = closure(G.degree, kept)
        if nxt.order() == current.order():
            return current
        current = nxt


def p_core(G: PermGroup, p: int) -> PermGroup:
    """O_p(G): the core of a Sylow p-subgroup"""
    return core(G, sylow(G, p))


def fitting(G: PermGroup) -> PermGroup:
    gens: List[Permutation] = []
    for p in prime_divisors(G.order()):
        gens.extend(p_core(G, p).generators)
    return closure(G.degree, gens)


def is_nilpotent(G: PermGroup) -> bool:
    """All Sylow subgroups normal; groups of prime-power order short-circuit"""
    primes = prime_divisors(G.order())
    if len(primes) <= 1:
        return True
    return all(is_normal(G, sylow(G, p)) for p in primes)


def coprime_elements_commute(G: PermGroup) -> bool:
    """Nilpotency by the criterion that elements of coprime order commute"""
    by_prime = {p: [] for p in prime_divisors(G.order())}
    for x in G.elements():
        primes = prime_divisors(x.order())
        if len(primes) == 1:
            by_prime[primes[0]].append(x)
    primes = sorted(by_prime)
    for i, p in enumerate(primes):
        for q in primes[i + 1:]:
            for x in by_prime[p]:
                if not all(x.commutes_with(y) for y in by_prime[q]):
                    return False
    return True


def quotient(G: PermGroup, N: PermGroup) -> Tuple[PermGroup, GroupHom]:
    """G/N as a permutation group; a trivial N leaves G as is"""
    if N.order() == 1:
        return G, GroupHom(G, G, G.generators, validate=False)
    return coset_action(G, N)


def fitting_height(G: PermGroup) -> int:
    """Length of the ascending Fitting series

    Nontrivial soluble groups have positive height. The trivial group has an
    empty series and height 0.
    """
    if not is_soluble(G):
        raise NotSolubleError("Fitting height is defined for soluble groups only")
    height = 0
    current = G
    while current.order() > 1:
        F = fitting(current)
        height += 1
        if F.order() == current.order():
            break
        current, _ = coset_action(current, F)
    return height


def fitting_series(G: PermGroup) -> List[NormalSeriesEntry]:
    """1 = F_0 < F_1 < ... < G with F_i/F_{i-1} = F(G/F_{i-1}), realised inside G"""
    if not is_soluble(G):
        raise NotSolubleError("the Fitting series reaches G only for soluble groups")
    series: List[NormalSeriesEntry] = []
    current = trivial_group(G.degree)
    while current.order() < G.order():
        Q, projection = quotient(G, current)
        nxt = projection.preimage(fitting(Q))
        series.append(NormalSeriesEntry(nxt, nxt.order() // current.order()))
        current = nxt
    return series


def _normal_closures_of_classes(G: PermGroup) -> List[PermGroup]:
    closures: List[PermGroup] = []
    for rep in conjugacy_class_representatives(G):
        if rep.is_identity():
            continue
        N = normal_closure(G, [rep])
        if not any(same_subgroup(N, M) for M in closures):
            closures.append(N)
    return closures


def minimal_normal_subgroups(G: PermGroup) -> List[PermGroup]:
    closures = _normal_closures_of_classes(G)
    minimal = []
    for N in closures:
        if not any(M.order() < N.order() and is_subgroup(M, N) for M in closures):
            minimal.append(N)
    return sorted(minimal, key=lambda N: N.order())


def socle(G: PermGroup) -> PermGroup:
    gens: List[Permutation] = []
    for N in minimal_normal_subgroups(G):
        gens.extend(N.generators)
    return closure(G.degree, gens)


def normal_subgroups(G: PermGroup) -> List[PermGroup]:
    """Every normal subgroup, as joins of normal closures of classes"""
    limit = get_bounds().subgroup_scan
    if G.order() > limit:
        raise SubgroupScanBoundError("group too large for the normal-subgroup scan", G.order(), limit)

    found: List[PermGroup] = [trivial_group(G.degree)]
    keys = {frozenset([G.identity])}

    def admit(N: PermGroup) -> bool:
        key = frozenset(N.elements())
        if key in keys:
            return False
        keys.add(key)
        found.append(N)
        return True

    queue = [N for N in _normal_closures_of_classes(G) if admit(N)]
    for N in queue:
        for M in list(found):
            joined = closure(G.degree, list(N.generators) + list(M.generators))
            if admit(joined):
                queue.append(joined)
    return sorted(found, key=lambda N: N.order())


def soluble_radical(G: PermGroup) -> PermGroup:
    """Largest soluble normal subgroup"""
    radical = trivial_group(G.degree)
    while True:
        Q, projection = quotient(G, radical)
        abelian = [M for M in minimal_normal_subgroups(Q) if is_soluble(M)]
        if not abelian:
            return radical
        gens = [g for M in abelian for g in M.generators]
        radical = projection.preimage(closure(Q.degree, gens))
