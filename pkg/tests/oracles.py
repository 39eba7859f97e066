"""
Independent brute-force oracles the suites compare library results against

Normal subgroups here are frozensets of elements found by closing the
generators under multiplication; nothing below uses stabilizer chains or the
structure module.
"""

from functools import lru_cache
from typing import FrozenSet, Iterable, List, Set, Tuple

from sympy import factorint

from cn_groups.perm_core import PermGroup, Permutation

ElementSet = FrozenSet[Permutation]


def brute_force_closure(degree: int, generators) -> Set[Permutation]:
    """Every element reachable from the identity by right multiplication"""
    identity = Permutation.identity(degree)
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def subgroup(G: PermGroup, *cycle_strings: str) -> PermGroup:
    """Subgroup of G generated by cycle strings at G's degree"""
    return PermGroup(G.degree, [Permutation.parse(text, G.degree) for text in cycle_strings])


def _primes(n: int) -> List[int]:
    return sorted(factorint(n))


def elements_commute_by_coprime_order(G: PermGroup) -> bool:
    """Nilpotency: elements of coprime prime-power orders commute"""
    prime_power = [(x, _primes(x.order())) for x in G.elements() if len(_primes(x.order())) == 1]
    return all(x.commutes_with(y) for x, px in prime_power for y, py in prime_power if px != py)


def generated_subgroup(degree: int, elements: Iterable[Permutation]) -> ElementSet:
    """Subgroup generated by a set of elements, growing the span one new element at a time"""
    span = {Permutation.identity(degree)}
    generators = []
    for x in elements:
        if x not in span:
            generators.append(x)
            span = brute_force_closure(degree, generators)
    return frozenset(span)


def brute_force_classes(elements: Iterable[Permutation]) -> List[ElementSet]:
    elements = list(elements)
    seen: Set[Permutation] = set()
    classes = []
    for x in elements:
        if x in seen:
            continue
        cls = frozenset(x.conjugate(g) for g in elements)
        seen |= cls
        classes.append(cls)
    return classes


def brute_force_normal_subgroups(G: PermGroup) -> List[ElementSet]:
    """Every normal subgroup, smallest first

    Each normal subgroup is the join of the subgroups generated by the classes
    it contains, and the join of two normal subgroups is their product set.
    """
    return list(_normal_subgroups(G.degree, tuple(G.generators)))


@lru_cache(maxsize=None)
def _normal_subgroups(degree: int, generators: Tuple[Permutation, ...]) -> Tuple[ElementSet, ...]:
    elements = brute_force_closure(degree, generators)
    closures = {generated_subgroup(degree, cls) for cls in brute_force_classes(elements)}
    found = set(closures) | {frozenset({Permutation.identity(degree)})}
    frontier = list(found)
    while frontier:
        nxt = []
        for X in frontier:
            for C in closures:
                if C <= X:
                    continue
                joined = frozenset(a * b for a in X for b in C)
                if joined not in found:
                    found.add(joined)
                    nxt.append(joined)
        frontier = nxt
    return tuple(sorted(found, key=len))


def is_nilpotent_set(N: ElementSet) -> bool:
    """A finite group is nilpotent iff its p-elements number exactly |N|_p for every p"""
    for p, e in factorint(len(N)).items():
        p_elements = sum(1 for x in N if set(factorint(x.order())) <= {p})
        if p_elements != p ** e:
            return False
    return True


def largest_normal_nilpotent(G: PermGroup) -> int:
    """Order of the Fitting subgroup, read off the brute-force normal-subgroup list"""
    return max(len(N) for N in brute_force_normal_subgroups(G) if is_nilpotent_set(N))


def largest_normal_p_subgroup(G: PermGroup, p: int) -> int:
    return max(len(N) for N in brute_force_normal_subgroups(G) if set(factorint(len(N))) <= {p})


def minimal_normal_orders(G: PermGroup) -> List[int]:
    """Orders of the minimal normal subgroups, from the brute-force list"""
    scan = [N for N in brute_force_normal_subgroups(G) if len(N) > 1]
    minimal = [N for N in scan if not any(M < N for M in scan)]
    return sorted(len(N) for N in minimal)
