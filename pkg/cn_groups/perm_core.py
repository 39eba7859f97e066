"""
Permutations, stabilizer chains, homomorphisms and coset actions

Points are 0-based and permutations compose left to right:
(p * q)(x) = q(p(x)). Every group in the package, quotients included,
is a PermGroup built on these.
"""

import re
import threading
from dataclasses import dataclass
from functools import lru_cache, reduce
from math import lcm
from random import Random
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from loguru import logger

from cn_groups.bounds import get_bounds
from cn_groups.errors import (
    CycleSyntaxError,
    DegreeMismatchError,
    EnumerationBoundError,
    InputError,
    NotAHomomorphismError,
    NotInGroupError,
    QuotientDegreeError,
)
from cn_groups.logging_config import StructuredLogger, log_performance_metrics


CYCLE_RE = re.compile(r"\(\s*(\d+(?:[\s,]+\d+)*)?\s*\)")
ELEMENT_SEP_RE = re.compile(r"[\s,]+")

# Element lists are cached on a group up to this order
ELEMENT_CACHE_LIMIT = 100_000


@lru_cache(maxsize=256)
def _identity_images(degree: int) -> Tuple[int, ...]:
    return tuple(range(degree))


@dataclass(frozen=True)
class Permutation:
    """A bijection of {0..degree-1}; images[i] is the image of point i"""
    images: Tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if not images:
            raise InputError("permutation degree must be positive")
        if sorted(images) != list(range(len(images))):
            raise InputError(f"images {images!r} do not form a bijection")
        object.__setattr__(self, "images", images)

    @classmethod
    def _trusted(cls, images: Tuple[int, ...]) -> "Permutation":
        """Wrap images already known to be a bijection"""
        perm = object.__new__(cls)
        object.__setattr__(perm, "images", images)
        return perm

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree < 1:
            raise InputError("permutation degree must be positive")
        return cls._trusted(_identity_images(degree))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Sequence[Sequence[int]]) -> "Permutation":
        """Product of the given cycles, applied left to right"""
        result = cls.identity(degree)
        for cycle in cycles:
            if len(set(cycle)) != len(cycle):
                raise InputError(f"cycle {tuple(cycle)} repeats a point")
            images = list(range(degree))
            for index, point in enumerate(cycle):
                if not 0 <= point < degree:
                    raise DegreeMismatchError(f"point {point} outside degree {degree}")
                images[point] = cycle[(index + 1) % len(cycle)]
            result = result * cls._trusted(tuple(images))
        return result

    @classmethod
    def parse(cls, text: str, degree: int) -> "Permutation":
        """Parse 0-based cycle notation such as "(0 1 2)(3 4)"; "()" is the identity"""
        cycles: List[Tuple[List[int], int]] = []
        position = 0
        matched = False
        while position < len(text):
            if text[position].isspace():
                position += 1
                continue
            match = CYCLE_RE.match(text, position)
            if match is None:
                raise CycleSyntaxError(f"unexpected character {text[position]!r} in {text!r}", position)
            matched = True
            body = match.group(1)
            if body:
                points = [int(token) for token in ELEMENT_SEP_RE.split(body.strip())]
                cycles.append((points, match.start(1)))
            position = match.end()
        if not matched:
            raise CycleSyntaxError(f"empty permutation {text!r}", 0)

        for points, start in cycles:
            for point in points:
                if point >= degree:
                    raise DegreeMismatchError(f"point {point} in {text!r} outside degree {degree}")
            if len(set(points)) != len(points):
                raise CycleSyntaxError(f"cycle repeats a point in {text!r}", start)
        return cls.from_cycles(degree, [points for points, _ in cycles])

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(other.images) != len(self.images):
            raise DegreeMismatchError(f"cannot compose degrees {self.degree} and {other.degree}")
        return Permutation._trusted(tuple(map(other.images.__getitem__, self.images)))

    def __pow__(self, exponent: int) -> "Permutation":
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = Permutation.identity(self.degree)
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inverse(self) -> "Permutation":
        inverse = [0] * len(self.images)
        for point, image in enumerate(self.images):
            inverse[image] = point
        return Permutation._trusted(tuple(inverse))

    def conjugate(self, g: "Permutation") -> "Permutation":
        """g^-1 * self * g"""
        g_images = g.images
        images = [0] * len(self.images)
        for point, image in enumerate(self.images):
            images[g_images[point]] = g_images[image]
        return Permutation._trusted(tuple(images))

    def commutator(self, other: "Permutation") -> "Permutation":
        """[self, other] = self^-1 other^-1 self other"""
        return self.inverse() * other.inverse() * self * other

    def is_identity(self) -> bool:
        return self.images == _identity_images(len(self.images))

    def commutes_with(self, other: "Permutation") -> bool:
        a, b = self.images, other.images
        return all(b[a[i]] == a[b[i]] for i in range(len(a)))

    def first_moved_point(self) -> Optional[int]:
        for point, image in enumerate(self.images):
            if point != image:
                return point
        return None

    def cycles(self) -> List[Tuple[int, ...]]:
        """Nontrivial cycles, each starting from its least point"""
        seen = set()
        cycles = []
        for start in range(len(self.images)):
            if start in seen or self.images[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            point = self.images[start]
            while point != start:
                seen.add(point)
                cycle.append(point)
                point = self.images[point]
            cycles.append(tuple(cycle))
        return cycles

    def cycle_type(self) -> Tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def order(self) -> int:
        return reduce(lcm, (len(c) for c in self.cycles()), 1)

    def cycle_string(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

    def direct_sum(self, other: "Permutation") -> "Permutation":
        """Act by self on the first points and by other on the shifted rest"""
        shift = len(self.images)
        return Permutation._trusted(self.images + tuple(shift + i for i in other.images))

    def extend(self, degree: int) -> "Permutation":
        """Pad with fixed points up to the given degree"""
        if degree < self.degree:
            raise DegreeMismatchError(f"cannot shrink degree {self.degree} to {degree}")
        return Permutation._trusted(self.images + tuple(range(self.degree, degree)))

    def restrict(self, start: int, stop: int) -> "Permutation":
        """Action on the invariant block start..stop-1, renumbered from 0"""
        block = self.images[start:stop]
        if any(not start <= i < stop for i in block):
            raise InputError(f"points {start}..{stop - 1} are not an invariant block")
        return Permutation._trusted(tuple(i - start for i in block))

    def __str__(self) -> str:
        return self.cycle_string()

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_string()!r}, degree={self.degree})"


class StabilizerChain:
    """Base, strong generators and basic transversals of a permutation group

    transversals[l] maps each point of the l-th basic orbit to a pair
    (u, u^-1) with base[l] * u = point. strong[l] generates the pointwise
    stabilizer of base[:l].
    """

    def __init__(self, degree: int, generators: Sequence[Permutation] = (),
                 base_prefix: Sequence[int] = ()):
        self.degree = degree
        self.identity = Permutation.identity(degree)
        self.base: List[int] = []
        self.strong: List[List[Permutation]] = []
        self.transversals: List[Dict[int, Tuple[Permutation, Permutation]]] = []
        self._transversal_lists: Optional[List[List[Permutation]]] = None

        for point in base_prefix:
            if point in self.base:
                raise InputError(f"base prefix repeats point {point}")
            self._append_base_point(point)
        for gen in generators:
            self._add_strong_generator(gen)
        self._complete(len(self.base) - 1)

    def _append_base_point(self, point: int):
        self.base.append(point)
        self.strong.append([])
        self.transversals.append({point: (self.identity, self.identity)})

    def _add_strong_generator(self, gen: Permutation):
        if gen.is_identity():
            return
        if all(gen.images[b] == b for b in self.base):
            self._append_base_point(gen.first_moved_point())
        for level, point in enumerate(self.base):
            self.strong[level].append(gen)
            self._grow_transversal(level)
            if gen.images[point] != point:
                break

    def _grow_transversal(self, level: int):
        transversal = self.transversals[level]
        gens = self.strong[level]
        queue = list(transversal)
        for point in queue:
            u = transversal[point][0]
            for s in gens:
                image = s.images[point]
                if image not in transversal:
                    w = u * s
                    transversal[image] = (w, w.inverse())
                    queue.append(image)

    def _complete(self, level: int):
        """Schreier-Sims: make every level's Schreier generators sift"""
        self._transversal_lists = None
        while level >= 0:
            jump = self._check_level(level)
            level = level - 1 if jump is None else jump

    def _check_level(self, level: int) -> Optional[int]:
        transversal = self.transversals[level]
        for beta, (u_beta, _) in list(transversal.items()):
            for x in list(self.strong[level]):
                image = x.images[beta]
                schreier = u_beta * x * transversal[image][1]
                if schreier.is_identity():
                    continue
                residue, depth = self.strip(schreier, level + 1)
                if depth == len(self.base) and residue.is_identity():
                    continue
                if depth == len(self.base):
                    self._append_base_point(residue.first_moved_point())
                for deeper in range(level + 1, depth + 1):
                    self.strong[deeper].append(residue)
                    self._grow_transversal(deeper)
                return depth
        return None

    def strip(self, g: Permutation, start: int = 0, stop: Optional[int] = None) -> Tuple[Permutation, int]:
        """Sift g through levels start..stop-1; returns (residue, level reached)"""
        stop = len(self.base) if stop is None else stop
        for level in range(start, stop):
            entry = self.transversals[level].get(g.images[self.base[level]])
            if entry is None:
                return g, level
            g = g * entry[1]
        return g, stop

    def contains(self, g: Permutation) -> bool:
        residue, depth = self.strip(g)
        return depth == len(self.base) and residue.is_identity()

    def extend(self, g: Permutation) -> bool:
        """Add g to the group; False when it was already a member"""
        if self.contains(g):
            return False
        self._add_strong_generator(g)
        self._complete(len(self.base) - 1)
        return True

    def order(self) -> int:
        result = 1
        for transversal in self.transversals:
            result *= len(transversal)
        return result

    def transversal_lists(self) -> List[List[Permutation]]:
        if self._transversal_lists is None:
            self._transversal_lists = [[u for u, _ in t.values()] for t in self.transversals]
        return self._transversal_lists

    def elements(self) -> Iterator[Permutation]:
        """Every element once as u_{k-1}...u_1 u_0, identity first"""
        lists = self.transversal_lists()

        def walk(level: int, prefix: Permutation) -> Iterator[Permutation]:
            if level < 0:
                yield prefix
                return
            for u in lists[level]:
                yield from walk(level - 1, prefix * u)

        return walk(len(lists) - 1, self.identity)

    def random_element(self, rng: Random) -> Permutation:
        result = self.identity
        for options in reversed(self.transversal_lists()):
            result = result * rng.choice(options)
        return result


class PermGroup:
    """A permutation group given by generators; the chain is built on first use"""

    def __init__(self, degree: int, generators: Sequence[Permutation] = (),
                 base_prefix: Sequence[int] = (), name: Optional[str] = None):
        if degree < 1:
            raise InputError("group degree must be positive")
        generators = tuple(generators)
        for gen in generators:
            if gen.degree != degree:
                raise DegreeMismatchError(f"generator {gen} has degree {gen.degree}, group has {degree}")
        self.degree = degree
        self.generators = generators
        self.base_prefix = tuple(base_prefix)
        self.name = name
        self._chain: Optional[StabilizerChain] = None
        self._element_cache: Optional[List[Permutation]] = None
        self._lock = threading.Lock()

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_lock"] = None
        state["_element_cache"] = None
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._lock = threading.Lock()

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            with self._lock:
                if self._chain is None:
                    self._chain = self._build_chain()
        return self._chain

    @log_performance_metrics
    def _build_chain(self) -> StabilizerChain:
        chain = StabilizerChain(self.degree, self.generators, self.base_prefix)
        StructuredLogger.log_chain_built(self.degree, chain.order(), len(chain.base))
        return chain

    @classmethod
    def _from_chain(cls, degree: int, generators: Sequence[Permutation],
                    chain: StabilizerChain) -> "PermGroup":
        group = cls(degree, generators)
        group._chain = chain
        return group

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    @property
    def base(self) -> List[int]:
        return list(self.chain.base)

    @property
    def strong_generators(self) -> List[Permutation]:
        seen = []
        for level in self.chain.strong:
            for gen in level:
                if gen not in seen:
                    seen.append(gen)
        return seen

    @property
    def basic_orbit_lengths(self) -> List[int]:
        return [len(t) for t in self.chain.transversals]

    def order(self) -> int:
        return self.chain.order()

    def is_trivial(self) -> bool:
        return all(g.is_identity() for g in self.generators)

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise DegreeMismatchError(f"permutation degree {p.degree} differs from group degree {self.degree}")
        return self.chain.contains(p)

    def __contains__(self, p: Permutation) -> bool:
        return self.contains(p)

    def elements(self) -> Iterator[Permutation]:
        """Stream every element once; raises instead of truncating"""
        order = self.order()
        limit = get_bounds().max_order
        if order > limit:
            raise EnumerationBoundError("group too large for enumeration", order, limit)
        if order > ELEMENT_CACHE_LIMIT:
            return self.chain.elements()
        if self._element_cache is None:
            with self._lock:
                if self._element_cache is None:
                    self._element_cache = list(self.chain.elements())
        return iter(self._element_cache)

    def random_element(self, rng: Random) -> Permutation:
        return self.chain.random_element(rng)

    def __repr__(self) -> str:
        label = f"{self.name!r}, " if self.name else ""
        gens = ", ".join(g.cycle_string() for g in self.generators[:4])
        more = ", ..." if len(self.generators) > 4 else ""
        return f"PermGroup({label}degree={self.degree}, generators=[{gens}{more}])"


class GroupHom:
    """Homomorphism fixed by generator images

    The graph group generated by the pairs (g_i, images[i]) on the disjoint
    union of both point sets certifies the map: it is a homomorphism exactly
    when the graph projects onto the domain with equal order.
    """

    def __init__(self, domain: PermGroup, codomain: PermGroup, images: Sequence[Permutation],
                 validate: bool = True):
        images = tuple(images)
        if len(images) != len(domain.generators):
            raise InputError(f"{len(images)} images for {len(domain.generators)} domain generators")
        for image in images:
            if image.degree != codomain.degree:
                raise DegreeMismatchError(f"image {image} has degree {image.degree}, codomain has {codomain.degree}")
        self.domain = domain
        self.codomain = codomain
        self.images = images
        self._n = domain.degree
        self._m = codomain.degree
        self._graph_gens = [g.direct_sum(h) for g, h in zip(domain.generators, images)]
        self._graph = PermGroup(self._n + self._m, self._graph_gens)
        self._image: Optional[PermGroup] = None
        self._codomain_first: Optional[PermGroup] = None
        self._kernel: Optional[PermGroup] = None

        if validate:
            if not all(codomain.contains(image) for image in images):
                raise NotAHomomorphismError("an image lies outside the codomain")
            if self._graph.order() != domain.order():
                raise NotAHomomorphismError(
                    f"graph group has order {self._graph.order()}, domain has {domain.order()}"
                )

    def __call__(self, g: Permutation) -> Permutation:
        if g.degree != self._n:
            raise DegreeMismatchError(f"element degree {g.degree} differs from domain degree {self._n}")
        residue, _ = self._graph.chain.strip(g.extend(self._n + self._m))
        if not residue.restrict(0, self._n).is_identity():
            raise NotInGroupError(f"{g} is not in the domain")
        return residue.restrict(self._n, self._n + self._m).inverse()

    def image(self) -> PermGroup:
        if self._image is None:
            self._image = closure(self._m, self.images)
        return self._image

    def _codomain_first_graph(self) -> PermGroup:
        if self._codomain_first is None:
            prefix = [self._n + b for b in self.image().base]
            self._codomain_first = PermGroup(self._n + self._m, self._graph_gens, base_prefix=prefix)
        return self._codomain_first

    def kernel(self) -> PermGroup:
        if self._kernel is None:
            chain = self._codomain_first_graph().chain
            depth = len(self.image().base)
            gens = []
            if depth < len(chain.base):
                gens = [s.restrict(0, self._n) for s in chain.strong[depth]]
            self._kernel = closure(self._n, gens)
        return self._kernel

    def preimage(self, subgroup: PermGroup) -> PermGroup:
        """Full preimage of a subgroup of the image"""
        chain = self._codomain_first_graph().chain
        depth = len(self.image().base)
        lifts = []
        for k in subgroup.generators:
            lifted = Permutation.identity(self._n).direct_sum(k)
            residue, reached = chain.strip(lifted, 0, depth)
            if reached < depth or not residue.restrict(self._n, self._n + self._m).is_identity():
                raise NotInGroupError(f"{k} is not in the image")
            lifts.append(residue.restrict(0, self._n).inverse())
        return closure(self._n, lifts + list(self.kernel().generators))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """p then q"""
    return p * q


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def element_order(p: Permutation) -> int:
    return p.order()


def order(G: PermGroup) -> int:
    return G.order()


def contains(G: PermGroup, p: Permutation) -> bool:
    return G.contains(p)


def elements(G: PermGroup) -> Iterator[Permutation]:
    return G.elements()


def trivial_group(degree: int) -> PermGroup:
    return PermGroup(degree, [])


def closure(degree: int, perms: Sequence[Permutation]) -> PermGroup:
    """Smallest group containing perms; redundant inputs are dropped"""
    chain = StabilizerChain(degree)
    generators = []
    for p in perms:
        if p.degree != degree:
            raise DegreeMismatchError(f"permutation degree {p.degree} differs from {degree}")
        if chain.extend(p):
            generators.append(p)
    return PermGroup._from_chain(degree, generators, chain)


def hom_by_images(domain: PermGroup, codomain: PermGroup, images: Sequence[Permutation]) -> GroupHom:
    return GroupHom(domain, codomain, images)


def kernel(h: GroupHom) -> PermGroup:
    return h.kernel()


def image(h: GroupHom) -> PermGroup:
    return h.image()


def is_subgroup(A: PermGroup, B: PermGroup) -> bool:
    """A <= B"""
    return A.degree == B.degree and all(B.contains(g) for g in A.generators)


def same_subgroup(A: PermGroup, B: PermGroup) -> bool:
    return A.order() == B.order() and is_subgroup(A, B)


def conjugate_group(H: PermGroup, g: Permutation) -> PermGroup:
    """H^g"""
    return PermGroup(H.degree, [h.conjugate(g) for h in H.generators])


def intersection(A: PermGroup, B: PermGroup) -> PermGroup:
    if A.order() > B.order():
        A, B = B, A
    return closure(A.degree, [a for a in A.elements() if B.contains(a)])


def _canonical_coset_rep(H: StabilizerChain, g: Permutation) -> Permutation:
    """The unique element of the right coset Hg minimising images base point by base point"""
    x = g
    for level in range(len(H.base)):
        transversal = H.transversals[level]
        gamma = min(transversal, key=x.images.__getitem__)
        x = transversal[gamma][0] * x
    return x


def conjugacy_classes(G: PermGroup) -> List[Tuple[Permutation, int]]:
    """(representative, class size) pairs; the representative is the first class member enumerated"""
    seen = set()
    classes = []
    generators = G.generators
    for x in G.elements():
        if x in seen:
            continue
        seen.add(x)
        orbit = [x]
        for y in orbit:
            for g in generators:
                z = y.conjugate(g)
                if z not in seen:
                    seen.add(z)
                    orbit.append(z)
        classes.append((x, len(orbit)))
    return classes


def conjugacy_class_representatives(G: PermGroup) -> List[Permutation]:
    return [rep for rep, _ in conjugacy_classes(G)]


@log_performance_metrics
def coset_action(G: PermGroup, H: PermGroup) -> Tuple[PermGroup, GroupHom]:
    """Right action of G on the cosets of H, with the projection"""
    for h in H.generators:
        if not G.contains(h):
            raise NotInGroupError(f"{h} is not in the acting group")
    index = G.order() // H.order()
    limit = get_bounds().quotient_degree
    if index > limit:
        raise QuotientDegreeError("coset action index too large", index, limit)

    chain = H.chain
    start = _canonical_coset_rep(chain, G.identity)
    reps = [start]
    lookup = {start.images: 0}
    tables: List[List[int]] = [[] for _ in G.generators]
    for rep in reps:
        for table, s in zip(tables, G.generators):
            target = _canonical_coset_rep(chain, rep * s)
            slot = lookup.get(target.images)
            if slot is None:
                slot = len(reps)
                lookup[target.images] = slot
                reps.append(target)
            table.append(slot)
    if len(reps) != index:
        raise RuntimeError(f"coset enumeration found {len(reps)} cosets, expected {index}")

    perms = [Permutation._trusted(tuple(table)) for table in tables]
    quotient = PermGroup(index, perms)
    logger.debug(f"Coset action of degree {index} built")
    return quotient, GroupHom(G, quotient, perms, validate=False)
