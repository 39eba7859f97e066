"""
Group constructors

Named small groups, matrix actions over Z/m and their semidirect products,
the fixed-point-free action search, and the example families built on them.

Vectors are rows and matrices act on the right, v -> v.M, so the permutation
of a product g*h (g first) is realised by M_g @ M_h.
"""

import re
from dataclasses import dataclass, field
from itertools import product
from math import gcd
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from sympy import Matrix, Rational, isprime
from sympy.algebras.quaternion import Quaternion

from cn_groups.bounds import get_bounds
from cn_groups.errors import (
    ConstructionError,
    DegreeBoundError,
    InputError,
    NotAHomomorphismError,
    SearchExhaustedError,
)
from cn_groups.logging_config import StructuredLogger, log_performance_metrics
from cn_groups.perm_core import GroupHom, PermGroup, Permutation, closure, coset_action
from cn_groups.recognition import decompose_cyclic_odd_times_quaternion, is_cyclic, is_sl23
from cn_groups.structure import is_p_element, prime_divisors


ElementFilter = Callable[[Permutation], bool]

# Matrices examined per numpy batch during candidate generation
CANDIDATE_CHUNK = 4096

NAME_RE = re.compile(r"^(C|S|A|D|Dic|Q)(\d+)$")


# ---------------------------------------------------------------------------
# Named small groups
# ---------------------------------------------------------------------------

def cyclic_group(n: int) -> PermGroup:
    if n < 1:
        raise InputError(f"cyclic group order must be positive, got {n}")
    gens = [Permutation.from_cycles(n, [list(range(n))])] if n > 1 else []
    return PermGroup(n, gens, name=f"C{n}")


def symmetric_group(n: int) -> PermGroup:
    if n < 1:
        raise InputError(f"symmetric group degree must be positive, got {n}")
    gens = []
    if n > 1:
        gens.append(Permutation.from_cycles(n, [[0, 1]]))
    if n > 2:
        gens.append(Permutation.from_cycles(n, [list(range(n))]))
    return PermGroup(n, gens, name=f"S{n}")


def alternating_group(n: int) -> PermGroup:
    if n < 1:
        raise InputError(f"alternating group degree must be positive, got {n}")
    gens = [Permutation.from_cycles(n, [[0, 1, i]]) for i in range(2, n)]
    return PermGroup(n, gens, name=f"A{n}")


def dihedral_group(n: int) -> PermGroup:
    """Symmetries of the n-gon, order 2n"""
    if n < 3:
        raise InputError(f"dihedral group needs n >= 3, got {n}")
    rotation = Permutation.from_cycles(n, [list(range(n))])
    reflection = Permutation(tuple((-i) % n for i in range(n)))
    return PermGroup(n, [rotation, reflection], name=f"D{2 * n}")


def dicyclic_group(n: int) -> PermGroup:
    """<a, x | a^2n = 1, x^2 = a^n, x^-1 a x = a^-1>, order 4n, right regular representation

    The element a^k x^e sits at point k + 2n*e.
    """
    if n < 2:
        raise InputError(f"dicyclic group needs n >= 2, got {n}")
    m = 2 * n

    def point(k: int, e: int) -> int:
        return k % m + m * e

    right_a = [0] * (2 * m)
    right_x = [0] * (2 * m)
    for e in (0, 1):
        for k in range(m):
            right_a[point(k, e)] = point(k + (1 if e == 0 else -1), e)
            right_x[point(k, e)] = point(k, 1) if e == 0 else point(k + n, 0)
    name = f"Q{4 * n}" if n & (n - 1) == 0 else f"Dic{n}"
    return PermGroup(2 * m, [Permutation(tuple(right_a)), Permutation(tuple(right_x))], name=name)


def quaternion_group(order: int = 8) -> PermGroup:
    """Generalized quaternion group of the given 2-power order"""
    if order < 8 or order & (order - 1):
        raise InputError(f"generalized quaternion order must be a power of 2 >= 8, got {order}")
    return dicyclic_group(order // 4)


def direct_product(*groups: PermGroup, name: Optional[str] = None) -> PermGroup:
    """Factors act on consecutive disjoint blocks of points"""
    if not groups:
        raise InputError("direct product needs at least one factor")
    degree = sum(G.degree for G in groups)
    gens: List[Permutation] = []
    offset = 0
    for G in groups:
        rest = degree - offset - G.degree
        for g in G.generators:
            padded = g if offset == 0 else Permutation.identity(offset).direct_sum(g)
            gens.append(padded.extend(degree) if rest else padded)
        offset += G.degree
    label = name or "x".join(G.name or "G" for G in groups)
    return PermGroup(degree, gens, name=label)


def linear_group_on_vectors(matrices: Sequence, modulus: int, nonzero_only: bool = False,
                            name: Optional[str] = None) -> PermGroup:
    """The matrix group generated by matrices, acting on (Z/modulus)^dim"""
    action = MatrixAction.from_lists(matrices, modulus)
    space = action.space
    perms = [space.linear(M) for M in action.matrices]
    if nonzero_only:
        # The zero vector is point 0 and is fixed by every linear map
        perms = [Permutation._trusted(tuple(i - 1 for i in p.images[1:])) for p in perms]
        degree = space.size - 1
    else:
        degree = space.size
    return PermGroup(degree, perms, name=name)


def sl23() -> PermGroup:
    return linear_group_on_vectors([[[1, 1], [0, 1]], [[1, 0], [1, 1]]], 3, nonzero_only=True,
                                   name="SL(2,3)")


def gl23() -> PermGroup:
    return linear_group_on_vectors([[[1, 1], [0, 1]], [[1, 0], [1, 1]], [[2, 0], [0, 1]]], 3,
                                   nonzero_only=True, name="GL(2,3)")


def c3_times_q8() -> PermGroup:
    return direct_product(cyclic_group(3), quaternion_group(8), name="C3xQ8")


def group_from_name(text: str) -> PermGroup:
    """Resolve names such as trivial, C4, S4, A5, D10, Dic3, Q8, Q16, C3xQ8, SL23, GL23"""
    key = text.strip()
    fixed = {
        "trivial": lambda: PermGroup(1, [], name="trivial"),
        "C3xQ8": c3_times_q8,
        "SL23": sl23,
        "SL(2,3)": sl23,
        "GL23": gl23,
        "GL(2,3)": gl23,
    }
    if key in fixed:
        return fixed[key]()
    match = NAME_RE.match(key)
    if match is None:
        raise InputError(f"unknown group name {text!r}")
    family, n = match.group(1), int(match.group(2))
    if family == "C":
        return cyclic_group(n)
    if family == "S":
        return symmetric_group(n)
    if family == "A":
        return alternating_group(n)
    if family == "D":
        if n % 2:
            raise InputError(f"dihedral names give the order, which must be even: {text!r}")
        return dihedral_group(n // 2)
    if family == "Dic":
        return dicyclic_group(n)
    return quaternion_group(n)


# ---------------------------------------------------------------------------
# Vectors and matrices over Z/m
# ---------------------------------------------------------------------------

class VectorSpace:
    """(Z/modulus)^dim with vectors numbered little-endian: v <-> sum v_i m^i"""

    def __init__(self, dim: int, modulus: int):
        if dim < 1 or modulus < 2:
            raise InputError(f"need dim >= 1 and modulus >= 2, got dim={dim}, modulus={modulus}")
        self.dim = dim
        self.modulus = modulus
        self.size = modulus ** dim
        limit = get_bounds().max_degree
        if self.size > limit:
            raise DegreeBoundError(f"(Z/{modulus})^{dim} has too many points", self.size, limit)
        self.powers = modulus ** np.arange(dim, dtype=np.int64)
        digits = np.unravel_index(np.arange(self.size, dtype=np.int64), (modulus,) * dim)
        self.vectors = np.stack(digits[::-1], axis=1).astype(np.int64)

    def encode(self, rows: np.ndarray) -> np.ndarray:
        return (rows % self.modulus) @ self.powers

    def index(self, vector: Sequence[int]) -> int:
        return int(self.encode(np.asarray(vector, dtype=np.int64)))

    def linear(self, M: np.ndarray) -> Permutation:
        return Permutation._trusted(tuple(self.encode(self.vectors @ M).tolist()))

    def translation(self, vector: Sequence[int]) -> Permutation:
        shift = np.asarray(vector, dtype=np.int64)
        return Permutation._trusted(tuple(self.encode(self.vectors + shift).tolist()))

    def basis(self) -> List[np.ndarray]:
        return list(np.eye(self.dim, dtype=np.int64))


def _identity_matrix(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.int64)


def _matrix_order(M: np.ndarray, modulus: int, limit: int = 100_000) -> int:
    identity = _identity_matrix(M.shape[0])
    power = M % modulus
    for k in range(1, limit + 1):
        if np.array_equal(power, identity):
            return k
        power = power @ M % modulus
    raise InputError(f"matrix order exceeds {limit}; is it invertible mod {modulus}?")


def _det_mod(M: np.ndarray, modulus: int) -> int:
    return int(Matrix(M.tolist()).det()) % modulus


def is_invertible_mod(M: np.ndarray, modulus: int) -> bool:
    return gcd(_det_mod(M, modulus), modulus) == 1


def fixes_only_zero(M: np.ndarray, modulus: int) -> bool:
    """det(M - I) is a unit mod modulus, so the fixed space of M is zero"""
    return is_invertible_mod(M - _identity_matrix(M.shape[0]), modulus)


def _block_diagonal(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    a, b = left.shape[0], right.shape[0]
    out = np.zeros((a + b, a + b), dtype=np.int64)
    out[:a, :a] = left
    out[a:, a:] = right
    return out


@dataclass(eq=False)
class MatrixAction:
    """One invertible dim x dim matrix over Z/modulus per generator of the acting group"""
    dim: int
    modulus: int
    matrices: Tuple[np.ndarray, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.dim < 1 or self.modulus < 2:
            raise InputError(f"need dim >= 1 and modulus >= 2, got dim={self.dim}, modulus={self.modulus}")
        normalised = []
        for M in self.matrices:
            M = np.asarray(M, dtype=np.int64) % self.modulus
            if M.shape != (self.dim, self.dim):
                raise InputError(f"matrix of shape {M.shape} in a dimension-{self.dim} action")
            if not is_invertible_mod(M, self.modulus):
                raise InputError(f"matrix {M.tolist()} is not invertible mod {self.modulus}")
            normalised.append(M)
        self.matrices = tuple(normalised)

    @classmethod
    def from_lists(cls, matrices: Sequence, modulus: int) -> "MatrixAction":
        arrays = [np.asarray(M, dtype=np.int64) for M in matrices]
        if not arrays:
            raise InputError("at least one matrix is required")
        return cls(arrays[0].shape[0], modulus, tuple(arrays))

    @property
    def space(self) -> VectorSpace:
        return VectorSpace(self.dim, self.modulus)

    def repeated(self, copies: int) -> "MatrixAction":
        """Diagonal action on the direct sum of copies of the module"""
        if copies < 1:
            raise InputError(f"copies must be positive, got {copies}")
        return self.block_sum(*([self] * (copies - 1))) if copies > 1 else self

    def block_sum(self, *others: "MatrixAction") -> "MatrixAction":
        matrices = list(self.matrices)
        dim = self.dim
        for other in others:
            if other.modulus != self.modulus or len(other.matrices) != len(matrices):
                raise InputError("block sum needs equal moduli and generator counts")
            matrices = [_block_diagonal(a, b) for a, b in zip(matrices, other.matrices)]
            dim += other.dim
        return MatrixAction(dim, self.modulus, tuple(matrices))

    def homomorphism(self, K: PermGroup, space: Optional[VectorSpace] = None) -> GroupHom:
        """The induced map K -> Sym(V), certified by the graph-group test"""
        if len(self.matrices) != len(K.generators):
            raise InputError(f"{len(self.matrices)} matrices for {len(K.generators)} generators")
        space = space or self.space
        images = [space.linear(M) for M in self.matrices]
        return GroupHom(K, PermGroup(space.size, images), images)

    def element_matrices(self, K: PermGroup) -> Dict[Permutation, np.ndarray]:
        """Matrix of every element of K, spread along the Cayley graph"""
        table = {K.identity: _identity_matrix(self.dim)}
        queue = [K.identity]
        for g in queue:
            for gen, X in zip(K.generators, self.matrices):
                h = g * gen
                if h not in table:
                    table[h] = table[g] @ X % self.modulus
                    queue.append(h)
        return table

    def to_dict(self) -> Dict:
        return {"dim": self.dim, "modulus": self.modulus,
                "matrices": [M.tolist() for M in self.matrices]}


def certify_fpf(action: MatrixAction, K: PermGroup, exclude: Optional[ElementFilter] = None) -> bool:
    """Every nontrivial element outside exclude has M - I invertible, checked by exact determinants"""
    for g, M in action.element_matrices(K).items():
        if g.is_identity() or (exclude is not None and exclude(g)):
            continue
        if not fixes_only_zero(M, action.modulus):
            logger.debug(f"{g} fixes a nonzero vector of (Z/{action.modulus})^{action.dim}")
            return False
    return True


def exclude_two_elements(x: Permutation) -> bool:
    return is_p_element(x, 2)


# ---------------------------------------------------------------------------
# Fixed-point-free action search
# ---------------------------------------------------------------------------

class _FpfSearch:
    """Lexicographic backtracking over generator images in GL(dim, Z/modulus)"""

    def __init__(self, K: PermGroup, dim: int, modulus: int,
                 exclude: Optional[ElementFilter], budget: int):
        self.K = K
        self.dim = dim
        self.modulus = modulus
        self.exclude = exclude
        self.budget = budget
        self.spent = 0
        self.space = VectorSpace(dim, modulus)
        self.identity = _identity_matrix(dim)
        self.gens = list(K.generators)
        self.elements = list(K.elements())
        self._candidates: Dict[Tuple, np.ndarray] = {}

    @property
    def faithful(self) -> bool:
        # With nothing excluded every nontrivial element moves a vector
        return self.exclude is None

    def _excluded(self, g: Permutation) -> bool:
        return self.exclude is not None and self.exclude(g)

    def _charge(self, amount: int):
        self.spent += amount
        if self.spent > self.budget:
            raise SearchExhaustedError("fixed-point-free search exhausted its budget", self.spent, self.budget)

    def _fixes_only_zero_batch(self, P: np.ndarray) -> np.ndarray:
        vectors = self.space.vectors
        images = (vectors @ P) % self.modulus
        return (images == vectors).all(axis=2).sum(axis=1) == 1

    def _candidate_matrices(self, g: Permutation) -> np.ndarray:
        """Matrices X with X^|g| = I that are fixed-point-free on the required powers of g"""
        n = g.order()
        required = tuple(not self._excluded(g ** k) for k in range(1, n))
        key = (n, required)
        if key in self._candidates:
            return self._candidates[key]

        m, d = self.modulus, self.dim
        total = m ** (d * d)
        self._charge(total)
        kept = []
        for start in range(0, total, CANDIDATE_CHUNK):
            flat = np.arange(start, min(start + CANDIDATE_CHUNK, total), dtype=np.int64)
            X = np.stack(np.unravel_index(flat, (m,) * (d * d)), axis=-1).reshape(-1, d, d).astype(np.int64)
            mask = np.ones(len(X), dtype=bool)
            power = X.copy()
            for must_be_free in required:
                if must_be_free:
                    mask &= self._fixes_only_zero_batch(power)
                power = power @ X % m
            mask &= (power == self.identity).all(axis=(1, 2))
            kept.append(X[mask])
        candidates = np.concatenate(kept) if kept else np.zeros((0, d, d), dtype=np.int64)
        self._candidates[key] = candidates
        StructuredLogger.log_search("candidates", f"{len(candidates)} candidates for an element of order {n}",
                                    dim=d, modulus=m)
        return candidates

    def _consistent(self, chosen: Dict[int, np.ndarray], i: int, X: np.ndarray) -> bool:
        self._charge(1)
        m = self.modulus
        gi = self.gens[i]
        for j, Y in chosen.items():
            gj = self.gens[j]
            commute_g = gj.commutes_with(gi)
            commute_m = np.array_equal(Y @ X % m, X @ Y % m)
            if commute_g and not commute_m:
                return False
            if self.faithful and commute_m and not commute_g:
                return False
            word = gj * gi
            P = Y @ X % m
            matrix_order = _matrix_order(P, m)
            if self.faithful and matrix_order != word.order():
                return False
            if word.order() % matrix_order:
                return False
            if not word.is_identity() and not self._excluded(word):
                if not self._fixes_only_zero_batch(P[np.newaxis])[0]:
                    return False
        return True

    def _leaf(self, chosen: Dict[int, np.ndarray]) -> Optional[MatrixAction]:
        action = MatrixAction(self.dim, self.modulus, tuple(chosen[i] for i in range(len(self.gens))))
        try:
            hom = action.homomorphism(self.K, self.space)
        except NotAHomomorphismError:
            return None
        for g in self.elements:
            if g.is_identity() or self._excluded(g):
                continue
            image = hom(g)
            if sum(1 for x, y in enumerate(image.images) if x == y) != 1:
                return None
        return action

    def run(self) -> Optional[MatrixAction]:
        # Generators with the fewest commuting partners are placed first
        order = sorted(range(len(self.gens)),
                       key=lambda i: sum(self.gens[i].commutes_with(h) for h in self.gens))
        chosen: Dict[int, np.ndarray] = {}

        def extend(position: int) -> Optional[MatrixAction]:
            if position == len(order):
                return self._leaf(chosen)
            i = order[position]
            for X in self._candidate_matrices(self.gens[i]):
                if self._consistent(chosen, i, X):
                    chosen[i] = X
                    found = extend(position + 1)
                    if found is not None:
                        return found
                    del chosen[i]
            return None

        return extend(0)


@log_performance_metrics
def fpf_search(K: PermGroup, dim: int, modulus: int, exclude: Optional[ElementFilter] = None,
               budget: Optional[int] = None) -> Optional[MatrixAction]:
    """A MatrixAction of K on (Z/modulus)^dim in which no nontrivial element outside exclude fixes a nonzero vector

    Returns None when the search space holds no such action. Raises
    SearchExhaustedError when the budget runs out first. Dimensions whose
    full matrix space exceeds the budget are assembled as block sums of
    smaller solutions.
    """
    budget = get_bounds().search_budget if budget is None else budget
    space_size = modulus ** (dim * dim)
    if space_size > budget and dim > 1:
        half = dim // 2
        StructuredLogger.log_search("block", f"splitting dimension {dim} into {half} + {dim - half}",
                                    modulus=modulus)
        left = fpf_search(K, half, modulus, exclude, budget)
        right = fpf_search(K, dim - half, modulus, exclude, budget) if left is not None else None
        if left is None or right is None:
            raise SearchExhaustedError(
                f"no block solution in dimension {dim}; the full space is beyond the budget",
                space_size, budget,
            )
        action = left.block_sum(right)
    else:
        action = _FpfSearch(K, dim, modulus, exclude, budget).run()
        if action is None:
            StructuredLogger.log_search("none", f"no action of {K.name or 'K'} on (Z/{modulus})^{dim}")
            return None

    if not certify_fpf(action, K, exclude):
        raise ConstructionError(f"search result on (Z/{modulus})^{dim} failed determinant certification")
    StructuredLogger.log_search("found", f"action of {K.name or 'K'} on (Z/{modulus})^{dim}",
                                matrices=[M.tolist() for M in action.matrices])
    return action


# ---------------------------------------------------------------------------
# Semidirect products
# ---------------------------------------------------------------------------

@dataclass
class SemidirectProduct:
    """V x| K realised on the points of V, plus K's own points when K acts unfaithfully"""
    group: PermGroup
    translations: PermGroup
    complement: PermGroup
    action: MatrixAction
    space: VectorSpace
    faithful: bool

    def order(self) -> int:
        """|V| times |K| without building a chain over all of V"""
        return self.space.size * self.complement.order()


def build_semidirect(action: MatrixAction, K: PermGroup, copies: int = 1,
                     name: Optional[str] = None) -> SemidirectProduct:
    block = action.repeated(copies)
    space = block.space
    hom = block.homomorphism(K, space)
    faithful = hom.kernel().order() == 1

    translations = [space.translation(e) for e in space.basis()]
    linear = list(hom.images)
    if faithful:
        degree = space.size
        t_gens, c_gens = translations, linear
    else:
        degree = space.size + K.degree
        t_gens = [t.direct_sum(Permutation.identity(K.degree)) for t in translations]
        c_gens = [lin.direct_sum(k) for lin, k in zip(linear, K.generators)]
        logger.debug(f"{K.name or 'K'} acts unfaithfully; appending its {K.degree} points")

    label = name or f"({block.modulus}^{block.dim}):{K.name or 'K'}"
    return SemidirectProduct(
        group=PermGroup(degree, t_gens + c_gens, name=label),
        translations=PermGroup(degree, t_gens),
        complement=PermGroup(degree, c_gens),
        action=block,
        space=space,
        faithful=faithful,
    )


def semidirect(action: MatrixAction, K: PermGroup, copies: int = 1) -> PermGroup:
    return build_semidirect(action, K, copies).group


# ---------------------------------------------------------------------------
# Example families
# ---------------------------------------------------------------------------

def _require_prime(p: int, label: str = "p"):
    if not isprime(p):
        raise InputError(f"{label} must be prime, got {p}")


def build_example1(K: PermGroup, p: int, copies: int = 1, max_dim: int = 4) -> SemidirectProduct:
    """(Z/p)^d x| K for the least d admitting a fixed-point-free action"""
    _require_prime(p)
    if K.order() % p == 0:
        raise InputError(f"p = {p} divides |K| = {K.order()}")
    if not is_cyclic(K) and decompose_cyclic_odd_times_quaternion(K) is None:
        raise InputError("K must be cyclic or (cyclic of odd order) x (generalized quaternion)")
    for d in range(1, max_dim + 1):
        action = fpf_search(K, d, p)
        if action is not None:
            logger.debug(f"least fixed-point-free dimension for {K.name or 'K'} over Z/{p} is {d}")
            name = f"example1({K.name or 'K'},{p})" + (f"^{copies}" if copies > 1 else "")
            return build_semidirect(action, K, copies, name=name)
    raise ConstructionError(f"no fixed-point-free action of {K.name or 'K'} over Z/{p} up to dimension {max_dim}")


def example1(K: PermGroup, p: int, copies: int = 1) -> PermGroup:
    return build_example1(K, p, copies).group


def example2(m: int, k: int) -> PermGroup:
    """(Z/2)^k x| D_2m with the odd-order elements acting fixed-point-freely"""
    if m < 3 or m % 2 == 0:
        raise InputError(f"m must be odd and at least 3, got {m}")
    D = dihedral_group(m)
    action = fpf_search(D, k, 2, exclude=exclude_two_elements)
    if action is None:
        raise ConstructionError(f"D{2 * m} has no action on (Z/2)^{k} with fixed-point-free odd elements")
    return build_semidirect(action, D, name=f"example2({m},{k})").group


def example4_a5() -> PermGroup:
    """(Z/2)^4 x| A5 with every element of odd order fixed-point-free"""
    A5 = alternating_group(5)
    action = fpf_search(A5, 4, 2, exclude=exclude_two_elements)
    if action is None:
        raise ConstructionError("A5 has no 2'-semiregular action on (Z/2)^4")
    return build_semidirect(action, A5, name="example4_a5").group


def negative_frobenius_sl23(p: int = 7) -> PermGroup:
    """(Z/p)^2 x| SL(2,3) with SL(2,3) acting fixed-point-freely; not CN"""
    _require_prime(p)
    if p < 5:
        raise InputError(f"p must be at least 5, got {p}")
    K = sl23()
    action = fpf_search(K, 2, p)
    if action is None:
        raise ConstructionError(f"SL(2,3) has no fixed-point-free action on (Z/{p})^2")
    return build_semidirect(action, K, name=f"negative_frobenius_sl23({p})").group


@dataclass(eq=False)
class HurwitzUnits:
    """Left multiplication by the 24 Hurwitz units on the basis 1, i, j, (1+i+j+k)/2"""
    matrices: List[np.ndarray]
    a: np.ndarray
    d: np.ndarray


def hurwitz_unit_matrices() -> HurwitzUnits:
    half = Rational(1, 2)
    basis = [Quaternion(1, 0, 0, 0), Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0),
             Quaternion(half, half, half, half)]
    to_basis = Matrix([[q.a, q.b, q.c, q.d] for q in basis]).inv()

    def matrix(u: Quaternion) -> np.ndarray:
        rows = []
        for b in basis:
            q = u * b
            coords = Matrix([[q.a, q.b, q.c, q.d]]) * to_basis
            rows.append([int(x) for x in coords])
        return np.array(rows, dtype=np.int64)

    units = []
    for sign, axis in product((1, -1), range(4)):
        coords = [0, 0, 0, 0]
        coords[axis] = sign
        units.append(Quaternion(*coords))
    for signs in product((half, -half), repeat=4):
        units.append(Quaternion(*signs))

    a = Quaternion(0, 1, 0, 0)
    d = Quaternion(-half, half, half, half)
    return HurwitzUnits([matrix(u) for u in units], matrix(a), matrix(d))


@dataclass
class Example3Result:
    group: PermGroup
    normal: PermGroup
    quotient: PermGroup
    quotient_is_sl23: bool
    normal_primes: List[int]
    is_cn: Optional[bool] = None

    def to_dict(self) -> Dict:
        return {
            "group_order": self.group.order(),
            "normal_order": self.normal.order(),
            "quotient_order": self.quotient.order(),
            "quotient_is_sl23": self.quotient_is_sl23,
            "normal_primes": list(self.normal_primes),
            "is_cn": self.is_cn,
        }


@log_performance_metrics
def example3(p: int, n: int = 1, v: Optional[Sequence[int]] = None,
             compute_cn: bool = False) -> Example3Result:
    """<va, d, V_p> inside (V_p + V_2) x| SL(2,3), with the Hurwitz action reduced mod p and mod 2^n

    Points are V_p = (Z/p)^4 followed by V_2 = (Z/2^n)^4.
    """
    _require_prime(p)
    if p in (2, 3):
        raise InputError(f"p must be an odd prime other than 3, got {p}")
    if n < 1:
        raise InputError(f"truncation level n must be positive, got {n}")
    v = list(v) if v is not None else [1, 0, 0, 0]
    if len(v) != 4 or all(x % (2 ** n) == 0 for x in v):
        raise InputError("v must be a nonzero element of V_2")

    limit = get_bounds().max_degree
    degree = p ** 4 + 2 ** (4 * n)
    if degree > limit:
        raise DegreeBoundError("example3 point set too large", degree, limit)

    units = hurwitz_unit_matrices()
    odd_space = VectorSpace(4, p)
    two_space = VectorSpace(4, 2 ** n)
    odd_fixed = Permutation.identity(odd_space.size)
    two_fixed = Permutation.identity(two_space.size)

    def linear(M: np.ndarray) -> Permutation:
        return odd_space.linear(M % p).direct_sum(two_space.linear(M % (2 ** n)))

    def two_translation(w: Sequence[int]) -> Permutation:
        return odd_fixed.direct_sum(two_space.translation(w))

    odd_translations = [odd_space.translation(e).direct_sum(two_fixed) for e in odd_space.basis()]
    va = two_translation(v) * linear(units.a)
    G = PermGroup(degree, [va, linear(units.d)] + odd_translations, name=f"example3({p},{n})")

    in_group = [t for t in (two_translation(w) for w in two_space.vectors[1:]) if G.contains(t)]
    N = closure(degree, in_group + odd_translations)
    Q, _ = coset_action(G, N)
    result = Example3Result(
        group=G,
        normal=N,
        quotient=Q,
        quotient_is_sl23=is_sl23(Q),
        normal_primes=prime_divisors(N.order()),
    )
    if compute_cn:
        from cn_groups.cn_classifier import is_cn
        result.is_cn = bool(is_cn(G))
    logger.debug(f"example3({p},{n}): |G| = {G.order()}, |N| = {N.order()}")
    return result


def heisenberg_fpf_instance(p: int = 7) -> Tuple[PermGroup, PermGroup, PermGroup]:
    """(ambient, target, actors): unitriangular 3x3 over Z/p with diag(1, r, r^2), r of order 3

    All three act linearly on (Z/p)^3.
    """
    _require_prime(p)
    if (p - 1) % 3:
        raise InputError(f"Z/{p} has no element of order 3")
    r = next(x for x in range(2, p) if pow(x, 3, p) == 1)
    upper_12 = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
    upper_23 = [[1, 0, 0], [0, 1, 1], [0, 0, 1]]
    diagonal = [[1, 0, 0], [0, r, 0], [0, 0, r * r % p]]
    space = VectorSpace(3, p)
    target_gens = [space.linear(np.array(M, dtype=np.int64)) for M in (upper_12, upper_23)]
    actor = space.linear(np.array(diagonal, dtype=np.int64))
    ambient = PermGroup(space.size, target_gens + [actor], name=f"Heis({p}):C3")
    return ambient, PermGroup(space.size, target_gens, name=f"Heis({p})"), PermGroup(space.size, [actor], name="C3")
