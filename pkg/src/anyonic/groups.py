"""Finite permutation group engine.

Everything downstream (word synthesis, braid simulation, the logical gate
layer) works over groups represented here: permutations on up to 32 points,
fully enumerated with a canonical element order. The desk-scale cap
|G| <= 20000 keeps every structural computation (conjugacy classes, normal
closures, derived series, quotients) exhaustive.

Composition convention: ``(g*h)(x) = g(h(x))`` -- the right factor acts
first. All published cycle products embedded in tests are re-derived under
this convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

MAX_DEGREE = 32
MAX_ORDER = 20000

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)


class GroupError(ValueError):
    """Structural error: bad permutation, degree mismatch, scale cap."""


class SolvableGroupError(GroupError):
    """Raised when a perfect/simple quotient is requested of a solvable group."""


class NoSuchParametersError(GroupError):
    """No qudit parameters (a, b, d) exist with the requested d."""


class NotRepresentableError(GroupError):
    """A quotient admits no faithful permutation action of degree <= 32."""


@dataclass(frozen=True)
class GroupElement:
    """A permutation on {0..k-1}, stored as its image tuple."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        k = len(self.images)
        if not 1 <= k <= MAX_DEGREE:
            raise GroupError(f"degree {k} outside [1, {MAX_DEGREE}]")
        if sorted(self.images) != list(range(k)):
            raise GroupError(f"not a bijection on 0..{k - 1}: {self.images}")

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.degree != other.degree:
            raise GroupError(
                f"degree mismatch: {self.degree} vs {other.degree}"
            )
        return GroupElement(tuple(self.images[other.images[x]] for x in range(self.degree)))

    def inverse(self) -> "GroupElement":
        inv = [0] * self.degree
        for x, y in enumerate(self.images):
            inv[y] = x
        return GroupElement(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == x for x, i in enumerate(self.images))

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Nontrivial cycles, each rotated min-first, sorted by first point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start] or self.images[start] == start:
                seen[start] = True
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = self.images[x]
            out.append(tuple(cyc))
        return tuple(sorted(out))

    def cycle_key(self) -> tuple:
        """Ordering key matching written cycle notation, e.g. (12)(34) < (12)(45)."""
        return self.cycles()

    def __str__(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(p + 1) for p in c) + ")" for c in cycs)


def identity(degree: int) -> GroupElement:
    return GroupElement(tuple(range(degree)))


def _compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(a[b[x]] for x in range(len(a)))


def _invert(a: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(a)
    for x, y in enumerate(a):
        inv[y] = x
    return tuple(inv)


class FiniteGroup:
    """Fully enumerated permutation group with canonical element indices.

    Elements are addressed by their index in ``self.elements`` (sorted by
    image tuple). Hot paths use indices; ``GroupElement`` objects appear at
    API boundaries.
    """

    def __init__(self, generators: Sequence[GroupElement], name: str = ""):
        if not generators:
            raise GroupError("need at least one generator")
        degree = generators[0].degree
        for g in generators:
            if g.degree != degree:
                raise GroupError("generators have mixed degrees")
        self.degree = degree
        self.name = name
        elems = _enumerate_closure([g.images for g in generators], degree)
        self.elements: list[GroupElement] = [GroupElement(t) for t in sorted(elems)]
        self._index: dict[tuple[int, ...], int] = {
            e.images: i for i, e in enumerate(self.elements)
        }
        self.generators: list[GroupElement] = list(generators)
        self.gen_indices: list[int] = [self._index[g.images] for g in generators]
        self.identity_index: int = self._index[tuple(range(degree))]
        self._inv: list[int] = [
            self._index[_invert(e.images)] for e in self.elements
        ]
        self._mul_table: np.ndarray | None = None
        self._classes: list[tuple[int, ...]] | None = None
        self._class_of: list[int] | None = None
        self._orders: list[int] | None = None

    # -- basic arithmetic (index level) -------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def index_of(self, g: GroupElement) -> int:
        try:
            return self._index[g.images]
        except KeyError:
            raise GroupError(f"{g} is not an element of {self.describe()}") from None

    def __contains__(self, g: GroupElement) -> bool:
        return g.images in self._index

    def element(self, i: int) -> GroupElement:
        return self.elements[i]

    def mul(self, i: int, j: int) -> int:
        mt = self._mul_table
        if mt is not None:
            return int(mt[i, j])
        return self._index[_compose(self.elements[i].images, self.elements[j].images)]

    def inv(self, i: int) -> int:
        return self._inv[i]

    def conj(self, g: int, by: int) -> int:
        """(by) g (by)^-1."""
        return self.mul(self.mul(by, g), self._inv[by])

    def commutator(self, i: int, j: int) -> int:
        return self.mul(self.mul(i, j), self.mul(self._inv[i], self._inv[j]))

    def mul_table(self) -> np.ndarray:
        """Dense |G| x |G| product table (built lazily; |G| <= 2048 only)."""
        if self._mul_table is None:
            n = len(self.elements)
            if n > 2048:
                raise GroupError(f"mul_table too large for |G|={n}")
            table = np.empty((n, n), dtype=np.int32)
            images = [e.images for e in self.elements]
            for i in range(n):
                gi = images[i]
                row = [self._index[_compose(gi, images[j])] for j in range(n)]
                table[i] = row
            self._mul_table = table
        return self._mul_table

    def inv_table(self) -> np.ndarray:
        return np.asarray(self._inv, dtype=np.int32)

    def element_order(self, i: int) -> int:
        if self._orders is None:
            self._orders = [0] * len(self.elements)
        if self._orders[i] == 0:
            n, x = 1, i
            while x != self.identity_index:
                x = self.mul(x, i)
                n += 1
            self._orders[i] = n
        return self._orders[i]

    def power(self, i: int, n: int) -> int:
        n %= self.element_order(i)
        acc = self.identity_index
        for _ in range(n):
            acc = self.mul(acc, i)
        return acc

    def describe(self) -> str:
        return self.name or f"<group of order {len(self)} on {self.degree} points>"

    # -- conjugacy structure --------------------------------------------------

    def conjugacy_classes(self) -> list[tuple[int, ...]]:
        """Partition of element indices into conjugacy classes (sorted)."""
        if self._classes is None:
            n = len(self.elements)
            class_of = [-1] * n
            classes: list[tuple[int, ...]] = []
            for start in range(n):
                if class_of[start] >= 0:
                    continue
                orbit = {start}
                frontier = [start]
                while frontier:
                    x = frontier.pop()
                    for g in self.gen_indices:
                        y = self.conj(x, g)
                        if y not in orbit:
                            orbit.add(y)
                            frontier.append(y)
                cid = len(classes)
                members = tuple(sorted(orbit))
                classes.append(members)
                for m in members:
                    class_of[m] = cid
            self._classes = classes
            self._class_of = class_of
        return self._classes

    def class_of(self, i: int) -> int:
        self.conjugacy_classes()
        assert self._class_of is not None
        return self._class_of[i]

    def class_members(self, i: int) -> tuple[int, ...]:
        return self.conjugacy_classes()[self.class_of(i)]

    def centralizer(self, i: int) -> tuple[int, ...]:
        return tuple(
            j for j in range(len(self.elements)) if self.mul(i, j) == self.mul(j, i)
        )

    # -- subgroup machinery ---------------------------------------------------

    def subgroup(self, gens: Iterable[int]) -> "Subgroup":
        gens = list(gens)
        members = self._closure_indices(gens)
        return Subgroup(self, frozenset(members), tuple(gens))

    def _closure_indices(self, gens: Sequence[int]) -> set[int]:
        members = {self.identity_index}
        frontier = [self.identity_index]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.mul(x, g)
                if y not in members:
                    members.add(y)
                    frontier.append(y)
        return members

    def normal_closure(self, seeds: Iterable[int]) -> "Subgroup":
        """Smallest normal subgroup containing the seed elements."""
        gens = [s for s in seeds if s != self.identity_index]
        members = self._closure_indices(gens)
        changed = True
        while changed:
            changed = False
            for g in self.gen_indices:
                for x in list(members):
                    y = self.conj(x, g)
                    if y not in members:
                        gens.append(y)
                        members = self._closure_indices(gens)
                        changed = True
        return Subgroup(self, frozenset(members), tuple(gens))

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, frozenset({self.identity_index}), ())

    def full_subgroup(self) -> "Subgroup":
        return Subgroup(self, frozenset(range(len(self.elements))), tuple(self.gen_indices))


@dataclass(frozen=True)
class Subgroup:
    """Member set of a subgroup of ``parent``, with a generating subset."""

    parent: FiniteGroup
    members: frozenset[int]
    gens: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, i: int) -> bool:
        return i in self.members

    def is_trivial(self) -> bool:
        return len(self.members) == 1

    def is_full(self) -> bool:
        return len(self.members) == len(self.parent.elements)

    def is_normal_in_parent(self) -> bool:
        G = self.parent
        return all(
            G.conj(x, g) in self.members for g in G.gen_indices for x in self.members
        )

    def is_normal_in(self, other: "Subgroup") -> bool:
        G = self.parent
        gens = other.gens or tuple(other.members)
        return all(G.conj(x, g) in self.members for g in gens for x in self.members)

    def generating_set(self) -> tuple[int, ...]:
        if self.gens:
            return self.gens
        return tuple(sorted(self.members))

    def derived(self) -> "Subgroup":
        """Commutator subgroup [H, H], as the closure of generator commutators
        conjugated back into H (the commutator subgroup is the H-normal closure
        of the generator commutators)."""
        G = self.parent
        gens = self.generating_set()
        seeds = {G.commutator(a, b) for a in gens for b in gens}
        seeds.discard(G.identity_index)
        closure_gens = [s for s in seeds]
        members = G._closure_indices(closure_gens)
        changed = True
        while changed:
            changed = False
            for g in gens:
                for x in list(members):
                    y = G.conj(x, g)
                    if y not in members:
                        closure_gens.append(y)
                        members = G._closure_indices(closure_gens)
                        changed = True
        return Subgroup(G, frozenset(members), tuple(closure_gens))


def _enumerate_closure(gens: list[tuple[int, ...]], degree: int) -> set[tuple[int, ...]]:
    ident = tuple(range(degree))
    members = {ident}
    frontier = [ident]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = _compose(x, g)
            if y not in members:
                if len(members) >= MAX_ORDER:
                    raise GroupError(f"group order exceeds desk-scale cap {MAX_ORDER}")
                members.add(y)
                frontier.append(y)
    return members


# -- structural analysis -----------------------------------------------------


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """g*h under the fixed convention (h applied first)."""
    return g * h


def derived_series(G: FiniteGroup) -> list[Subgroup]:
    """[G, G^(1), G^(2), ...] until stabilization."""
    series = [G.full_subgroup()]
    while True:
        nxt = series[-1].derived()
        if nxt.members == series[-1].members:
            break
        series.append(nxt)
        if nxt.is_trivial():
            break
    return series


def is_solvable(G: FiniteGroup) -> bool:
    return derived_series(G)[-1].is_trivial()


def is_perfect(G: FiniteGroup) -> bool:
    return len(G) > 1 and G.full_subgroup().derived().is_full()


def is_simple(G: FiniteGroup) -> bool:
    """True iff every non-identity class generates G as a normal subgroup.

    The trivial group is not simple by convention (a simple group must be
    nontrivial).
    """
    if len(G) == 1:
        return False
    for cls in G.conjugacy_classes():
        rep = cls[0]
        if rep == G.identity_index:
            continue
        if not G.normal_closure([rep]).is_full():
            return False
    return True


def all_normal_subgroups(G: FiniteGroup) -> list[frozenset[int]]:
    """Every normal subgroup, as the join-closure of single-class closures.

    Exhaustive; intended for |G| <= 400 oracle checks and the maximal-N
    search inside quotient extraction. Joins are generated from the tracked
    small generating sets, never from full member unions.
    """
    base: dict[frozenset[int], tuple[int, ...]] = {
        frozenset({G.identity_index}): ()
    }
    for cls in G.conjugacy_classes():
        rep = cls[0]
        if rep == G.identity_index:
            continue
        sub = G.normal_closure([rep])
        base.setdefault(sub.members, sub.gens)
    result = dict(base)
    frontier = list(base.items())
    while frontier:
        a_members, a_gens = frontier.pop()
        for b_members, b_gens in list(result.items()):
            if a_members <= b_members or b_members <= a_members:
                continue
            join = G.subgroup(a_gens + b_gens)
            if join.members not in result:
                result[join.members] = join.gens
                frontier.append((join.members, join.gens))
    return sorted(result, key=lambda s: (len(s), tuple(sorted(s))))


def _normal_subgroups_of(G: FiniteGroup, H: Subgroup) -> list[frozenset[int]]:
    """Normal subgroups of the subgroup H (normality w.r.t. H, not G)."""
    hmem = sorted(H.members)
    hset = H.members
    hgens = H.generating_set()

    def closure(gens: list[int]) -> set[int]:
        members = {G.identity_index}
        frontier = [G.identity_index]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = G.mul(x, g)
                if y not in members:
                    members.add(y)
                    frontier.append(y)
        return members

    def h_normal_closure(seed: int) -> tuple[frozenset[int], tuple[int, ...]]:
        gens = [seed]
        members = closure(gens)
        changed = True
        while changed:
            changed = False
            for g in hgens:
                for x in list(members):
                    y = G.conj(x, g)
                    if y not in members:
                        gens.append(y)
                        members = closure(gens)
                        changed = True
        return frozenset(members), tuple(gens)

    # H-conjugacy class representatives inside H
    seen: set[int] = set()
    reps = []
    for x in hmem:
        if x in seen:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            y = frontier.pop()
            for g in hgens:
                z = G.conj(y, g)
                if z not in orbit:
                    orbit.add(z)
                    frontier.append(z)
        seen |= orbit
        reps.append(x)

    base: dict[frozenset[int], tuple[int, ...]] = {
        frozenset({G.identity_index}): ()
    }
    for rep in reps:
        if rep == G.identity_index:
            continue
        nc, nc_gens = h_normal_closure(rep)
        if nc <= hset:
            base.setdefault(nc, nc_gens)
    result = dict(base)
    frontier2 = list(base.items())
    while frontier2:
        a_members, a_gens = frontier2.pop()
        for b_members, b_gens in list(result.items()):
            if a_members <= b_members or b_members <= a_members:
                continue
            join_gens = tuple(a_gens) + tuple(b_gens)
            join = frozenset(closure(list(join_gens)))
            if join <= hset and join not in result:
                result[join] = join_gens
                frontier2.append((join, join_gens))
    return sorted(result, key=lambda s: (len(s), tuple(sorted(s))))


# -- quotient extraction -------------------------------------------------------


@dataclass
class CosetContext:
    """The (G, P, N, P/N, epimorphism) bundle for the non-solvable case.

    ``epi`` maps element indices of P (in G's indexing) to element indices of
    ``quotient``. ``fibers[q]`` lists the G-indices in f^-1(q), sorted.
    """

    group: FiniteGroup
    perfect: Subgroup
    kernel: Subgroup
    quotient: FiniteGroup
    epi: dict[int, int]
    fibers: list[tuple[int, ...]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.fibers:
            fibers: list[list[int]] = [[] for _ in range(len(self.quotient))]
            for g, q in self.epi.items():
                fibers[q].append(g)
            self.fibers = [tuple(sorted(f)) for f in fibers]

    def lift(self, q: int) -> int:
        """Canonical (smallest-index) lift of quotient element q into P."""
        return self.fibers[q][0]

    def fiber(self, q: int) -> tuple[int, ...]:
        return self.fibers[q]

    @property
    def is_degenerate(self) -> bool:
        """N = {1}: rho_x states are flux eigenstates, quotient == P."""
        return self.kernel.is_trivial()


def trivial_context(G: FiniteGroup) -> CosetContext:
    """Degenerate context for a group used directly (P = G, N = {1})."""
    return CosetContext(
        group=G,
        perfect=G.full_subgroup(),
        kernel=G.trivial_subgroup(),
        quotient=G,
        epi={i: i for i in range(len(G))},
    )


def simple_perfect_quotient(G: FiniteGroup) -> CosetContext:
    """Extract P (stabilized derived term), a maximal proper normal N of P,
    and the perfect simple quotient P/N with its epimorphism."""
    series = derived_series(G)
    P = series[-1]
    if P.is_trivial():
        raise SolvableGroupError(f"{G.describe()} is solvable")

    normals = _normal_subgroups_of(G, P)
    proper = [n for n in normals if len(n) < len(P.members)]
    max_size = max(len(n) for n in proper)
    N_members = min(
        (n for n in proper if len(n) == max_size), key=lambda s: tuple(sorted(s))
    )
    N = Subgroup(G, N_members, tuple(sorted(N_members)))

    if N.is_trivial():
        # Quotient is P itself; represent it on the parent's points.
        pgens = [G.elements[i] for i in P.generating_set()]
        Q = FiniteGroup(pgens, name=f"{G.describe()}^(inf)")
        epi = {i: Q.index_of(G.elements[i]) for i in P.members}
    else:
        Q, epi = _quotient_group(G, P, N)

    ctx = CosetContext(group=G, perfect=P, kernel=N, quotient=Q, epi=epi)
    if not (is_perfect(Q) and is_simple(Q)):
        raise GroupError("quotient failed perfect/simple verification")
    return ctx


def _quotient_group(
    G: FiniteGroup, P: Subgroup, N: Subgroup
) -> tuple[FiniteGroup, dict[int, int]]:
    """Build P/N as a permutation group of degree <= 32.

    Cosets of N in P form the abstract quotient; it is re-represented as the
    action on cosets of the largest proper subgroup found among closures of
    class-representative pairs.
    """
    pmem = sorted(P.members)
    coset_of: dict[int, int] = {}
    coset_reps: list[int] = []
    for x in pmem:
        if x in coset_of:
            continue
        cid = len(coset_reps)
        coset_reps.append(x)
        for n in N.members:
            coset_of[G.mul(x, n)] = cid
    m = len(coset_reps)

    def qmul(a: int, b: int) -> int:
        return coset_of[G.mul(coset_reps[a], coset_reps[b])]

    def qinv(a: int) -> int:
        return coset_of[G.inv(coset_reps[a])]

    # abstract conjugacy class representatives of the quotient
    qident = coset_of[G.identity_index]
    seen: set[int] = set()
    qreps: list[int] = []
    for x in range(m):
        if x in seen:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            y = frontier.pop()
            for g in range(m):
                z = qmul(qmul(g, y), qinv(g))
                if z not in orbit:
                    orbit.add(z)
                    frontier.append(z)
        seen |= orbit
        qreps.append(x)

    def qclosure(gens: list[int]) -> set[int]:
        members = {qident}
        frontier = [qident]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = qmul(x, g)
                if y not in members:
                    members.add(y)
                    frontier.append(y)
        return members

    # largest proper subgroup among closures of class-rep pairs
    best: set[int] = {qident}
    for i, a in enumerate(qreps):
        for b in qreps[i:]:
            sub = qclosure([a, b])
            if len(best) < len(sub) < m:
                best = sub
    index = m // len(best)
    if index > MAX_DEGREE:
        raise NotRepresentableError(
            f"quotient of order {m} has no found action of degree <= {MAX_DEGREE}"
        )

    # cosets of `best` (points of the new action), canonically ordered
    point_of: dict[int, int] = {}
    points: list[frozenset[int]] = []
    for x in range(m):
        if x in point_of:
            continue
        cos = frozenset(qmul(x, h) for h in best)
        pid = len(points)
        points.append(cos)
        for y in cos:
            point_of[y] = pid
    order_key = sorted(range(len(points)), key=lambda p: min(points[p]))
    relabel = {old: new for new, old in enumerate(order_key)}

    def action(a: int) -> GroupElement:
        images = [0] * len(points)
        for pid, cos in enumerate(points):
            x = min(cos)
            images[relabel[pid]] = relabel[point_of[qmul(a, x)]]
        return GroupElement(tuple(images))

    qgens = [coset_of[g] for g in (P.generating_set() or pmem)]
    Q = FiniteGroup([action(g) for g in qgens], name="P/N")
    if len(Q) != m:
        raise NotRepresentableError("coset action is not faithful")
    epi = {x: Q.index_of(action(coset_of[x])) for x in pmem}
    return Q, epi


# -- qudit parameters ----------------------------------------------------------


def find_qudit_params(
    Q: FiniteGroup, prefer_d: int | None = None
) -> tuple[GroupElement, GroupElement, int]:
    """Non-commuting (a, b) with prime d: a^d b a^-d = b, orbit of b under
    a-conjugation of size exactly d.

    a is the smallest order-d element in cycle-notation order (the spec's
    "lexicographically smallest a"); b is the smallest non-commuting element
    in canonical index order, preferring those with (a b a^-1) b^-1 in C(b)
    (keeps the Toffoli helper functions single conjugations). Reproduces the
    A5 choices a=(12)(34), b=(345) for d=2 and a=(123), b=(345) for d=3.
    """
    if prefer_d is not None and prefer_d not in _SMALL_PRIMES:
        raise NoSuchParametersError(f"d must be a small prime, got {prefer_d}")
    primes = [prefer_d] if prefer_d is not None else list(_SMALL_PRIMES)
    n = len(Q)
    by_key = sorted(range(n), key=lambda i: Q.elements[i].cycle_key())
    for d in primes:
        a_candidates = [i for i in by_key if Q.element_order(i) == d]
        for a in a_candidates:
            fallback: int | None = None
            for b in range(n):
                if Q.mul(a, b) == Q.mul(b, a):
                    continue
                # order(a) prime and a,b non-commuting => orbit size exactly d
                if fallback is None:
                    fallback = b
                c = Q.mul(Q.conj(b, a), Q.inv(b))
                if Q.class_of(c) == Q.class_of(b):
                    return Q.elements[a], Q.elements[b], d
            if fallback is not None:
                return Q.elements[a], Q.elements[fallback], d
    raise NoSuchParametersError(
        f"no qudit parameters with d={prefer_d} in {Q.describe()}"
    )


# -- constructors ----------------------------------------------------------------


def cyclic_group(n: int) -> FiniteGroup:
    if not 1 <= n <= MAX_DEGREE:
        raise GroupError(f"cyclic degree {n} out of range")
    images = tuple((i + 1) % n for i in range(n))
    return FiniteGroup([GroupElement(images)], name=f"Z{n}")


def symmetric_group(n: int) -> FiniteGroup:
    if not 2 <= n <= 8:
        raise GroupError("symmetric_group supports 2 <= n <= 8")
    transposition = GroupElement((1, 0) + tuple(range(2, n)))
    cycle = GroupElement(tuple((i + 1) % n for i in range(n)))
    return FiniteGroup([transposition, cycle], name=f"S{n}")


def alternating_group(n: int) -> FiniteGroup:
    if not 3 <= n <= 8:
        raise GroupError("alternating_group supports 3 <= n <= 8")
    three_cycle = GroupElement((1, 2, 0) + tuple(range(3, n)))
    if n == 3:
        return FiniteGroup([three_cycle], name="A3")
    if n % 2 == 1:
        big = GroupElement(tuple((i + 1) % n for i in range(n)))
    else:
        big = GroupElement((0,) + tuple(1 + (i + 1) % (n - 1) for i in range(n - 1)))
    return FiniteGroup([three_cycle, big], name=f"A{n}")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    if G.degree + H.degree > MAX_DEGREE:
        raise GroupError("direct product degree exceeds 32")
    kg, kh = G.degree, H.degree
    gens = []
    for g in G.generators:
        gens.append(GroupElement(g.images + tuple(kg + i for i in range(kh))))
    for h in H.generators:
        gens.append(GroupElement(tuple(range(kg)) + tuple(kg + i for i in h.images)))
    return FiniteGroup(gens, name=f"{G.describe()}x{H.describe()}")


def sl25() -> FiniteGroup:
    """SL(2,5) acting on the 24 nonzero vectors of F5^2."""
    vectors = [(x, y) for x in range(5) for y in range(5) if (x, y) != (0, 0)]
    vindex = {v: i for i, v in enumerate(vectors)}

    def perm(mat: tuple[int, int, int, int]) -> GroupElement:
        a, b, c, d = mat
        images = [0] * 24
        for i, (x, y) in enumerate(vectors):
            images[i] = vindex[((a * x + b * y) % 5, (c * x + d * y) % 5)]
        return GroupElement(tuple(images))

    s = perm((0, 4, 1, 0))   # [[0,-1],[1,0]]
    t = perm((1, 1, 0, 1))   # [[1,1],[0,1]]
    G = FiniteGroup([s, t], name="SL(2,5)")
    assert len(G) == 120
    return G


# -- text format -----------------------------------------------------------------


def parse_cycles(text: str, degree: int | None = None) -> GroupElement:
    """Parse one permutation in cycle notation, e.g. "(1 2)(3 4)" or "(1,2)(3,4)".

    Points are 1-based in text, 0-based internally. With degree=None the
    degree is the largest point mentioned.
    """
    text = text.strip()
    if text in ("()", "", "id"):
        return identity(degree or 1)
    if text.count("(") != text.count(")") or not text.startswith("("):
        raise GroupError(f"malformed cycle text: {text!r}")
    cycles: list[list[int]] = []
    maxpoint = 0
    for chunk in text.replace(")", ")|").split("|"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if not (chunk.startswith("(") and chunk.endswith(")")):
            raise GroupError(f"malformed cycle text: {text!r}")
        body = chunk[1:-1].replace(",", " ")
        pts = [int(tok) for tok in body.split()]
        if len(pts) < 2 or len(set(pts)) != len(pts) or min(pts) < 1:
            raise GroupError(f"bad cycle {chunk!r} in {text!r}")
        maxpoint = max(maxpoint, max(pts))
        cycles.append([p - 1 for p in pts])
    k = degree if degree is not None else maxpoint
    if maxpoint > k:
        raise GroupError(f"point {maxpoint} exceeds degree {k}")
    images = list(range(k))
    # left-to-right product under the fixed convention (rightmost acts first)
    for cyc in cycles:
        cp = list(range(k))
        for idx, p in enumerate(cyc):
            cp[p] = cyc[(idx + 1) % len(cyc)]
        images = [images[cp[x]] for x in range(k)]
    return GroupElement(tuple(images))


def parse_group_spec(text: str) -> FiniteGroup:
    """Semicolon-separated generator list in cycle notation.

    Example: "(1 2)(3 4);(3 4 5)". Raises GroupError with the offending
    generator position on parse failure.
    """
    parts = [p for p in text.split(";") if p.strip()]
    if not parts:
        raise GroupError("empty group spec")
    maxpoint = 0
    for col, part in enumerate(parts, start=1):
        for tok in part.replace("(", " ").replace(")", " ").replace(",", " ").split():
            try:
                maxpoint = max(maxpoint, int(tok))
            except ValueError:
                raise GroupError(f"generator {col}: bad token {tok!r}") from None
    gens = []
    for col, part in enumerate(parts, start=1):
        try:
            gens.append(parse_cycles(part, degree=maxpoint))
        except GroupError as exc:
            raise GroupError(f"generator {col}: {exc}") from None
    return FiniteGroup(gens, name=text)
