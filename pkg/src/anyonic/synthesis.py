"""Synthesis of product-form words for arbitrary functions G^n -> G.

Implements, over any simple non-abelian group:

- expressions of a target element as a product of conjugates of a fixed
  nonidentity element (breadth-first, minimal length);
- point delta functions (value c at one point, identity elsewhere), built by
  induction over the domain with commutator extensions and family shifts;
- multi-point deltas by commutator nesting across input slots;
- full table synthesis as a product of multi-point deltas;
- the optimized two-control Toffoli word (nine elementary conjugations for
  the qubit case).

All programs for one group share a node arena; delta skeletons are cached
per (group, point) and reused across the whole family of values.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from .groups import FiniteGroup, GroupElement, is_simple
from .words import Program, WordBuilder, WordError


class SynthesisUnsupportedError(WordError):
    """Function synthesis requires a simple non-abelian group."""


class MissingEntryError(WordError):
    """The function table is not total on G^n."""


def _cache(G: FiniteGroup) -> dict:
    cache = getattr(G, "_synth_cache", None)
    if cache is None:
        cache = {"builder": WordBuilder(G)}
        G._synth_cache = cache
    return cache


def _builder(G: FiniteGroup) -> WordBuilder:
    return _cache(G)["builder"]


def _require_simple(G: FiniteGroup) -> None:
    cache = _cache(G)
    ok = cache.get("simple_nonabelian")
    if ok is None:
        ok = len(G) > 1 and is_simple(G) and not _is_abelian(G)
        cache["simple_nonabelian"] = ok
    if not ok:
        raise SynthesisUnsupportedError(
            f"{G.describe()} is not simple non-abelian; product-form synthesis "
            "is impossible (split normal subgroups separate no product expression)"
        )


def _is_abelian(G: FiniteGroup) -> bool:
    return all(
        G.mul(a, b) == G.mul(b, a) for a in G.gen_indices for b in G.gen_indices
    )


# -- Step 1: products of conjugates ------------------------------------------------


def _conjugate_bfs(G: FiniteGroup, c: int) -> tuple[list[int], list[tuple[int, int]]]:
    """BFS over right-multiplication by members of C(c).

    Returns (parent edge table): for each element index, (predecessor,
    conjugator x with x c x^-1 = the step value), or (-1, -1) at the identity.
    Minimal-length expressions fall out of BFS order.
    """
    members = G.class_members(c)
    conjugator: dict[int, int] = {}
    for x in range(len(G)):
        v = G.conj(c, x)
        if v not in conjugator:
            conjugator[v] = x
        if len(conjugator) == len(members):
            break
    prev = [-2] * len(G)
    step = [-1] * len(G)
    prev[G.identity_index] = -1
    frontier = [G.identity_index]
    while frontier:
        nxt = []
        for s in frontier:
            for v in members:
                t = G.mul(s, v)
                if prev[t] == -2:
                    prev[t] = s
                    step[t] = conjugator[v]
                    nxt.append(t)
        frontier = nxt
    return prev, list(zip(prev, step))


def conjugator_chain(G: FiniteGroup, c: int, target: int) -> list[int]:
    """x_1..x_m with target = prod_i x_i c x_i^-1, minimal m (BFS).

    Every target is reachable for simple non-abelian G because the class of c
    generates a normal subgroup, which must be all of G.
    """
    _require_simple(G)
    if target == G.identity_index:
        return []
    cache = _cache(G)
    key = ("bfs", c)
    if key not in cache:
        cache[key] = _conjugate_bfs(G, c)
    prev, edges = cache[key]
    if prev[target] == -2:
        raise SynthesisUnsupportedError(
            f"element {target} not reachable from conjugates of {c}"
        )
    chain: list[int] = []
    cur = target
    while cur != G.identity_index:
        p, x = edges[cur]
        chain.append(x)
        cur = p
    chain.reverse()
    return chain


def conjugate_product_expression(
    G: FiniteGroup, c: GroupElement | int, target: GroupElement | int
) -> Program:
    """Arity-1 program h with h(c) = target and h(1) = 1, of the form
    x_1 g x_1^-1 ... x_m g x_m^-1."""
    ci = c if isinstance(c, int) else G.index_of(c)
    ti = target if isinstance(target, int) else G.index_of(target)
    if ci == G.identity_index:
        raise SynthesisUnsupportedError("c must not be the identity")
    b = _builder(G)
    root = _wrap_chain(G, b, conjugator_chain(G, ci, ti), b.input(0))
    return b.program(root, 1)


def _wrap_chain(G: FiniteGroup, b: WordBuilder, chain: Sequence[int], arg: int) -> int:
    """prod_i x_i . arg . x_i^-1 for the conjugator chain, sharing ``arg``."""
    return b.product([b.conjugated(x, arg) for x in chain])


# -- Steps 2-4: point deltas ---------------------------------------------------------


def _delta_core(G: FiniteGroup, bpt: int) -> tuple[int, int]:
    """Skeleton program (node id, value-at-b) for the point b != 1: value 1 on
    all of G - {b}, some fixed nonidentity value at b.

    Induction over G - {1, b}: extend the covered set one element x at a time
    with [y N(g) y^-1, g x^-1], where y conjugates the current value into
    something that fails to commute with b x^-1.
    """
    cache = _cache(G)
    key = ("core", bpt)
    if key in cache:
        return cache[key]
    b = _builder(G)
    ident = G.identity_index
    node = b.input(0)  # N(g) = g: identity on {1}, value b at b
    val = bpt
    for x in range(len(G)):
        if x == ident or x == bpt:
            continue
        bx = G.mul(bpt, G.inv(x))
        # first conjugate of the current value failing to commute with b x^-1;
        # exists because the group has no center and bx != 1
        y = next(
            y
            for y in range(len(G))
            if G.mul(G.conj(val, y), bx) != G.mul(bx, G.conj(val, y))
        )
        d = G.conj(val, y)
        node = b.commutator(
            b.conjugated(y, node), b.concat(b.input(0), b.const(G.inv(x)))
        )
        val = G.commutator(d, bx)
    cache[key] = (node, val)
    return node, val


def point_delta(
    G: FiniteGroup, bpt: GroupElement | int, c: GroupElement | int
) -> Program:
    """Arity-1 program with value c at b and identity everywhere else."""
    _require_simple(G)
    bi = bpt if isinstance(bpt, int) else G.index_of(bpt)
    ci = c if isinstance(c, int) else G.index_of(c)
    b = _builder(G)
    root = _point_delta_node(G, bi, ci)
    return b.program(root, 1)


def _point_delta_node(G: FiniteGroup, bi: int, ci: int) -> int:
    b = _builder(G)
    if ci == G.identity_index:
        return b.const(G.identity_index)
    cache = _cache(G)
    key = ("delta", bi, ci)
    if key in cache:
        return cache[key]
    ident = G.identity_index
    if bi == ident:
        # shift: delta_c^1(g) = delta_c^{b0}(b0 g) for any b0 != 1
        b0 = next(i for i in range(len(G)) if i != ident)
        inner = _point_delta_node(G, b0, ci)
        shifted = b.substitute(
            inner,
            {
                b.input(0): b.concat(b.const(b0), b.input(0)),
                b.input_inverse(0): b.concat(b.input_inverse(0), b.const(G.inv(b0))),
            },
        )
        cache[key] = shifted
        return shifted
    core, val = _delta_core(G, bi)
    chain = conjugator_chain(G, val, ci)
    root = _wrap_chain(G, b, chain, core)
    cache[key] = root
    return root


# -- Steps 5-7: multi-point deltas ----------------------------------------------------


def multi_point_delta(
    G: FiniteGroup,
    points: Sequence[GroupElement | int],
    c: GroupElement | int,
) -> Program:
    """Arity-n program equal to c exactly on the tuple ``points`` and to the
    identity on every other tuple."""
    _require_simple(G)
    pts = [p if isinstance(p, int) else G.index_of(p) for p in points]
    if not pts:
        raise WordError("need at least one point")
    ci = c if isinstance(c, int) else G.index_of(c)
    b = _builder(G)
    root = _multi_delta_node(G, tuple(pts), ci)
    return b.program(root, len(pts))


def _multi_delta_node(G: FiniteGroup, pts: tuple[int, ...], ci: int) -> int:
    b = _builder(G)
    if ci == G.identity_index:
        return b.const(G.identity_index)
    if len(pts) == 1:
        return _point_delta_node(G, pts[0], ci)
    cache = _cache(G)
    key = ("multi", pts, ci)
    if key in cache:
        return cache[key]
    skeleton_key = ("multi-skel", pts)
    if skeleton_key in cache:
        node, val = cache[skeleton_key]
    else:
        # nest commutators across slots; value tracked group-side
        node, val = _point_delta_node(G, pts[0], _any_nonidentity(G)), _any_nonidentity(G)
        for slot in range(1, len(pts)):
            # d must fail to commute with the current value (no center)
            d = next(
                x for x in range(len(G)) if G.mul(val, x) != G.mul(x, val)
            )
            inner = b.remap_slot(_point_delta_node(G, pts[slot], d), 0, slot)
            node = b.commutator(node, inner)
            val = G.commutator(val, d)
        cache[skeleton_key] = (node, val)
    chain = conjugator_chain(G, val, ci)
    root = _wrap_chain(G, b, chain, node)
    cache[key] = root
    return root


def _any_nonidentity(G: FiniteGroup) -> int:
    return next(i for i in range(len(G)) if i != G.identity_index)


# -- Step 8: arbitrary tables -----------------------------------------------------------


def synthesize(
    G: FiniteGroup,
    n: int,
    table: Mapping[tuple[int, ...], int],
) -> Program:
    """Program matching a total table G^n -> G (keys: tuples of element
    indices, values: element indices). Point-delta skeletons are shared
    across all entries."""
    _require_simple(G)
    size = len(G) ** n
    if len(table) != size:
        raise MissingEntryError(
            f"table has {len(table)} of {size} required entries"
        )
    b = _builder(G)
    factors = []
    for key in sorted(table):
        if len(key) != n:
            raise MissingEntryError(f"tuple {key} has arity {len(key)} != {n}")
        v = table[key]
        if v == G.identity_index:
            continue
        factors.append(_multi_delta_node(G, tuple(key), v))
    return b.program(b.product(factors), n)


def verify_program(
    program: Program,
    table: Mapping[tuple[int, ...], int],
    sample: int | None = None,
    seed: int = 0,
) -> int:
    """Count of checked inputs; raises AssertionError on first mismatch.
    Exhaustive when sample is None, else random sampling."""
    G = program.group
    keys = sorted(table)
    if sample is not None and sample < len(keys):
        rng = np.random.default_rng(seed)
        keys = [keys[i] for i in rng.choice(len(keys), size=sample, replace=False)]
    envs = np.array(keys, dtype=np.int32).reshape(len(keys), program.arity)
    got = program.evaluate_bulk(envs)
    want = np.array([table[k] for k in keys], dtype=np.int32)
    bad = np.nonzero(got != want)[0]
    if bad.size:
        k = keys[int(bad[0])]
        raise AssertionError(
            f"program mismatch at {k}: got {got[bad[0]]}, want {want[bad[0]]}"
        )
    return len(keys)


# -- the two-control multiply-accumulate word -----------------------------------------


def toffoli_program(
    Q: FiniteGroup,
    a: GroupElement | int,
    b_elem: GroupElement | int,
    d: int,
) -> Program:
    """Arity-2 program f with f(a^i b a^-i, a^j b a^-j) = a^(ij mod d).

    For d = 2 this is the optimized commutator construction
    h2([g1 b^-1, h1(g2 b^-1)]) whose flattened form is nine elementary
    conjugations with the canonical A5 parameters; for odd d the program is a
    product of multi-point deltas over the d^2 basis tuples (identity
    off-basis).
    """
    _require_simple(Q)
    ai = a if isinstance(a, int) else Q.index_of(a)
    bi = b_elem if isinstance(b_elem, int) else Q.index_of(b_elem)
    basis = [Q.conj(bi, Q.power(ai, i)) for i in range(d)]
    if len(set(basis)) != d:
        raise WordError("invalid qudit parameters: basis fluxes collide")
    wb = _builder(Q)
    if d == 2:
        c = Q.mul(Q.conj(bi, ai), Q.inv(bi))
        # prefer a conjugate of c whose commutator with c lands in C(a):
        # then both helper functions are single conjugations
        d_elem = None
        for cand in Q.class_members(c):
            e = Q.commutator(c, cand)
            if e != Q.identity_index and Q.class_of(e) == Q.class_of(ai):
                d_elem = cand
                break
        if d_elem is None:
            d_elem = next(
                x for x in range(len(Q)) if Q.mul(c, x) != Q.mul(x, c)
            )
        e = Q.commutator(c, d_elem)
        h1 = conjugator_chain(Q, c, d_elem)
        h2 = conjugator_chain(Q, e, ai)
        binv = wb.const(Q.inv(bi))
        g1p = wb.concat(wb.input(0), binv)
        g2p = wb.concat(wb.input(1), binv)
        inner = wb.commutator(g1p, _wrap_chain(Q, wb, h1, g2p))
        return wb.program(_wrap_chain(Q, wb, h2, inner), 2)
    factors = []
    for i in range(d):
        for j in range(d):
            v = Q.power(ai, (i * j) % d)
            if v == Q.identity_index:
                continue
            factors.append(_multi_delta_node(Q, (basis[i], basis[j]), v))
    return wb.program(wb.product(factors), 2)
