"""Word DAG representation and evaluation."""

from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anyonic.groups import alternating_group, parse_cycles
from anyonic.words import (
    ArityError,
    Program,
    WordBuilder,
    WordTooLongError,
    read_word_file,
    word_file_text,
)

A5 = alternating_group(5)


def manual_fold(group, atoms, env):
    acc = group.identity_index
    for kind, v in atoms:
        if kind == "const":
            acc = group.mul(acc, v)
        elif kind == "in":
            acc = group.mul(acc, env[v])
        else:
            acc = group.mul(acc, group.inv(env[v]))
    return acc


def random_program(rng: random.Random, arity: int, size: int) -> Program:
    b = WordBuilder(A5)
    pool = [b.const(rng.randrange(60))]
    for slot in range(arity):
        pool.append(b.input(slot))
        pool.append(b.input_inverse(slot))
    for _ in range(size):
        op = rng.choice(["concat", "inverse", "comm"])
        if op == "concat":
            pool.append(b.concat(rng.choice(pool), rng.choice(pool)))
        elif op == "inverse":
            pool.append(b.inverse(rng.choice(pool)))
        else:
            pool.append(b.commutator(rng.choice(pool), rng.choice(pool)))
    return b.program(pool[-1], arity)


def test_constant_word():
    b = WordBuilder(A5)
    c = A5.index_of(parse_cycles("(3 4 5)", 5))
    p = b.program(b.const(c), 0)
    assert p.evaluate([]) == c


def test_commutator_word_direct_composition():
    # g1 g2 g1^-1 g2^-1 on ((345),(234)) equals the group commutator
    b = WordBuilder(A5)
    p = b.program(b.commutator(b.input(0), b.input(1)), 2)
    g1 = A5.index_of(parse_cycles("(3 4 5)", 5))
    g2 = A5.index_of(parse_cycles("(2 3 4)", 5))
    assert p.evaluate([g1, g2]) == A5.commutator(g1, g2)
    assert p.evaluate([g1, g2]) == p.evaluate_flat([g1, g2])


def test_arity_mismatch():
    b = WordBuilder(A5)
    p = b.program(b.input(0), 1)
    with pytest.raises(ArityError):
        p.evaluate([])
    with pytest.raises(ArityError):
        b.program(b.input(2), 1)


def test_concat_evaluation_is_homomorphism():
    rng = random.Random(11)
    for _ in range(60):
        p = random_program(rng, 2, 12)
        q = random_program(rng, 2, 12)
        b = WordBuilder(A5)
        # rebuild both in one arena and concatenate
        pid = b.substitute(_import(b, p), {})
        qid = b.substitute(_import(b, q), {})
        both = b.program(b.concat(pid, qid), 2)
        env = [rng.randrange(60), rng.randrange(60)]
        assert both.evaluate(env) == A5.mul(p.evaluate(env), q.evaluate(env))


def _import(builder: WordBuilder, program: Program) -> int:
    mapping: dict[int, int] = {}
    for nid in program.reachable():
        node = program.nodes[nid]
        kind = node[0]
        if kind == "const":
            mapping[nid] = builder.const(node[1])
        elif kind == "in":
            mapping[nid] = builder.input(node[1])
        elif kind == "inv":
            mapping[nid] = builder.input_inverse(node[1])
        elif kind == "concat":
            mapping[nid] = builder.concat(mapping[node[1]], mapping[node[2]])
        elif kind == "invert":
            mapping[nid] = builder.inverse(mapping[node[1]])
        else:
            mapping[nid] = builder.commutator(mapping[node[1]], mapping[node[2]])
    return mapping[program.root]


def test_dag_equals_flat_on_random_programs():
    rng = random.Random(23)
    for _ in range(80):
        p = random_program(rng, 3, 10)
        if p.flat_length() > 4000:
            continue
        env = [rng.randrange(60) for _ in range(3)]
        assert p.evaluate(env) == p.evaluate_flat(env)


def test_bulk_matches_scalar():
    rng = random.Random(5)
    p = random_program(rng, 2, 20)
    envs = np.array([[rng.randrange(60), rng.randrange(60)] for _ in range(200)])
    bulk = p.evaluate_bulk(envs)
    for k in range(200):
        assert bulk[k] == p.evaluate(list(envs[k]))


@given(st.lists(st.tuples(st.sampled_from(["const", "in", "inv"]), st.integers(0, 59)), max_size=30))
@settings(max_examples=60, deadline=None)
def test_flat_word_products(atoms):
    b = WordBuilder(A5)
    ids = []
    norm = []
    for kind, v in atoms:
        if kind == "const":
            ids.append(b.const(v))
            norm.append(("const", v))
        elif kind == "in":
            slot = v % 2
            ids.append(b.input(slot))
            norm.append(("in", slot))
        else:
            slot = v % 2
            ids.append(b.input_inverse(slot))
            norm.append(("inv", slot))
    p = b.program(b.product(ids), 2)
    env = [v % 60 for v in (17, 42)]
    assert p.evaluate(env) == manual_fold(A5, norm, env)


def test_flatten_folds_constants():
    b = WordBuilder(A5)
    x = A5.index_of(parse_cycles("(1 2 3)", 5))
    root = b.concat(b.const(x), b.concat(b.const(A5.inv(x)), b.input(0)))
    p = b.program(root, 1)
    assert p.flatten() == [("in", 0)]


def test_flatten_length_guard():
    b = WordBuilder(A5)
    node = b.input(0)
    for _ in range(40):
        node = b.commutator(node, b.concat(b.input(0), b.const(3)))
    p = b.program(node, 1)
    with pytest.raises(WordTooLongError):
        p.flatten(limit=10_000)


def test_word_file_roundtrip_flat_and_dag():
    rng = random.Random(9)
    p = random_program(rng, 2, 8)
    dag_text = word_file_text(p)
    q = read_word_file(dag_text, A5)
    for _ in range(20):
        env = [rng.randrange(60), rng.randrange(60)]
        assert p.evaluate(env) == q.evaluate(env)
    if p.flat_length() <= 1000:
        flat_text = word_file_text(p, flat=True)
        r = read_word_file(flat_text, A5)
        for _ in range(20):
            env = [rng.randrange(60), rng.randrange(60)]
            assert p.evaluate(env) == r.evaluate(env)
