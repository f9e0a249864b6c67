"""Product-form words over a finite group, as DAGs with sharing.

A program of arity n denotes a function G^n -> G built from the atoms
``const c``, ``in i`` (the i-th input) and ``inv i`` (its inverse) under
concatenation, formal inverse, and commutator. Programs are DAGs because the
delta-function synthesis nests commutators ~|G| deep: flat words blow up
exponentially while the DAG stays small. Flattening is available for export
and for driving literal braid sequences when the word is short.

Programs built from one :class:`WordBuilder` share an interned node table;
everything is immutable after construction.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np

from .groups import FiniteGroup, GroupElement, GroupError, parse_cycles

# node kinds
CONST = "const"
INPUT = "in"
INPUT_INV = "inv"
CONCAT = "concat"
INVERSE = "invert"
COMM = "comm"

_ATOMS = (CONST, INPUT, INPUT_INV)


class WordError(ValueError):
    pass


class WordTooLongError(WordError):
    """Flattening would exceed the requested length cap."""


class ArityError(WordError):
    pass


class WordBuilder:
    """Arena of interned word nodes over one group.

    Not safe for concurrent mutation; resulting Programs are.
    """

    def __init__(self, group: FiniteGroup):
        self.group = group
        self.nodes: list[tuple] = []
        self._intern: dict[tuple, int] = {}

    def _add(self, node: tuple) -> int:
        nid = self._intern.get(node)
        if nid is None:
            nid = len(self.nodes)
            self.nodes.append(node)
            self._intern[node] = nid
        return nid

    def const(self, elem: int) -> int:
        return self._add((CONST, elem))

    def const_element(self, g: GroupElement) -> int:
        return self.const(self.group.index_of(g))

    def input(self, slot: int) -> int:
        return self._add((INPUT, slot))

    def input_inverse(self, slot: int) -> int:
        return self._add((INPUT_INV, slot))

    def concat(self, left: int, right: int) -> int:
        lnode, rnode = self.nodes[left], self.nodes[right]
        # constant folding keeps synthesized DAGs small
        if lnode[0] == CONST and rnode[0] == CONST:
            return self.const(self.group.mul(lnode[1], rnode[1]))
        if lnode[0] == CONST and lnode[1] == self.group.identity_index:
            return right
        if rnode[0] == CONST and rnode[1] == self.group.identity_index:
            return left
        return self._add((CONCAT, left, right))

    def inverse(self, node: int) -> int:
        inner = self.nodes[node]
        if inner[0] == CONST:
            return self.const(self.group.inv(inner[1]))
        if inner[0] == INPUT:
            return self.input_inverse(inner[1])
        if inner[0] == INPUT_INV:
            return self.input(inner[1])
        if inner[0] == INVERSE:
            return inner[1]
        return self._add((INVERSE, node))

    def commutator(self, left: int, right: int) -> int:
        return self._add((COMM, left, right))

    def product(self, ids: Sequence[int]) -> int:
        """Balanced concatenation; empty product is the identity constant."""
        ids = list(ids)
        if not ids:
            return self.const(self.group.identity_index)
        while len(ids) > 1:
            nxt = [
                self.concat(ids[k], ids[k + 1]) if k + 1 < len(ids) else ids[k]
                for k in range(0, len(ids), 2)
            ]
            ids = nxt
        return ids[0]

    def conjugated(self, by: int, node: int) -> int:
        """by . node . by^-1 for a constant element index ``by``."""
        return self.concat(self.const(by), self.concat(node, self.const(self.group.inv(by))))

    def substitute(self, root: int, replace: dict[int, int]) -> int:
        """Copy the sub-DAG at root with atom nodes replaced per ``replace``
        (mapping node id -> node id); used for slot remaps and argument
        substitution into arity-1 helper programs."""
        memo: dict[int, int] = dict(replace)

        def go(nid: int) -> int:
            got = memo.get(nid)
            if got is not None:
                return got
            node = self.nodes[nid]
            kind = node[0]
            if kind in _ATOMS:
                out = nid
            elif kind == CONCAT:
                out = self.concat(go(node[1]), go(node[2]))
            elif kind == INVERSE:
                out = self.inverse(go(node[1]))
            else:
                out = self.commutator(go(node[1]), go(node[2]))
            memo[nid] = out
            return out

        return go(root)

    def remap_slot(self, root: int, old: int, new: int) -> int:
        return self.substitute(
            root,
            {
                self.input(old): self.input(new),
                self.input_inverse(old): self.input_inverse(new),
            },
        )

    def apply_unary(self, helper_root: int, arg: int) -> int:
        """Substitute ``arg`` for the input of an arity-1 helper word."""
        return self.substitute(
            helper_root,
            {self.input(0): arg, self.input_inverse(0): self.inverse(arg)},
        )

    def program(self, root: int, arity: int) -> "Program":
        return Program(self.group, arity, self.nodes, root, self)


@dataclass(frozen=True)
class Program:
    """An evaluable product-form word (shared-node DAG view)."""

    group: FiniteGroup
    arity: int
    nodes: list  # shared with the builder; treat as immutable
    root: int
    builder: WordBuilder | None = None

    def __post_init__(self) -> None:
        for nid in self.reachable():
            node = self.nodes[nid]
            if node[0] in (INPUT, INPUT_INV) and node[1] >= self.arity:
                raise ArityError(f"slot {node[1]} >= arity {self.arity}")

    def reachable(self) -> list[int]:
        """Node ids reachable from root, ascending (valid evaluation order)."""
        seen = {self.root}
        stack = [self.root]
        while stack:
            node = self.nodes[stack.pop()]
            kind = node[0]
            if kind in _ATOMS:
                continue
            children = node[1:] if kind != INVERSE else (node[1],)
            for c in children:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return sorted(seen)

    @property
    def node_count(self) -> int:
        return len(self.reachable())

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, env: Sequence[int]) -> int:
        """Value (element index) of the word on an environment of element
        indices; memoized per node, linear in DAG size."""
        if len(env) != self.arity:
            raise ArityError(f"need {self.arity} inputs, got {len(env)}")
        G = self.group
        val: dict[int, int] = {}
        for nid in self.reachable():
            node = self.nodes[nid]
            kind = node[0]
            if kind == CONST:
                val[nid] = node[1]
            elif kind == INPUT:
                val[nid] = env[node[1]]
            elif kind == INPUT_INV:
                val[nid] = G.inv(env[node[1]])
            elif kind == CONCAT:
                val[nid] = G.mul(val[node[1]], val[node[2]])
            elif kind == INVERSE:
                val[nid] = G.inv(val[node[1]])
            else:  # COMM
                a, b = val[node[1]], val[node[2]]
                val[nid] = G.mul(G.mul(a, b), G.mul(G.inv(a), G.inv(b)))
        return val[self.root]

    def evaluate_elements(self, env: Sequence[GroupElement]) -> GroupElement:
        idx = self.evaluate([self.group.index_of(g) for g in env])
        return self.group.elements[idx]

    def evaluate_bulk(self, envs: np.ndarray) -> np.ndarray:
        """Vectorized evaluation over envs of shape (m, arity) via the dense
        product table."""
        envs = np.asarray(envs, dtype=np.int32)
        if envs.ndim != 2 or envs.shape[1] != self.arity:
            raise ArityError(f"envs must be (m, {self.arity})")
        G = self.group
        mul = G.mul_table()
        inv = G.inv_table()
        val: dict[int, np.ndarray] = {}
        for nid in self.reachable():
            node = self.nodes[nid]
            kind = node[0]
            if kind == CONST:
                val[nid] = np.full(envs.shape[0], node[1], dtype=np.int32)
            elif kind == INPUT:
                val[nid] = envs[:, node[1]]
            elif kind == INPUT_INV:
                val[nid] = inv[envs[:, node[1]]]
            elif kind == CONCAT:
                val[nid] = mul[val[node[1]], val[node[2]]]
            elif kind == INVERSE:
                val[nid] = inv[val[node[1]]]
            else:
                a, b = val[node[1]], val[node[2]]
                val[nid] = mul[mul[a, b], mul[inv[a], inv[b]]]
        return val[self.root]

    def value_table(self) -> np.ndarray:
        """Full table over G^arity (flat index, row-major); arity <= 2."""
        n = len(self.group)
        if self.arity == 0:
            return np.array([self.evaluate([])], dtype=np.int32)
        if self.arity == 1:
            envs = np.arange(n, dtype=np.int32)[:, None]
        elif self.arity == 2:
            g1, g2 = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
            envs = np.stack([g1.ravel(), g2.ravel()], axis=1).astype(np.int32)
        else:
            raise WordError("value_table supports arity <= 2")
        return self.evaluate_bulk(envs)

    # -- flattening -----------------------------------------------------------

    def flat_length(self) -> int:
        """Length of the flattened word (before constant folding); exact."""
        ln: dict[int, int] = {}
        for nid in self.reachable():
            node = self.nodes[nid]
            kind = node[0]
            if kind in _ATOMS:
                ln[nid] = 1
            elif kind == CONCAT:
                ln[nid] = ln[node[1]] + ln[node[2]]
            elif kind == INVERSE:
                ln[nid] = ln[node[1]]
            else:
                ln[nid] = 2 * (ln[node[1]] + ln[node[2]])
            if ln[nid] > 10_000_000:
                return 10_000_001
        return ln[self.root]

    def flatten(self, limit: int = 1_000_000) -> list[tuple]:
        """Atom list ('const', idx) / ('in', slot) / ('inv', slot), with
        adjacent constants folded and identity constants dropped."""
        if self.flat_length() > limit:
            raise WordTooLongError(
                f"flattened length exceeds {limit}; export the DAG form instead"
            )
        G = self.group

        def emit(nid: int, inverted: bool, out: list[tuple]) -> None:
            node = self.nodes[nid]
            kind = node[0]
            if kind == CONST:
                out.append((CONST, G.inv(node[1]) if inverted else node[1]))
            elif kind == INPUT:
                out.append((INPUT_INV, node[1]) if inverted else (INPUT, node[1]))
            elif kind == INPUT_INV:
                out.append((INPUT, node[1]) if inverted else (INPUT_INV, node[1]))
            elif kind == CONCAT:
                first, second = (node[2], node[1]) if inverted else (node[1], node[2])
                emit(first, inverted, out)
                emit(second, inverted, out)
            elif kind == INVERSE:
                emit(node[1], not inverted, out)
            else:  # [a,b] = a b a^-1 b^-1 ; inverse is b a b^-1 a^-1
                a, b = node[1], node[2]
                seq = [(b, False), (a, False), (b, True), (a, True)] if inverted else [
                    (a, False),
                    (b, False),
                    (a, True),
                    (b, True),
                ]
                for child, inv in seq:
                    emit(child, inv, out)

        raw: list[tuple] = []
        emit(self.root, False, raw)
        folded: list[tuple] = []
        for atom in raw:
            if atom[0] == CONST and folded and folded[-1][0] == CONST:
                folded[-1] = (CONST, G.mul(folded[-1][1], atom[1]))
            else:
                folded.append(atom)
        folded = [a for a in folded if not (a[0] == CONST and a[1] == G.identity_index)]
        return folded

    def evaluate_flat(self, env: Sequence[int]) -> int:
        """Evaluate via the flattened word (test cross-check path)."""
        G = self.group
        acc = G.identity_index
        for kind, v in self.flatten():
            if kind == CONST:
                acc = G.mul(acc, v)
            elif kind == INPUT:
                acc = G.mul(acc, env[v])
            else:
                acc = G.mul(acc, G.inv(env[v]))
        return acc


# -- file formats ------------------------------------------------------------------


def write_word_file(program: Program, out: TextIO, flat: bool = False) -> None:
    """Flat format: one atom per line. DAG format: numbered definitions with a
    final ``root`` line. Both start with an ``arity`` header."""
    G = program.group
    out.write(f"arity {program.arity}\n")
    if flat:
        for kind, v in program.flatten():
            if kind == CONST:
                out.write(f"const {G.elements[v]}\n")
            else:
                out.write(f"{kind} {v}\n")
        return
    order = program.reachable()
    names = {nid: f"n{k}" for k, nid in enumerate(order)}
    for nid in order:
        node = program.nodes[nid]
        kind = node[0]
        if kind == CONST:
            out.write(f"let {names[nid]} = const {G.elements[node[1]]}\n")
        elif kind in (INPUT, INPUT_INV):
            out.write(f"let {names[nid]} = {kind} {node[1]}\n")
        elif kind == INVERSE:
            out.write(f"let {names[nid]} = invert {names[node[1]]}\n")
        else:
            out.write(f"let {names[nid]} = {kind} {names[node[1]]} {names[node[2]]}\n")
    out.write(f"root {names[program.root]}\n")


def word_file_text(program: Program, flat: bool = False) -> str:
    buf = io.StringIO()
    write_word_file(program, buf, flat=flat)
    return buf.getvalue()


def read_word_file(text: str | TextIO, group: FiniteGroup) -> Program:
    if not isinstance(text, str):
        text = text.read()
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("arity "):
        raise WordError("word file must start with an 'arity <n>' line")
    arity = int(lines[0].split()[1])
    body = lines[1:]
    builder = WordBuilder(group)
    if body and body[0].startswith("let "):
        names: dict[str, int] = {}
        root_name = None
        for ln in body:
            if ln.startswith("root "):
                root_name = ln.split()[1]
                continue
            try:
                head, rhs = ln.split("=", 1)
                name = head.split()[1]
                toks = rhs.split()
                op = toks[0]
                if op == "const":
                    nid = builder.const(group.index_of(parse_cycles(" ".join(toks[1:]), group.degree)))
                elif op == INPUT:
                    nid = builder.input(int(toks[1]))
                elif op == INPUT_INV:
                    nid = builder.input_inverse(int(toks[1]))
                elif op == "invert":
                    nid = builder.inverse(names[toks[1]])
                elif op == CONCAT:
                    nid = builder.concat(names[toks[1]], names[toks[2]])
                elif op == COMM:
                    nid = builder.commutator(names[toks[1]], names[toks[2]])
                else:
                    raise WordError(f"unknown op {op!r}")
                names[name] = nid
            except (IndexError, KeyError, ValueError, GroupError) as exc:
                raise WordError(f"bad word line {ln!r}: {exc}") from None
        if root_name is None or root_name not in names:
            raise WordError("missing or dangling root line")
        return builder.program(names[root_name], arity)
    atoms = []
    for ln in body:
        toks = ln.split()
        try:
            if toks[0] == "const":
                atoms.append(builder.const(group.index_of(parse_cycles(" ".join(toks[1:]), group.degree))))
            elif toks[0] == INPUT:
                atoms.append(builder.input(int(toks[1])))
            elif toks[0] == INPUT_INV:
                atoms.append(builder.input_inverse(int(toks[1])))
            else:
                raise WordError(f"unknown atom {toks[0]!r}")
        except (IndexError, ValueError, GroupError) as exc:
            raise WordError(f"bad word line {ln!r}: {exc}") from None
    return builder.program(builder.product(atoms), arity)
