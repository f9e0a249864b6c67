"""Logical qudit layer over the anyon line.

A register encodes qudits as trivial-net-flux pairs: digit n is the pair
(a^n b a^-n, a^n b^-1 a^-n) for chosen group elements a, b with prime period
d. In coset mode (a non-solvable group whose simple perfect piece arises as a
quotient P/N) the same basis states become rho ensembles: per conjugacy
class, the uniform superposition over the class's intersection with the
coset fiber. Every gate below runs unchanged against either backend; the
pure case is the degenerate context N = {1}.

Gate set: Toffoli (conjugation by a synthesized two-input word), measure Z
(entangled copies fused against inverse-basis ancillas), measure X (X-basis
copies rotated and self-fused), plus the X-eigenstate distillation that
feeds them. The bootstrap fixes a root of unity by designating a surviving
X eigenstate as index 1; all later Z gates kick back through that ancilla,
so the register's phase algebra is internally consistent regardless of
which eigenstate physically survived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .groups import CosetContext, FiniteGroup, GroupElement, find_qudit_params, trivial_context
from .reps import Representation, standard_rep
from .synthesis import point_delta, toffoli_program, _builder
from .system import AnyonSystem, Pair, SectorModel
from .words import CONCAT, CONST, INPUT, INPUT_INV, INVERSE, COMM, Program


class RegisterError(RuntimeError):
    pass


class BootstrapRequiredError(RegisterError):
    """Z gates need the designated X-eigenstate pool; run bootstrap_xone."""


class ProtocolStalledError(RegisterError):
    def __init__(self, message: str, attempts: int):
        super().__init__(f"{message} after {attempts} attempts")
        self.attempts = attempts


class InconclusiveMeasurementError(RegisterError):
    def __init__(self, tallies: dict[int, int]):
        super().__init__(f"no vacuum event; tallies {tallies}")
        self.tallies = tallies


@dataclass
class LogicalOutcome:
    digit: int
    confidence: float
    tallies: dict[int, int] = field(default_factory=dict)


class QuditRegister:
    """Owns an AnyonSystem and the logical bookkeeping on top of it."""

    def __init__(
        self,
        context: CosetContext | FiniteGroup,
        d: int | None = None,
        rng: np.random.Generator | int | None = None,
        sector_model: SectorModel | None = None,
        transcript: list[str] | None = None,
        inconclusive_rate: float = 1e-4,
    ):
        if isinstance(context, FiniteGroup):
            context = trivial_context(context)
        self.context = context
        self.quotient = context.quotient
        a, b, dd = find_qudit_params(self.quotient, prefer_d=d)
        self.a = self.quotient.index_of(a)
        self.b = self.quotient.index_of(b)
        self.d = dd
        Q = self.quotient
        self.basis = [Q.conj(self.b, Q.power(self.a, i)) for i in range(dd)]
        self.system = AnyonSystem(context.group, rng=rng, transcript=transcript)
        if sector_model is None:
            sector_model = SectorModel.concentrated(
                context.group, context.lift(self.b)
            )
        self.sector_model = sector_model
        self.inconclusive_rate = inconclusive_rate
        self.qudits: dict[int, Pair] = {}
        self._next_qid = 0
        self._one_ancillas: list[int] | None = None
        self._xone: int | None = None
        self._iy: int | None = None
        self._value_tables: dict[int, np.ndarray] = {}
        self._toffoli_prog: Program | None = None
        self._xzero_prog: Program | None = None
        # per-fusion vacuum probability for a correct-basis fuse, pure case
        G = context.group
        self.p_z = 1.0 / len(G.class_members(context.lift(self.b)))
        self.p_x = dd * self.p_z

    # -- state preparation ------------------------------------------------------

    def prepare_rho(self, x: int) -> Pair:
        """Ancilla pair in rho_x (requirement 4'): per conjugacy class of G,
        a branch holding the uniform superposition over class /\\ fiber. For
        a singleton fiber this is exactly the flux ancilla |x'> (x) |x'^-1>."""
        fiber = self.context.fiber(x)
        if len(fiber) == 1:
            return self.system.create_flux_ancilla(fiber[0])
        G = self.context.group
        by_class: dict[int, list[int]] = {}
        for g in fiber:
            by_class.setdefault(G.class_of(g), []).append(g)
        pair = self.system._append_pair("flux")
        new_branches = []
        for br in self.system.branches:
            for cid in sorted(by_class):
                members = sorted(by_class[cid])
                w = len(members) / len(fiber)
                scale = 1.0 / math.sqrt(len(members))
                amps = {}
                for cfg, amp in br.amps.items():
                    for g in members:
                        amps[cfg + (g, G.inv(g))] = amp * scale
                new_branches.append(
                    type(br)(br.weight * w, amps)
                )
        self.system.branches = new_branches
        return pair

    def new_qudit(self, pair: Pair) -> int:
        qid = self._next_qid
        self._next_qid += 1
        self.qudits[qid] = pair
        return qid

    def encode(self, digit: int) -> int:
        """Fresh qudit in |digit> (|0> from a rho_b ancilla, then X gates)."""
        if not 0 <= digit < self.d:
            raise RegisterError(f"digit {digit} out of range for d={self.d}")
        qid = self.new_qudit(self.prepare_rho(self.basis[0]))
        for _ in range(digit):
            self.gate_x(qid)
        return qid

    def pair_of(self, qid: int) -> Pair:
        pair = self.qudits.get(qid)
        if pair is None:
            raise RegisterError(f"unknown qudit {qid}")
        return pair

    def discard_qudit(self, qid: int) -> None:
        pair = self.qudits.pop(qid)
        self.system.discard([a for a in pair.anyons if self.system.anyons[a].alive])

    # -- conjugation by a function -------------------------------------------------

    def _ones(self) -> list[int]:
        if self._one_ancillas is None:
            self._one_ancillas = [
                self.new_qudit(self.prepare_rho(self.basis[1])) for _ in range(2)
            ]
        return self._one_ancillas

    def toffoli_word(self) -> Program:
        if self._toffoli_prog is None:
            self._toffoli_prog = toffoli_program(self.quotient, self.a, self.b, self.d)
        return self._toffoli_prog

    def xzero_word(self) -> Program:
        """f(a^i b a^-i) = a^i, identity elsewhere: the controlled-sum
        properly defined outside the computational basis."""
        if self._xzero_prog is None:
            Q = self.quotient
            wb = _builder(Q)
            parts = []
            for i in range(1, self.d):
                prog = point_delta(Q, self.basis[i], Q.power(self.a, i))
                parts.append(prog.root)
            self._xzero_prog = wb.program(wb.product(parts), 1)
        return self._xzero_prog

    def conjugation_by_function(
        self,
        program: Program,
        controls: list[Pair],
        target: Pair,
        invert: bool = False,
        braided: bool = False,
    ) -> None:
        """Conjugate the target pair by the word evaluated on the controls'
        fluxes. The fast path applies the net per-configuration map, which
        equals the braid sequence exactly (each elementary conjugation is a
        deterministic permutation of configurations); ``braided=True`` runs
        the literal pass-through sequence instead (short words only)."""
        sys = self.system
        if program.arity != len(controls):
            raise RegisterError(
                f"program arity {program.arity} != {len(controls)} controls"
            )
        pids = [p.pid for p in controls] + [target.pid]
        if len(set(pids)) != len(pids):
            raise RegisterError("controls and target must be distinct pairs")
        if braided:
            self._conjugate_braided(program, controls, target, invert)
            return
        lifts = self._draw_const_lifts(program)
        ctl_slots = [sys.slot_of[p.anyons[0]] for p in controls]
        tl, tr = (sys.slot_of[a] for a in target.anyons)
        G = self.context.group
        table = self._pure_table(program)
        memo: dict[tuple[int, ...], int] = {}
        for br in sys.branches:
            new_amps: dict[tuple[int, ...], complex] = {}
            for cfg, amp in br.amps.items():
                env = tuple(sys._flux_of_value(cfg[s]) for s in ctl_slots)
                w = memo.get(env)
                if w is None:
                    w = self._evaluate_lifted(program, env, lifts, table)
                    memo[env] = w
                if invert:
                    w = G.inv(w)
                if w == G.identity_index:
                    key = cfg
                else:
                    lst = list(cfg)
                    for s in (tl, tr):
                        v = lst[s]
                        if sys._value_kind(v) == "flux":
                            lst[s] = G.conj(v, w)
                        elif sys._value_kind(v) == "carrier":
                            gam = sys._gamma_of_value(v)
                            lst[s] = sys._carrier_base + G.mul(G.mul(w, gam), G.inv(w))
                        # dual: folded into the carrier update above
                    key = tuple(lst)
                new_amps[key] = new_amps.get(key, 0.0) + amp
            br.amps = new_amps

    def _draw_const_lifts(self, program: Program) -> dict[int, int]:
        """One fiber lift per distinct constant per application (one reusable
        ancilla per constant; no draw when the fiber is a singleton)."""
        lifts: dict[int, int] = {}
        for nid in program.reachable():
            node = program.nodes[nid]
            if node[0] == CONST and node[1] not in lifts:
                fiber = self.context.fiber(node[1])
                if len(fiber) == 1:
                    lifts[node[1]] = fiber[0]
                else:
                    lifts[node[1]] = fiber[int(self.system.rng.integers(len(fiber)))]
        return lifts

    def _pure_table(self, program: Program) -> np.ndarray | None:
        """Quotient-level value table, usable whenever N = {1} (the G-product
        of lifts is then the unique lift of the Q-product)."""
        if not self.context.is_degenerate or program.arity > 2:
            return None
        key = id(program)
        if key not in self._value_tables:
            self._value_tables[key] = program.value_table()
        return self._value_tables[key]

    def _evaluate_lifted(
        self,
        program: Program,
        env: tuple[int, ...],
        lifts: dict[int, int],
        table: np.ndarray | None,
    ) -> int:
        """Value in G of the quotient word on G-valued inputs, with constants
        resolved through the drawn fiber lifts."""
        ctx = self.context
        G = ctx.group
        if table is not None:
            # N = {1}: evaluate in the quotient and lift the result
            Q = self.quotient
            qenv = [ctx.epi.get(g) for g in env]
            if all(q is not None for q in qenv):
                flat = 0
                for q in qenv:
                    flat = flat * len(Q) + q
                return ctx.lift(int(table[flat]))
        val: dict[int, int] = {}
        for nid in program.reachable():
            node = program.nodes[nid]
            kind = node[0]
            if kind == CONST:
                val[nid] = lifts[node[1]]
            elif kind == INPUT:
                val[nid] = env[node[1]]
            elif kind == INPUT_INV:
                val[nid] = G.inv(env[node[1]])
            elif kind == CONCAT:
                val[nid] = G.mul(val[node[1]], val[node[2]])
            elif kind == INVERSE:
                val[nid] = G.inv(val[node[1]])
            else:  # COMM
                x, y = val[node[1]], val[node[2]]
                val[nid] = G.mul(G.mul(x, y), G.mul(G.inv(x), G.inv(y)))
        return val[program.root]

    def _conjugate_braided(
        self, program: Program, controls: list[Pair], target: Pair, invert: bool
    ) -> None:
        """Literal realization: one pass-through per flattened atom, ancilla
        pairs for the constants, rightmost factor first."""
        atoms = program.flatten(limit=100_000)
        if invert:
            flip = {CONST: CONST, INPUT: INPUT_INV, INPUT_INV: INPUT}
            atoms = [
                (flip[k], self.context.group.inv(v) if k == CONST else v)
                for k, v in reversed(atoms)
            ]
        const_anc: dict[int, Pair] = {}
        for kind, v in atoms:
            if kind == CONST and v not in const_anc:
                # constants live in the quotient when invert left them there
                const_anc[v] = self.system.create_flux_ancilla(
                    self.context.lift(v) if v < len(self.quotient) else v
                )
        for kind, v in reversed(atoms):
            if kind == CONST:
                self.system.conjugate_pair(const_anc[v], target, +1)
            elif kind == INPUT:
                self.system.conjugate_pair(controls[v], target, +1)
            else:
                self.system.conjugate_pair(controls[v], target, -1)
        for pair in const_anc.values():
            self.system.discard(list(pair.anyons))

    # -- unitary gates ----------------------------------------------------------------

    def toffoli(self, q1: int, q2: int, q3: int) -> None:
        """T |l,m,n> = |l,m,lm+n> on the computational basis."""
        if len({q1, q2, q3}) != 3:
            raise RegisterError("toffoli needs three distinct qudits")
        self.conjugation_by_function(
            self.toffoli_word(),
            [self.pair_of(q1), self.pair_of(q2)],
            self.pair_of(q3),
        )

    def controlled_sum(self, qc: int, qt: int) -> None:
        """|m,n> -> |m, m+n>: Toffoli with the first input fixed to |1>."""
        one = self._ones()[0]
        if one in (qc, qt):
            one = self._ones()[1]
        self.toffoli(one, qc, qt)

    def csum_inverse(self, qc: int, qt: int) -> None:
        for _ in range(self.d - 1):
            self.controlled_sum(qc, qt)

    def gate_x(self, q: int) -> None:
        """X: Toffoli with both control inputs fixed to |1>."""
        ones = self._ones()
        if q in ones:
            raise RegisterError("cannot X an internal ancilla")
        self.toffoli(ones[0], ones[1], q)

    def gate_z(self, q: int) -> None:
        """Z via controlled-sum onto the designated X-eigenstate ancilla."""
        if self._xone is None:
            raise BootstrapRequiredError("x~1 pool is empty")
        self.controlled_sum(q, self._xone)

    # -- measure Z ----------------------------------------------------------------------

    def default_copies(self, p: float) -> int:
        return max(1, math.ceil(math.log(self.inconclusive_rate) / math.log(1.0 - p)))

    def measure_z(self, q: int, copies: int | None = None) -> LogicalOutcome:
        """Copy with controlled-sums and fuse the copies against
        inverse-basis ancillas until one vanishes into the vacuum;
        non-destructive on the measured qudit."""
        if copies is None:
            copies = self.default_copies(self.p_z)
        Q = self.quotient
        sys = self.system
        tallies = {k: 0 for k in range(self.d)}
        for _ in range(copies):
            for k in range(self.d):
                cpy = self.new_qudit(self.prepare_rho(self.basis[0]))
                self.controlled_sum(q, cpy)
                anc = self.prepare_rho(Q.inv(self.basis[k]))
                cp = self.qudits[cpy]
                out = sys.fuse(cp.anyons[0], anc.anyons[0])
                tallies[k] += 1
                if out.vacuum:
                    sys.discard([cp.anyons[1], anc.anyons[1]])
                    del self.qudits[cpy]
                    return LogicalOutcome(k, 1.0, tallies)
                sys.discard(
                    [cp.anyons[0], anc.anyons[0], cp.anyons[1], anc.anyons[1]]
                )
                del self.qudits[cpy]
        raise InconclusiveMeasurementError(tallies)

    # -- X-eigenstate distillation ---------------------------------------------------------

    def prepare_xzero(self, retry_cap: int = 2000) -> int:
        """Distill an |x~0> qudit from vacuum pairs by the incomplete swap.

        Per attempt: conjugate a fresh |0> ancilla by f(vacuum flux)
        (f(a^i b a^-i) = a^i), conjugate the vacuum pair by f(ancilla)^-1,
        then fuse the vacuum pair against a rho_{b^-1} ancilla. A vacuum
        event certifies the ancilla exactly; on a residual the lump's flux is
        sampled destructively and the ancilla is accepted iff it lies in N
        (trivial for N = {1}) -- the computational channel is the only one
        whose lump flux lands in N, so the per-attempt success rate equals
        the channel weight d/|C(b)|."""
        sys = self.system
        f = self.xzero_word()
        for attempt in range(retry_cap):
            vac = sys.create_vacuum_pair(self.sector_model)
            anc = self.prepare_rho(self.basis[0])
            self.conjugation_by_function(f, [vac], anc)
            self.conjugation_by_function(f, [anc], vac, invert=True)
            filt = self.prepare_rho(self.quotient.inv(self.b))
            out = sys.fuse(vac.anyons[0], filt.anyons[0])
            if out.vacuum:
                sys.discard([vac.anyons[1], filt.anyons[1]])
                return self.new_qudit(anc)
            lump_flux = sys.flux_sample([vac.anyons[0], filt.anyons[0]])
            good = lump_flux in self.context.kernel.members
            sys.discard(
                [vac.anyons[0], filt.anyons[0], vac.anyons[1], filt.anyons[1]]
            )
            if good:
                return self.new_qudit(anc)
            sys.discard(list(anc.anyons))
        raise ProtocolStalledError("prepare_xzero stalled", retry_cap)

    def _copy_xbasis(self, q: int) -> int:
        """Controlled-X^-1 from a fresh |x~0> control onto q: the control
        becomes the copy (|x~0> (x) |x~i> -> |x~i> (x) |x~i>)."""
        ctl = self.prepare_xzero()
        self.csum_inverse(ctl, q)
        return ctl

    def _fuse_qudit_pair(self, qid: int) -> bool:
        pair = self.qudits[qid]
        out = self.system.fuse(pair.anyons[0], pair.anyons[1])
        if not out.vacuum:
            self.system.discard(list(pair.anyons))
        del self.qudits[qid]
        return out.vacuum

    def bootstrap_xone(self, retry_cap: int = 50, zero_test_copies: int | None = None) -> None:
        """Create and designate the |x~1> ancilla, fixing the root of unity.

        A controlled-X^-1 from |x~0> onto |0> plus discarding the target
        leaves an unknown X eigenstate; copies of it are self-fused to reject
        x~0 (the only X eigenstate with vacuum overlap), and the survivor is
        relabeled as x~1. For d = 2 the relabeling is exact."""
        if zero_test_copies is None:
            zero_test_copies = self.default_copies(self.p_x)
        for _ in range(retry_cap):
            cand = self.prepare_xzero()
            tgt = self.encode(0)
            self.csum_inverse(cand, tgt)
            self.discard_qudit(tgt)
            rejected = False
            for _ in range(zero_test_copies):
                cpy = self._copy_xbasis(cand)
                if self._fuse_qudit_pair(cpy):
                    rejected = True  # the candidate was x~0
                    break
            if rejected:
                self.discard_qudit(cand)
                continue
            self._xone = cand
            return
        raise ProtocolStalledError("bootstrap_xone stalled", retry_cap)

    def scrub_xone_pool(self, copies: int = 3) -> bool:
        """Copy/compare/majority maintenance of the designated ancilla: make
        copies, measure them, keep the pool iff the majority reads 1."""
        if self._xone is None:
            raise BootstrapRequiredError("nothing to scrub")
        votes = 0
        for _ in range(copies):
            cpy = self._copy_xbasis(self._xone)
            out = self.measure_x(cpy)
            self.discard_qudit(cpy) if cpy in self.qudits else None
            votes += 1 if out.digit == 1 else 0
        return votes * 2 > copies

    # -- measure X -----------------------------------------------------------------------

    def measure_x(self, q: int, copies: int | None = None) -> LogicalOutcome:
        """Copy in the X basis, rotate each copy by Z^k, and self-fuse: a
        vacuum event identifies digit k. Digits above 0 need the bootstrap."""
        if copies is None:
            copies = self.default_copies(self.p_x)
        if self.d > 1 and self._xone is None:
            raise BootstrapRequiredError("measure_x needs the x~1 pool")
        tallies = {k: 0 for k in range(self.d)}
        for _ in range(copies):
            for k in range(self.d):
                cpy = self._copy_xbasis(q)
                for _ in range(k):
                    self.gate_z(cpy)
                tallies[k] += 1
                if self._fuse_qudit_pair(cpy):
                    return LogicalOutcome(k, 1.0, tallies)
        raise InconclusiveMeasurementError(tallies)

    def measure_x_zero_test(self, q: int, copies: int) -> bool:
        """Vacuum-only test for x~0 (no Z rotations; usable pre-bootstrap)."""
        for _ in range(copies):
            cpy = self._copy_xbasis(q)
            if self._fuse_qudit_pair(cpy):
                return True
        return False

    # -- measure X^a Z^b --------------------------------------------------------------------

    def _phase_quadratic(self, ctl: int, tgt: int, aa: int, bb: int) -> None:
        """|n, m> -> w^(bb n m + aa bb n(n-1)/2) |n, m>: compute the exponent
        into a scratch qudit with Toffolis, phase it with one Z, uncompute."""
        d = self.d
        s = self.encode(0)
        # s += bb * n * m
        for _ in range(bb % d):
            self.toffoli(ctl, tgt, s)
        if d != 2:  # n(n-1)/2 vanishes mod 2 for n in {0,1}
            ncpy = self.encode(0)
            self.controlled_sum(ctl, ncpy)
            n2 = self.encode(0)
            self.toffoli(ctl, ncpy, n2)  # n2 += n^2
            self.csum_inverse(ctl, n2)  # n2 = n^2 - n
            inv2 = pow(2, -1, d)
            k = (aa * bb * inv2) % d
            for _ in range(k):
                self.controlled_sum(n2, s)
            self.gate_z(s)
            for _ in range(k):
                self.csum_inverse(n2, s)
            self.controlled_sum(ctl, n2)
            self.toffoli(ctl, ncpy, n2)
            for _ in range(d - 1):
                self.toffoli(ctl, ncpy, n2)
            # n2, ncpy are back to |0>; uncompute ncpy's copy of n
            self.csum_inverse(ctl, ncpy)
            self.discard_qudit(n2)
            self.discard_qudit(ncpy)
        else:
            self.gate_z(s)
        for _ in range(bb % d):
            for _ in range(self.d - 1):
                self.toffoli(ctl, tgt, s)
        self.discard_qudit(s)

    def _controlled_u(self, ctl: int, tgt: int, aa: int, bb: int) -> None:
        """|n> (x) |psi> -> |n> (x) (X^aa Z^bb)^n |psi>."""
        if bb % self.d:
            self._phase_quadratic(ctl, tgt, aa % self.d, bb % self.d)
        for _ in range(aa % self.d):
            self.controlled_sum(ctl, tgt)

    def measure_xazb(self, q: int, aa: int, bb: int) -> int:
        """Eigenvalue index of X^aa Z^bb by phase estimation: d-1 controlled
        applications onto an |x~0> control, then an X measurement of the
        control. d = 2 supports (1,0), (0,1) and the iY machinery for
        (1,1)."""
        aa %= self.d
        bb %= self.d
        if (aa, bb) == (0, 0):
            raise RegisterError("X^0 Z^0 is trivial")
        if self.d == 2:
            if (aa, bb) == (1, 0):
                return self.measure_x(q).digit
            if (aa, bb) == (0, 1):
                return self.measure_z(q).digit
            return self.measure_zx_qubit(q)
        ctl = self.prepare_xzero()
        for _ in range(self.d - 1):
            self._controlled_u(ctl, q, aa, bb)
        out = self.measure_x(ctl)
        self.discard_qudit(ctl)
        return out.digit

    # -- the d = 2 iY machinery ---------------------------------------------------------------

    def _controlled_zx(self, ctl: int, tgt: int) -> None:
        """Controlled-(ZX) for d = 2: controlled-sum then controlled-Z (phase
        on the post-sum value)."""
        self.controlled_sum(ctl, tgt)
        s = self.encode(0)
        self.toffoli(ctl, tgt, s)
        self.gate_z(s)
        self.toffoli(ctl, tgt, s)
        self.discard_qudit(s)

    def bootstrap_iy(self) -> None:
        """d = 2: make rho = I/2 from a bell pair (controlled-sum from x~0
        onto |0>, discard half) and designate the survivor as the +i
        eigenstate of ZX."""
        if self.d != 2:
            raise RegisterError("iY bootstrap is the d = 2 path")
        anc = self.prepare_xzero()
        tgt = self.encode(0)
        self.controlled_sum(anc, tgt)
        self.discard_qudit(tgt)
        self._iy = anc

    def copy_iy(self) -> int:
        """Controlled-ZX from a fresh x~0 onto the designated ancilla copies
        it regardless of which eigenstate it is."""
        if self._iy is None:
            self.bootstrap_iy()
        ctl = self.prepare_xzero()
        self._controlled_zx(ctl, self._iy)
        return ctl

    def measure_zx_qubit(self, q: int) -> int:
        """Measure in the designated ZX eigenbasis: controlled-ZX from q onto
        the ancilla turns q into x~1 (same as ancilla) or x~0 (orthogonal),
        then measure X. Returns 1 for the designated (+i) outcome."""
        if self._iy is None:
            self.bootstrap_iy()
        self._controlled_zx(q, self._iy)
        return self.measure_x(q).digit

    # -- logical circuit files -----------------------------------------------------------------

    def run_circuit_line(self, line: str, names: dict[str, int]) -> str | None:
        toks = line.split()
        op = toks[0]
        if op == "enc":
            names[toks[1]] = self.encode(int(toks[2]))
            return None
        if op == "tof":
            self.toffoli(names[toks[1]], names[toks[2]], names[toks[3]])
            return None
        if op == "csum":
            self.controlled_sum(names[toks[1]], names[toks[2]])
            return None
        if op == "x":
            self.gate_x(names[toks[1]])
            return None
        if op == "z":
            self.gate_z(names[toks[1]])
            return None
        if op == "mz":
            out = self.measure_z(names[toks[1]])
            return f"result q={toks[1]} basis=Z digit={out.digit}"
        if op == "mx":
            out = self.measure_x(names[toks[1]])
            return f"result q={toks[1]} basis=X digit={out.digit}"
        if op == "mxz":
            j = self.measure_xazb(names[toks[1]], int(toks[2]), int(toks[3]))
            return f"result q={toks[1]} basis=X{toks[2]}Z{toks[3]} digit={j}"
        raise RegisterError(f"unknown circuit op {op!r}")


def run_logical_circuit(register: QuditRegister, text: str) -> list[str]:
    names: dict[str, int] = {}
    out: list[str] = []
    for raw in text.splitlines():
        line = raw.split("#")[0].strip()
        if not line:
            continue
        res = register.run_circuit_line(line, names)
        if res is not None:
            out.append(res)
    return out
