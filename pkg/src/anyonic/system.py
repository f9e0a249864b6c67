"""The physical layer: an ordered line of anyons with braiding and fusion.

State model
-----------

The ensemble is a weighted list of pure branches (superselection sectors
decohere into separate branches). Each branch is a sparse map from
configurations to complex amplitudes. A configuration assigns one integer to
every anyon slot:

- ``0 .. n-1``            magnetic flux (element index in the group),
- ``n .. 2n-1``           charge-pair carrier holding the accumulated label
                          gamma (the pair state is (R(gamma) (x) 1) |Phi0>),
- ``2n``                  the carrier's dual partner (no independent state),
- ``2n+1 ..``             carrier after a residual fusion: the unnormalized
                          state (1 - |Phi0><Phi0|)(R(gamma) (x) 1)|Phi0>.

Braiding convention (fixed): a counterclockwise exchange of adjacent (h, g)
yields (h g h^-1, h) -- the anyon passing above is conjugated by the flux of
the one passing below; clockwise uses the inverse flux. Transporting a
trivial-total-flux pair below the line is free, so pair transport is pure
relabeling; fusing members of two such pairs likewise has no side effects
(the crossed partner commutes with the mover's flux configuration by
configuration).

Fusion computes the exact vacuum-channel amplitude, samples the outcome, and
either removes the pair (vacuum) or applies the orthogonal projection,
leaving both anyons in place as a marked lump. Discarding anyons traces them
out exactly: flux values split branches directly (orthonormal basis), charge
carriers split through the character Gram matrix of their internal states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .groups import FiniteGroup, GroupElement
from .reps import Representation

AMP_TOL = 1e-15
NORM_TOL = 1e-9


class SimulationError(RuntimeError):
    pass


class ConjugationRefusedError(SimulationError):
    """A pair with non-trivial total flux may not be passed through others:
    it would corrupt every qudit it crosses."""


class SectorModelError(ValueError):
    pass


@dataclass
class SectorModel:
    """Probabilities for the superselection sector of a fresh vacuum pair.

    ``magnetic`` maps conjugacy-class ids to weights; ``charged_weight`` is
    the aggregated electric/dyonic branch, modeled as a charge-token pair
    carrying ``charged_rep``. The physical distribution is not fixed by the
    theory; acceptance runs use :meth:`concentrated` on the class of b.
    """

    group: FiniteGroup
    magnetic: dict[int, float]
    charged_weight: float = 0.0
    charged_rep: Representation | None = None

    def __post_init__(self) -> None:
        total = sum(self.magnetic.values()) + self.charged_weight
        if any(w < 0 for w in self.magnetic.values()) or self.charged_weight < 0:
            raise SectorModelError("sector weights must be nonnegative")
        if abs(total - 1.0) > NORM_TOL:
            raise SectorModelError(f"sector weights sum to {total}, not 1")
        if self.charged_weight > 0 and self.charged_rep is None:
            raise SectorModelError("charged branch needs a representation")

    @classmethod
    def concentrated(
        cls,
        group: FiniteGroup,
        g: GroupElement | int,
        charged_weight: float = 0.0,
        charged_rep: Representation | None = None,
    ) -> "SectorModel":
        gi = g if isinstance(g, int) else group.index_of(g)
        cid = group.class_of(gi)
        return cls(group, {cid: 1.0 - charged_weight}, charged_weight, charged_rep)

    @classmethod
    def uniform(
        cls,
        group: FiniteGroup,
        charged_weight: float = 0.0,
        charged_rep: Representation | None = None,
    ) -> "SectorModel":
        classes = group.conjugacy_classes()
        w = (1.0 - charged_weight) / len(classes)
        return cls(group, {i: w for i in range(len(classes))}, charged_weight, charged_rep)

    def sectors(self) -> list[tuple[float, int | None]]:
        """(weight, class id), class id None for the charged branch."""
        out: list[tuple[float, int | None]] = [
            (w, cid) for cid, w in sorted(self.magnetic.items()) if w > 0
        ]
        if self.charged_weight > 0:
            out.append((self.charged_weight, None))
        return out


@dataclass
class Anyon:
    aid: int
    pair: int
    side: int  # 0 = left/carrier, 1 = right/dual
    fused: int | None = None
    alive: bool = True


@dataclass
class Pair:
    pid: int
    kind: str  # "flux" | "vacuum" | "probe"
    anyons: tuple[int, int]
    rep: Representation | None = None
    alive: bool = True


@dataclass
class Branch:
    weight: float
    amps: dict[tuple[int, ...], complex]


@dataclass
class FusionOutcome:
    vacuum: bool
    p_vacuum: float
    residual_flux_summary: dict[str, float] | None = None


class AnyonSystem:
    """Single-owner mutable simulation state; see module docstring."""

    def __init__(
        self,
        group: FiniteGroup,
        rng: np.random.Generator | int | None = None,
        sample_sectors: bool = False,
        transcript: list[str] | None = None,
    ):
        self.group = group
        if rng is None or isinstance(rng, int):
            rng = np.random.default_rng(rng)
        self.rng = rng
        self.sample_sectors = sample_sectors
        self.transcript = transcript
        self.anyons: dict[int, Anyon] = {}
        self.pairs: dict[int, Pair] = {}
        self.order: list[int] = []
        self.slot_of: dict[int, int] = {}
        self.slot_owner: list[int] = []
        self.branches: list[Branch] = [Branch(1.0, {(): 1.0 + 0.0j})]
        self._next_aid = 0
        self._next_pid = 0
        self._next_lump = 0
        n = len(group)
        self._carrier_base = n
        self._dual_value = 2 * n
        self._residual_base = 2 * n + 1

    # -- bookkeeping ---------------------------------------------------------

    def _emit(self, line: str) -> None:
        if self.transcript is not None:
            self.transcript.append(line)

    def _append_pair(self, kind: str, rep: Representation | None = None) -> Pair:
        pid = self._next_pid
        self._next_pid += 1
        aids = []
        for side in (0, 1):
            aid = self._next_aid
            self._next_aid += 1
            self.anyons[aid] = Anyon(aid, pid, side)
            aids.append(aid)
        pair = Pair(pid, kind, (aids[0], aids[1]), rep)
        self.pairs[pid] = pair
        self.order.extend(aids)
        for aid in aids:
            self.slot_of[aid] = len(self.slot_owner)
            self.slot_owner.append(aid)
        return pair

    def _value_kind(self, v: int) -> str:
        if v < self._carrier_base:
            return "flux"
        if v < self._dual_value:
            return "carrier"
        if v == self._dual_value:
            return "dual"
        return "residual"

    def _flux_of_value(self, v: int) -> int:
        return v if v < self._carrier_base else self.group.identity_index

    def _gamma_of_value(self, v: int) -> int:
        if v < self._dual_value:
            return v - self._carrier_base
        return v - self._residual_base

    # -- creation ---------------------------------------------------------------

    def create_flux_ancilla(self, g: GroupElement | int) -> Pair:
        """|g> (x) |g^-1> with trivial charge, appended at the right end."""
        gi = g if isinstance(g, int) else self.group.index_of(g)
        pair = self._append_pair("flux")
        ginv = self.group.inv(gi)
        for br in self.branches:
            br.amps = {cfg + (gi, ginv): a for cfg, a in br.amps.items()}
        return pair

    def create_vacuum_pair(self, model: SectorModel) -> Pair:
        """Fresh pair with vacuum quantum numbers; decoheres per sector.

        Eager mode appends one ensemble branch per sector; sample mode draws
        the sector (one transcript event, one rng draw)."""
        if model.group is not self.group:
            raise SectorModelError("sector model bound to a different group")
        pair = self._append_pair("vacuum", rep=model.charged_rep)
        sectors = model.sectors()
        if self.sample_sectors and len(sectors) > 1:
            weights = np.array([w for w, _ in sectors])
            k = int(self.rng.choice(len(sectors), p=weights / weights.sum()))
            w, cid = sectors[k]
            label = (
                "charged"
                if cid is None
                else str(self.group.elements[self.group.conjugacy_classes()[cid][0]])
            )
            self._emit(f"sector-sample pair{pair.pid} sector={label} p={w:.9f}")
            sectors = [(1.0, cid)]
        new_branches: list[Branch] = []
        for br in self.branches:
            for w, cid in sectors:
                amps: dict[tuple[int, ...], complex] = {}
                if cid is None:
                    car = self._carrier_base + self.group.identity_index
                    for cfg, a in br.amps.items():
                        amps[cfg + (car, self._dual_value)] = a
                else:
                    members = self.group.conjugacy_classes()[cid]
                    scale = 1.0 / math.sqrt(len(members))
                    for cfg, a in br.amps.items():
                        for g in members:
                            amps[cfg + (g, self.group.inv(g))] = a * scale
                new_branches.append(Branch(br.weight * w, amps))
        self.branches = new_branches
        return pair

    def create_charge_probe(self, rep: Representation, verify: bool = True) -> Pair:
        """Probe pair in the maximally entangled state over rep (x) dual."""
        if verify and not getattr(rep, "_verified", False):
            rep.verify(tol=1e-9)
            rep._verified = True
        pair = self._append_pair("probe", rep=rep)
        car = self._carrier_base + self.group.identity_index
        for br in self.branches:
            br.amps = {cfg + (car, self._dual_value): a for cfg, a in br.amps.items()}
        return pair

    def inject_pair_state(self, pair: Pair | int, amplitudes: dict[int, complex]) -> None:
        """Test bridge: put a flux pair into sum_g amp_g |g> (x) |g^-1>.
        Applies to every branch; amplitudes must be normalized."""
        pair = self.pairs[pair] if isinstance(pair, int) else pair
        norm = sum(abs(a) ** 2 for a in amplitudes.values())
        if abs(norm - 1.0) > NORM_TOL:
            raise SimulationError(f"injected state has norm^2 {norm}")
        sl, sr = (self.slot_of[a] for a in pair.anyons)
        G = self.group
        for br in self.branches:
            new_amps: dict[tuple[int, ...], complex] = {}
            seen_rest = set()
            for cfg, a in br.amps.items():
                rest = tuple(v for k, v in enumerate(cfg) if k not in (sl, sr))
                if rest in seen_rest:
                    continue
                seen_rest.add(rest)
                for g, amp in amplitudes.items():
                    lst = list(cfg)
                    lst[sl] = g
                    lst[sr] = G.inv(g)
                    new_amps[tuple(lst)] = a * amp
            br.amps = new_amps

    # -- positions ------------------------------------------------------------------

    def position(self, aid: int) -> int:
        return self.order.index(aid)

    def move_pair(self, pid: int, after: int | None = None) -> None:
        """Transport a pair below the line (free relabel): insert after anyon
        ``after``, or at the left end when None."""
        pair = self.pairs[pid]
        left, right = pair.anyons
        rest = [a for a in self.order if a not in (left, right)]
        pos = 0 if after is None else rest.index(after) + 1
        rest[pos:pos] = [left, right]
        self.order = rest

    def _require_alive(self, *aids: int) -> None:
        for aid in aids:
            a = self.anyons.get(aid)
            if a is None or not a.alive:
                raise SimulationError(f"anyon a{aid} is not on the line")
            if a.fused is not None:
                raise SimulationError(f"anyon a{aid} is part of a fused lump")

    # -- braiding ----------------------------------------------------------------------

    def exchange(self, pos: int, direction: str) -> None:
        """Exchange the anyons at positions (pos, pos+1).

        ccw: (h, g) -> (h g h^-1, h); cw: (h, g) -> (g, g^-1 h g).
        """
        if direction not in ("cw", "ccw"):
            raise SimulationError(f"direction must be cw|ccw, got {direction!r}")
        if not 0 <= pos < len(self.order) - 1:
            raise SimulationError(f"position {pos} out of range")
        left, right = self.order[pos], self.order[pos + 1]
        self._require_alive(left, right)
        G = self.group
        mover, stay = (right, left) if direction == "ccw" else (left, right)
        sm, ss = self.slot_of[mover], self.slot_of[stay]
        mover_rec = self.anyons[mover]
        partner_slot = None
        if mover_rec.side == 1:
            partner = self.pairs[mover_rec.pair].anyons[0]
            if self.anyons[partner].alive:
                partner_slot = self.slot_of[partner]
        for br in self.branches:
            new_amps: dict[tuple[int, ...], complex] = {}
            for cfg, a in br.amps.items():
                f = self._flux_of_value(cfg[ss])
                if direction == "cw":
                    f = G.inv(f)
                if f == G.identity_index:
                    new_amps[cfg] = new_amps.get(cfg, 0.0) + a
                    continue
                vm = cfg[sm]
                kind = self._value_kind(vm)
                lst = list(cfg)
                if kind == "flux":
                    lst[sm] = G.conj(vm, f)
                elif kind == "carrier":
                    lst[sm] = self._carrier_base + G.mul(f, self._gamma_of_value(vm))
                elif kind == "dual":
                    if partner_slot is None:
                        raise SimulationError("dual token lost its carrier")
                    vc = cfg[partner_slot]
                    base = (
                        self._carrier_base if vc < self._dual_value else self._residual_base
                    )
                    lst[partner_slot] = base + G.mul(self._gamma_of_value(vc), G.inv(f))
                else:
                    raise SimulationError("cannot braid a residual lump")
                key = tuple(lst)
                new_amps[key] = new_amps.get(key, 0.0) + a
            br.amps = new_amps
        self.order[pos], self.order[pos + 1] = right, left

    def conjugate_pair(
        self, actor: Pair | int, target: Pair | int, power: int = 1
    ) -> None:
        """Pass the target pair through the actor pair: the target's fluxes
        are conjugated by the actor's left flux (power -1: by its inverse);
        the actor is unchanged. Realized by the four-exchange pass-through
        sequence after free pair transport."""
        actor = self.pairs[actor] if isinstance(actor, int) else actor
        target = self.pairs[target] if isinstance(target, int) else target
        if actor.pid == target.pid:
            raise SimulationError("actor and target must be distinct pairs")
        if power not in (1, -1):
            raise SimulationError("power must be +1 or -1")
        self._require_alive(*actor.anyons, *target.anyons)
        for pair, role in ((target, "target"), (actor, "actor")):
            if not self.pair_flux_is_trivial(pair):
                raise ConjugationRefusedError(
                    f"{role} pair{pair.pid} has non-trivial total flux; braiding "
                    "it would corrupt other qudits"
                )
        saved = list(self.order)
        self.move_pair(target.pid, after=actor.anyons[1])
        p = self.position(actor.anyons[0])
        direction = "cw" if power == 1 else "ccw"
        for q in (p + 1, p + 2, p + 2, p + 1):
            self.exchange(q, direction)
        self.order = saved

    def pair_flux_is_trivial(self, pair: Pair | int) -> bool:
        pair = self.pairs[pair] if isinstance(pair, int) else pair
        sl, sr = (self.slot_of[a] for a in pair.anyons)
        ident = self.group.identity_index
        for br in self.branches:
            for cfg in br.amps:
                f = self.group.mul(
                    self._flux_of_value(cfg[sl]), self._flux_of_value(cfg[sr])
                )
                if f != ident:
                    return False
        return True

    def total_flux_values(self) -> set[int]:
        """Left-to-right flux product over the whole line, per config."""
        out = set()
        for br in self.branches:
            for cfg in br.amps:
                f = self.group.identity_index
                for aid in self.order:
                    f = self.group.mul(f, self._flux_of_value(cfg[self.slot_of[aid]]))
                out.add(f)
        return out

    # -- fusion -----------------------------------------------------------------------

    def fuse(self, i: int, j: int, label: str = "fuse") -> FusionOutcome:
        """Fuse two anyons. Vacuum removes both; residual leaves the exact
        orthogonally-projected state in place as a marked lump (discard it
        together with the leftover partners)."""
        if i == j:
            raise SimulationError("cannot fuse an anyon with itself")
        self._require_alive(i, j)
        ai, aj = self.anyons[i], self.anyons[j]
        same_pair = ai.pair == aj.pair
        rep = self.pairs[ai.pair].rep if same_pair else None
        si, sj = self.slot_of[i], self.slot_of[j]
        G = self.group

        # vacuum-channel amplitudes, keyed by (rest config, channel)
        p_branches: list[float] = []
        vacs: list[dict[tuple, complex]] = []
        for br in self.branches:
            v: dict[tuple, complex] = {}
            for cfg, a in br.amps.items():
                vi, vj = cfg[si], cfg[sj]
                ki, kj = self._value_kind(vi), self._value_kind(vj)
                if ki == "flux" and kj == "flux":
                    if vj != G.inv(vi):
                        continue
                    cid = G.class_of(vi)
                    coeff = 1.0 / math.sqrt(len(G.class_members(vi)))
                    key = (self._strip(cfg, (si, sj)), ("flux", cid))
                elif same_pair and {ki, kj} == {"carrier", "dual"}:
                    gamma = self._gamma_of_value(vi if ki == "carrier" else vj)
                    assert rep is not None
                    coeff = rep.vacuum_amplitude(gamma)
                    if coeff == 0.0:
                        continue
                    key = (self._strip(cfg, (si, sj)), ("charge",))
                else:
                    continue
                v[key] = v.get(key, 0.0) + a * coeff
            p_branches.append(sum(abs(x) ** 2 for x in v.values()))
            vacs.append(v)
        p_total = sum(b.weight * p for b, p in zip(self.branches, p_branches))
        p_total = min(max(p_total, 0.0), 1.0)
        vacuum = bool(self.rng.random() < p_total)
        self._emit(
            f"{label} a{i} a{j} outcome={'vacuum' if vacuum else 'residual'} "
            f"p_vacuum={p_total:.9f}"
        )
        if vacuum:
            new_branches = []
            for br, p, v in zip(self.branches, p_branches, vacs):
                if p <= 0.0:
                    continue
                scale = 1.0 / math.sqrt(p)
                amps: dict[tuple[int, ...], complex] = {}
                for (rest, _chan), x in v.items():
                    amps[rest] = amps.get(rest, 0.0) + x * scale
                new_branches.append(Branch(br.weight * p / p_total, amps))
            self.branches = new_branches
            self._normalize_weights()
            self._drop_pair_liveness(i, j)
            self._remove_anyons([i, j])
            return FusionOutcome(True, p_total)

        summary: dict[str, float] = {}
        new_branches = []
        for br, p, v in zip(self.branches, p_branches, vacs):
            if p >= 1.0 - 1e-12:
                continue
            amps = dict(br.amps)
            # switch charge configs to the residual encoding
            if same_pair and rep is not None:
                for cfg in list(amps.keys()):
                    vi, vj = cfg[si], cfg[sj]
                    ki, kj = self._value_kind(vi), self._value_kind(vj)
                    if {ki, kj} == {"carrier", "dual"}:
                        a = amps.pop(cfg)
                        lst = list(cfg)
                        car = si if ki == "carrier" else sj
                        lst[car] = self._residual_base + self._gamma_of_value(cfg[car])
                        amps[tuple(lst)] = a
            # subtract flux vacuum components, spread over each class
            for (rest, chan), x in v.items():
                if chan[0] != "flux":
                    continue
                members = G.conjugacy_classes()[chan[1]]
                coeff = x / math.sqrt(len(members))
                for g in members:
                    cfg = self._unstrip(rest, (si, sj), (g, G.inv(g)))
                    amps[cfg] = amps.get(cfg, 0.0) - coeff
            scale = 1.0 / math.sqrt(1.0 - p)
            amps = {cfg: a * scale for cfg, a in amps.items() if abs(a) > AMP_TOL}
            w = br.weight * (1.0 - p) / (1.0 - p_total)
            new_branches.append(Branch(w, amps))
            for cfg, a in amps.items():
                f = G.mul(self._flux_of_value(cfg[si]), self._flux_of_value(cfg[sj]))
                key = str(G.elements[f])
                summary[key] = summary.get(key, 0.0) + w * abs(a) ** 2
        self.branches = new_branches
        self._normalize_weights()
        lump = self._next_lump
        self._next_lump += 1
        for aid in (i, j):
            self.anyons[aid].fused = lump
        self._drop_pair_liveness(i, j)
        return FusionOutcome(False, p_total, summary)

    def _drop_pair_liveness(self, *aids: int) -> None:
        for aid in aids:
            self.pairs[self.anyons[aid].pair].alive = False

    def _strip(self, cfg: tuple[int, ...], slots: tuple[int, int]) -> tuple[int, ...]:
        return tuple(v for k, v in enumerate(cfg) if k not in slots)

    def _unstrip(
        self, rest: tuple[int, ...], slots: tuple[int, int], values: tuple[int, int]
    ) -> tuple[int, ...]:
        lo, hi = sorted(slots)
        vals = {slots[0]: values[0], slots[1]: values[1]}
        out = list(rest)
        out.insert(lo, vals[lo])
        out.insert(hi, vals[hi])
        return tuple(out)

    def _remove_anyons(self, aids: Sequence[int]) -> None:
        slots = {self.slot_of[a] for a in aids}
        for br in self.branches:
            br.amps = {
                tuple(v for k, v in enumerate(cfg) if k not in slots): a
                for cfg, a in br.amps.items()
            }
        for aid in aids:
            self.anyons[aid].alive = False
            self.order.remove(aid)
            del self.slot_of[aid]
        dead = set(aids)
        self.slot_owner = [a for a in self.slot_owner if a not in dead]
        for k, owner in enumerate(self.slot_owner):
            self.slot_of[owner] = k

    # -- probes ------------------------------------------------------------------------

    def encircle_with_probe(self, probe: Pair | int, enclosed: Sequence[int]) -> None:
        """Drag the probe carrier once (ccw) around a contiguous anyon set:
        gamma <- (left-to-right flux product) * gamma, per configuration."""
        probe = self.pairs[probe] if isinstance(probe, int) else probe
        if probe.kind != "probe" or not probe.alive:
            raise SimulationError("encircle needs a live probe pair")
        carrier = probe.anyons[0]
        self._require_alive(carrier)
        if carrier in enclosed or probe.anyons[1] in enclosed:
            raise SimulationError("probe cannot encircle itself")
        positions = sorted(self.position(a) for a in enclosed)
        if positions != list(range(positions[0], positions[0] + len(positions))):
            raise SimulationError("enclosed anyon set must be contiguous")
        by_pos = sorted(enclosed, key=self.position)
        slots = [self.slot_of[a] for a in by_pos]
        sc = self.slot_of[carrier]
        G = self.group
        for br in self.branches:
            new_amps: dict[tuple[int, ...], complex] = {}
            for cfg, a in br.amps.items():
                f = G.identity_index
                for s in slots:
                    f = G.mul(f, self._flux_of_value(cfg[s]))
                if f == G.identity_index:
                    key = cfg
                else:
                    lst = list(cfg)
                    lst[sc] = self._carrier_base + G.mul(f, self._gamma_of_value(cfg[sc]))
                    key = tuple(lst)
                new_amps[key] = new_amps.get(key, 0.0) + a
            br.amps = new_amps

    def fuse_probe(self, probe: Pair | int) -> bool:
        """Fuse the probe pair with itself; vacuum w.p. |chi(gamma)/m|^2 per
        flux configuration. The pair is consumed either way."""
        probe = self.pairs[probe] if isinstance(probe, int) else probe
        if probe.kind != "probe" or not probe.alive:
            raise SimulationError("fuse_probe needs a live probe pair")
        out = self.fuse(probe.anyons[0], probe.anyons[1], label="probe-fuse")
        if not out.vacuum:
            self.discard(list(probe.anyons))
        return out.vacuum

    # -- measurement-flavored operations -------------------------------------------------

    def flux_sample(self, aids: Sequence[int]) -> int:
        """Projectively sample the left-to-right flux product of a set of
        anyons (decoheres the flux basis); returns the element index."""
        for aid in aids:
            if not self.anyons[aid].alive:
                raise SimulationError(f"anyon a{aid} is not on the line")
        by_pos = sorted(aids, key=self.position)
        slots = [self.slot_of[a] for a in by_pos]
        G = self.group
        dist: dict[int, float] = {}
        tagged: list[list[tuple[tuple[int, ...], complex, int]]] = []
        for br in self.branches:
            rows = []
            for cfg, a in br.amps.items():
                f = G.identity_index
                for s in slots:
                    f = G.mul(f, self._flux_of_value(cfg[s]))
                rows.append((cfg, a, f))
                dist[f] = dist.get(f, 0.0) + br.weight * abs(a) ** 2
            tagged.append(rows)
        total = sum(dist.values())
        outcomes = sorted(dist)
        probs = np.array([dist[f] / total for f in outcomes])
        choice = int(self.rng.choice(len(outcomes), p=probs))
        f_star = outcomes[choice]
        self._emit(
            f"flux-sample [{' '.join('a%d' % a for a in by_pos)}] "
            f"value={G.elements[f_star]} p={probs[choice]:.9f}"
        )
        mass = dist[f_star]
        new_branches = []
        for br, rows in zip(self.branches, tagged):
            amps = {cfg: a for cfg, a, f in rows if f == f_star}
            norm2 = sum(abs(a) ** 2 for a in amps.values())
            if norm2 <= AMP_TOL:
                continue
            scale = 1.0 / math.sqrt(norm2)
            new_branches.append(
                Branch(br.weight * norm2 / mass, {c: a * scale for c, a in amps.items()})
            )
        self.branches = new_branches
        self._normalize_weights()
        return f_star

    def flux_is_trivial_destructive(self, aids: Sequence[int] | int) -> bool:
        """Sample the flux of an anyon (or fused lump); true iff identity.
        The measured anyons are removed."""
        if isinstance(aids, int):
            aids = [aids]
        f = self.flux_sample(aids)
        self.discard(aids)
        return f == self.group.identity_index

    def compare_fluxes(
        self,
        pair1: Pair | int,
        pair2: Pair | int,
        rep: Representation,
        reps: int = 10,
    ) -> bool:
        """Equal iff ``reps`` probe loops around (pair2.right, pair1.left)
        all fuse to vacuum. One-sided: identical fluxes always pass."""
        pair1 = self.pairs[pair1] if isinstance(pair1, int) else pair1
        pair2 = self.pairs[pair2] if isinstance(pair2, int) else pair2
        self.move_pair(pair2.pid, after=None)
        self.move_pair(pair1.pid, after=pair2.anyons[1])
        enclosed = [pair2.anyons[1], pair1.anyons[0]]
        for _ in range(reps):
            probe = self.create_charge_probe(rep)
            self.encircle_with_probe(probe, enclosed)
            if not self.fuse_probe(probe):
                return False
        return True

    # -- discarding (exact trace-out) -----------------------------------------------------

    def discard(self, aids: Sequence[int]) -> None:
        """Trace out anyons: flux/lump slots decohere branches by value,
        charge carriers through their internal-state Gram matrix."""
        aids = list(aids)
        for aid in aids:
            if not self.anyons[aid].alive:
                raise SimulationError(f"anyon a{aid} already gone")
        hard_slots: list[int] = []
        soft_slots: list[tuple[int, int]] = []
        for aid in aids:
            s = self.slot_of[aid]
            kinds = {
                self._value_kind(cfg[s]) for br in self.branches for cfg in br.amps
            }
            if kinds <= {"flux", "dual"}:
                hard_slots.append(s)
            else:
                soft_slots.append((s, aid))
        if hard_slots:
            new_branches = []
            for br in self.branches:
                groups: dict[tuple[int, ...], dict[tuple[int, ...], complex]] = {}
                for cfg, a in br.amps.items():
                    key = tuple(cfg[s] for s in hard_slots)
                    groups.setdefault(key, {})[cfg] = a
                for key in sorted(groups):
                    amps = groups[key]
                    norm2 = sum(abs(a) ** 2 for a in amps.values())
                    if norm2 <= AMP_TOL:
                        continue
                    scale = 1.0 / math.sqrt(norm2)
                    new_branches.append(
                        Branch(br.weight * norm2, {c: a * scale for c, a in amps.items()})
                    )
            self.branches = new_branches
        for s, aid in soft_slots:
            rep = self.pairs[self.anyons[aid].pair].rep
            assert rep is not None
            self._discard_soft_slot(s, rep)
        self._remove_anyons(aids)
        self._normalize_weights()

    def _discard_soft_slot(self, slot: int, rep: Representation) -> None:
        """Exact partial trace over a charge-carrier slot via the character
        Gram matrix of the (possibly residual, unnormalized) internal states."""
        new_branches = []
        for br in self.branches:
            values = sorted({cfg[slot] for cfg in br.amps})
            k = len(values)
            gram = np.empty((k, k), dtype=complex)
            for x, vx in enumerate(values):
                for y, vy in enumerate(values):
                    gram[x, y] = self._soft_overlap(vx, vy, rep)
            evals, evecs = np.linalg.eigh(gram)
            vindex = {v: x for x, v in enumerate(values)}
            for s_idx in range(k):
                lam = float(evals[s_idx])
                if lam <= 1e-12:
                    continue
                u = evecs[:, s_idx]
                merged: dict[tuple[int, ...], complex] = {}
                for cfg, a in br.amps.items():
                    lst = list(cfg)
                    lst[slot] = values[0]
                    key = tuple(lst)
                    merged[key] = merged.get(key, 0.0) + a * np.conj(u[vindex[cfg[slot]]])
                norm2 = sum(abs(a) ** 2 for a in merged.values())
                if norm2 <= 1e-14:
                    continue
                scale = 1.0 / math.sqrt(norm2)
                new_branches.append(
                    Branch(br.weight * lam * norm2, {c: a * scale for c, a in merged.items()})
                )
        self.branches = new_branches

    def _soft_overlap(self, vx: int, vy: int, rep: Representation) -> complex:
        """<state(vx)|state(vy)> for carrier encodings (residual states are
        unnormalized projections, so the vacuum cross term is subtracted)."""
        gx, gy = self._gamma_of_value(vx), self._gamma_of_value(vy)
        G = self.group
        base = rep.vacuum_amplitude(G.mul(G.inv(gx), gy))
        if vx >= self._residual_base or vy >= self._residual_base:
            return base - np.conj(rep.vacuum_amplitude(gx)) * rep.vacuum_amplitude(gy)
        return base

    def _normalize_weights(self) -> None:
        total = sum(br.weight for br in self.branches)
        if total <= 0:
            raise SimulationError("ensemble weight vanished")
        for br in self.branches:
            br.weight /= total

    # -- invariants ------------------------------------------------------------------------

    def validate(self, tol: float = NORM_TOL) -> None:
        """Branch norms, weight normalization, per-branch sector consistency."""
        total = sum(br.weight for br in self.branches)
        if abs(total - 1.0) > tol:
            raise AssertionError(f"ensemble weights sum to {total}")
        for br in self.branches:
            n2 = self._branch_norm2(br)
            if abs(n2 - 1.0) > tol:
                raise AssertionError(f"branch norm^2 = {n2}")
            for s in range(len(self.slot_owner)):
                tags = set()
                for cfg in br.amps:
                    v = cfg[s]
                    if self._value_kind(v) == "flux":
                        tags.add(("flux", self.group.class_of(v)))
                    else:
                        tags.add(("charge",))
                if len(tags) > 1:
                    raise AssertionError(
                        f"slot {s} mixes superselection sectors within a branch"
                    )

    def _branch_norm2(self, br: Branch) -> float:
        soft = [
            s
            for s in range(len(self.slot_owner))
            if any(
                self._value_kind(cfg[s]) in ("carrier", "residual") for cfg in br.amps
            )
        ]
        if not soft:
            return sum(abs(a) ** 2 for a in br.amps.values())
        total = 0.0
        groups: dict[tuple, list[tuple[tuple, complex]]] = {}
        for cfg, a in br.amps.items():
            key = tuple(v for k, v in enumerate(cfg) if k not in soft)
            groups.setdefault(key, []).append((cfg, a))
        for rows in groups.values():
            for cfg_x, ax in rows:
                for cfg_y, ay in rows:
                    prod = complex(np.conj(ax) * ay)
                    for s in soft:
                        rep = self.pairs[self.anyons[self.slot_owner[s]].pair].rep
                        assert rep is not None
                        prod *= self._soft_overlap(cfg_x[s], cfg_y[s], rep)
                    total += prod.real
        return total
