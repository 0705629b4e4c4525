"""Taut position: singular monogon/bigon detection and reduction.

The reducer works on a mutable copy of a configuration whose edges all
carry readings.  A reduction deletes a subpath X of some trace and
reroutes the curve along a replacement route: an edge path `rail` from
the same start to the same end (possibly empty, possibly turning
corners), hugged on a consistent side.  Every crossing the new route
creates is accounted exactly: a gadget sweep crosses each live germ in
its angular interval once, and two interleaving sweeps at the same
vertex cross each other once, at the deeper sweep's endpoint.

Monogon contraction is the empty-rail case, singular bigon removal
rides a homotopic partner subpath, and the triangle slide is the
one-edge case whose rail turns a corner across the triangle.

Every surgery is verified on the spot: the configuration must stay
valid and every trace must keep its free homotopy class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .config import ConfigError, RibbonConfiguration, normalize
from .homotopy import ensure_readings
from .words import (CyclicWord, _free_reduce, _invert, are_freely_homotopic,
                    is_trivial)


class TautError(RuntimeError):
    pass


class _RerouteFailed(Exception):
    pass


LANE = Fraction(1, 5)


@dataclass
class ReductionMove:
    kind: str          # remove_monogon | remove_bigon | triangle_slide
    curve: str
    start: int
    length: int
    partner: tuple = None

    def describe(self):
        if self.partner is not None:
            return "%s %s[%d+%d] ~ %s[%d+%d]" % (
                self.kind, self.curve, self.start, self.length,
                self.partner[0], self.partner[1], self.partner[2])
        return "%s %s[%d+%d]" % (self.kind, self.curve, self.start, self.length)


class _Sweep:
    """Open angular interval at a vertex, walked in one direction."""

    def __init__(self, rot_len, start, end, direction):
        self.L = rot_len
        self.a = Fraction(start)
        self.b = Fraction(end)
        self.dir = direction

    def rel(self, x):
        d = (Fraction(x) - self.a) if self.dir > 0 else (self.a - Fraction(x))
        return d % self.L

    @property
    def span(self):
        return self.rel(self.b)

    def contains(self, x):
        r = self.rel(x)
        return 0 < r < self.span

    def interior_slots(self):
        hits = [k for k in range(self.L) if self.contains(k)]
        return sorted(hits, key=self.rel)


class _Pass:
    def __init__(self, vertex, sweep):
        self.vertex = vertex
        self.sweep = sweep
        self.events = []  # (rel, event)


class _Event:
    __slots__ = ("kind", "vertex", "name", "germ", "passes", "deep_at_end",
                 "toward_half", "away_half", "slots")

    def __init__(self, kind, vertex):
        self.kind = kind  # "germ" | "self"
        self.vertex = vertex
        self.name = None
        self.germ = None
        self.passes = []
        self.deep_at_end = None
        self.toward_half = None
        self.away_half = None
        self.slots = []   # per route visit: (in_half, out_half)


class _State:
    """Mutable copy of a configuration with readings and traces."""

    def __init__(self, config):
        ensure_readings(config)
        self.surface = config.surface
        self.rotations = {v: list(r) for v, r in config.rotations.items()}
        self.edges = {e: list(ends) for e, ends in config.edges.items()}
        self.twists = dict(config.twists)
        self.readings = {e: tuple(config.readings[e]) for e in config.edges}
        self.traces = {c: list(t) for c, t in config.curves.items()}
        self._fresh = 0
        self._names = set(self.edges) | set(self.rotations) | {
            h for ends in self.edges.values() for h in ends}

    def fresh(self, prefix):
        while True:
            self._fresh += 1
            name = "%s%d" % (prefix, self._fresh)
            if name not in self._names:
                self._names.add(name)
                return name

    def half_vertex(self):
        out = {}
        for v, rot in self.rotations.items():
            for i, h in enumerate(rot):
                out[h] = (v, i)
        return out

    def tail_half(self, de):
        e, d = de
        return self.edges[e][0] if d > 0 else self.edges[e][1]

    def head_half(self, de):
        e, d = de
        return self.edges[e][1] if d > 0 else self.edges[e][0]

    def reading_of(self, de):
        e, d = de
        r = self.readings[e]
        return r if d > 0 else _invert(r)

    def trace_letters(self, curve):
        out = []
        for de in self.traces[curve]:
            out.extend(self.reading_of(de))
        return tuple(_free_reduce(out))

    def subpath_letters(self, curve, start, length):
        t = self.traces[curve]
        out = []
        for j in range(length):
            out.extend(self.reading_of(t[(start + j) % len(t)]))
        return tuple(out)

    def crossing_pairs(self):
        total = 0
        for rot in self.rotations.values():
            n = len(rot) // 2
            total += n * (n - 1) // 2
        return total

    def to_config(self):
        cfg = RibbonConfiguration(
            self.surface, {v: tuple(r) for v, r in self.rotations.items()},
            {e: tuple(ends) for e, ends in self.edges.items()},
            dict(self.twists), {c: tuple(t) for c, t in self.traces.items()})
        cfg.readings = dict(self.readings)
        return cfg


# ----------------------------------------------------------------------
# surgery engine


def _resolve_sub(de, edge_sub):
    """Expand a directed edge through chained splits."""
    if de not in edge_sub:
        return [de]
    out = []
    for piece in edge_sub[de]:
        if piece in edge_sub and piece != de:
            out.extend(_resolve_sub(piece, edge_sub))
        else:
            out.append(piece)
    return out


def _substitute_trace(trace, edge_sub):
    out = []
    for de in trace:
        out.extend(_resolve_sub(de, edge_sub))
    return out


def _splice(trace, start, length, replacement):
    """Replace trace[start : start+length] (cyclic) by the replacement,
    keeping the neighbors in place.  Returns a plain list starting just
    after the replaced block."""
    n = len(trace)
    out = []
    for j in range(n - length):
        out.append(trace[(start + length + j) % n])
    return out + list(replacement)


def _reroute(state, curve, start, length, rail, mono_dir=None):
    """Delete trace[start : start+length] of `curve` and reroute along
    `rail` (a directed edge path between the same endpoints; may turn
    corners; empty for monogon contraction)."""
    st = _State(state.to_config())
    trace = list(st.traces[curve])
    n = len(trace)
    if length >= n:
        raise TautError("use contract_curve for whole-trace loops")
    half_vertex = st.half_vertex()

    x_edges = [trace[(start + j) % n] for j in range(length)]
    prev_de = trace[(start - 1) % n]
    next_de = trace[(start + length) % n]
    x_in = st.head_half(prev_de)
    x_out = st.tail_half(next_de)
    A = half_vertex[x_in][0]
    B = half_vertex[x_out][0]

    deleted = set()
    for de in x_edges:
        deleted.add(st.tail_half(de))
        deleted.add(st.head_half(de))
    deleted.add(x_in)
    deleted.add(x_out)

    def pos(h):
        return half_vertex[h][1]

    passes = []

    def add_pass(v, a, b, direction):
        p = _Pass(v, _Sweep(len(state.rotations[v]), a, b, direction))
        passes.append(p)
        return p

    # ---- plan the route as passes and lane items --------------------
    items = []  # ("edge", de) | ("pass", pass)

    if not rail:
        if A != B:
            raise TautError("empty rail requires matching endpoints")
        if mono_dir not in (+1, -1):
            raise TautError("monogon contraction needs a direction")
        p = add_pass(A, pos(x_in), pos(x_out), mono_dir)
        items.append(("pass", p))
    else:
        y_out = st.tail_half(rail[0])
        y_in_far = st.head_half(rail[-1])
        if half_vertex[y_out][0] != A or half_vertex[y_in_far][0] != B:
            raise TautError("rail endpoints do not match the subpath")
        LA = len(state.rotations[A])
        y_in_A_pos = None
        # the rail curve reaches A along the germ diametric to y_out only
        # when the rail is a straight trace subpath; for a turning rail the
        # forbidden germ is still the one the partner curve arrives on,
        # which is diametric to y_out at a transversal passage
        y_in_A_pos = (pos(y_out) + LA // 2) % LA
        ccw = _Sweep(LA, pos(x_in), Fraction(pos(y_out)) - LANE, +1)
        if not ccw.contains(y_in_A_pos) and ccw.span > 0:
            p = add_pass(A, pos(x_in), Fraction(pos(y_out)) - LANE, +1)
            wall = 0
        else:
            p = add_pass(A, pos(x_in), Fraction(pos(y_out)) + LANE, -1)
            wall = 1
        items.append(("pass", p))
        for idx, de in enumerate(rail):
            items.append(("edge", de))
            e, _d = de
            arr_wall = wall if st.twists[e] else 1 - wall
            h_head = st.head_half(de)
            w = half_vertex[h_head][0]
            Lw = len(state.rotations[w])
            if idx < len(rail) - 1:
                q = st.tail_half(rail[idx + 1])
                if half_vertex[q][0] != w:
                    raise TautError("rail edges do not chain")
                if arr_wall == 0:
                    p = add_pass(w, Fraction(pos(h_head)) - LANE,
                                 Fraction(pos(q)) + LANE, -1)
                    wall = 1
                else:
                    p = add_pass(w, Fraction(pos(h_head)) + LANE,
                                 Fraction(pos(q)) - LANE, +1)
                    wall = 0
                items.append(("pass", p))
            else:
                # final connector at B
                if w != B:
                    raise TautError("rail endpoints do not match the subpath")
                if arr_wall == 0:
                    sweep = _Sweep(Lw, Fraction(pos(h_head)) - LANE,
                                   pos(x_out), -1)
                else:
                    sweep = _Sweep(Lw, Fraction(pos(h_head)) + LANE,
                                   pos(x_out), +1)
                partner_cont = (pos(h_head) + Lw // 2) % Lw
                if sweep.contains(partner_cont):
                    raise _RerouteFailed("route ends on the wrong side")
                p = add_pass(B, sweep.a, sweep.b, sweep.dir)
                items.append(("pass", p))

    # ---- events ------------------------------------------------------
    events = []
    for p in passes:
        for slot in p.sweep.interior_slots():
            h = state.rotations[p.vertex][slot]
            if h in deleted:
                continue
            ev = _Event("germ", p.vertex)
            ev.germ = h
            ev.passes = [p]
            p.events.append((p.sweep.rel(slot), ev))
            events.append(ev)
    by_vertex = {}
    for p in passes:
        by_vertex.setdefault(p.vertex, []).append(p)
    for v, plist in by_vertex.items():
        for i in range(len(plist)):
            for j in range(i + 1, len(plist)):
                deep, shal = plist[i], plist[j]
                start_in = shal.sweep.contains(deep.sweep.a)
                end_in = shal.sweep.contains(deep.sweep.b)
                if start_in == end_in:
                    continue
                ev = _Event("self", v)
                ev.passes = [deep, shal]
                ev.deep_at_end = end_in
                anchor = deep.sweep.b if end_in else deep.sweep.a
                shal.events.append((shal.sweep.rel(anchor), ev))
                deep.events.append(
                    (deep.sweep.span if end_in else Fraction(0), ev))
                events.append(ev)
    for p in passes:
        p.events.sort(key=lambda t: t[0])

    # ---- apply deletions ----------------------------------------------
    for v in list(st.rotations):
        rot = [h for h in st.rotations[v] if h not in deleted]
        if rot:
            st.rotations[v] = rot
        else:
            del st.rotations[v]
    for de in x_edges:
        e = de[0]
        del st.edges[e], st.twists[e], st.readings[e]

    # ---- split edges crossed by germ events ----------------------------
    ordered = []
    seen = set()
    for p in passes:
        for _r, ev in p.events:
            if id(ev) not in seen:
                seen.add(id(ev))
                ordered.append(ev)
    for ev in ordered:
        ev.name = st.fresh("x")

    splits = {}
    for ev in ordered:
        if ev.kind == "germ":
            splits.setdefault(ev.germ, []).append(ev)

    edge_sub = {}
    for h, evs in splits.items():
        e = None
        for cand in st.edges:
            if h in st.edges[cand]:
                e = cand
                break
        ends = st.edges[e]
        at_tail = (ends[0] == h)
        far = ends[1] if at_tail else ends[0]
        pieces = []
        prev_anchor = h
        for ev in evs:
            ev.toward_half = st.fresh("s")
            ev.away_half = st.fresh("s")
            eid = st.fresh("E")
            st.edges[eid] = [prev_anchor, ev.toward_half]
            st.twists[eid] = False
            st.readings[eid] = ()
            pieces.append(eid)
            prev_anchor = ev.away_half
        eid = st.fresh("E")
        st.edges[eid] = [prev_anchor, far]
        if at_tail:
            st.twists[eid] = st.twists[e]
            st.readings[eid] = st.readings[e]
        else:
            st.twists[eid] = st.twists[e]
            st.readings[eid] = _invert(st.readings[e])
        pieces.append(eid)
        del st.edges[e], st.twists[e], st.readings[e]
        sub_plus = [(pc, +1) for pc in pieces]
        if at_tail:
            edge_sub[(e, +1)] = sub_plus
            edge_sub[(e, -1)] = [(pc, -1) for pc in reversed(pieces)]
        else:
            edge_sub[(e, -1)] = sub_plus
            edge_sub[(e, +1)] = [(pc, -1) for pc in reversed(pieces)]

    # the surviving neighbors may themselves have been split; find the
    # current edge and end carrying the route attachment
    def rehead(de, new_half, at_head):
        """Replace the (deleted) attachment half of a directed edge chain
        by a fresh half; returns the directed edge to use in the trace."""
        seq = _resolve_sub(de, edge_sub)
        piece = seq[-1] if at_head else seq[0]
        e, d = piece
        if at_head:
            if d > 0:
                st.edges[e][1] = new_half
            else:
                st.edges[e][0] = new_half
        else:
            if d > 0:
                st.edges[e][0] = new_half
            else:
                st.edges[e][1] = new_half
        return piece

    # ---- route edges ---------------------------------------------------
    new_route = []
    if not ordered:
        # crossing-free route: prev, lanes and next merge into one edge
        reading = list(st.reading_of(prev_de) if prev_de not in edge_sub
                       else sum((list(st.reading_of(p)) for p in edge_sub[prev_de]), []))
        twist = st.twists[prev_de[0]] if prev_de[0] in st.twists else None
        reading = []
        twist = 0
        chain_prev = _resolve_sub(prev_de, edge_sub)
        chain_next = _resolve_sub(next_de, edge_sub)
        for de in chain_prev:
            reading.extend(st.reading_of(de))
            twist ^= 1 if st.twists[de[0]] else 0
        lane_reading = []
        for de in rail:
            for piece in _resolve_sub(de, edge_sub):
                lane_reading.extend(st.reading_of(piece))
                twist ^= 1 if st.twists[piece[0]] else 0
        reading.extend(lane_reading)
        if prev_de[0] == next_de[0]:
            m = st.fresh("m")
            h1, h2 = st.fresh("s"), st.fresh("s")
            st.rotations[m] = [h1, h2]
            eid = st.fresh("E")
            st.edges[eid] = [h2, h1]
            st.twists[eid] = bool(twist)
            st.readings[eid] = tuple(reading)
            for piece in chain_prev:
                del st.edges[piece[0]], st.twists[piece[0]], st.readings[piece[0]]
            st.traces[curve] = [(eid, +1)]
        else:
            for de in chain_next:
                reading.extend(st.reading_of(de))
                twist ^= 1 if st.twists[de[0]] else 0
            merged = st.fresh("E")
            tail_h = st.tail_half(chain_prev[0])
            head_h = st.head_half(chain_next[-1])
            st.edges[merged] = [tail_h, head_h]
            st.twists[merged] = bool(twist)
            st.readings[merged] = tuple(reading)
            for piece in set(chain_prev + chain_next):
                del st.edges[piece[0]], st.twists[piece[0]], st.readings[piece[0]]
            body = _splice(trace, start, length, [])
            body = [de for de in body if de not in (prev_de, next_de)]
            body = _substitute_trace(body, edge_sub)
            idx = 0
            st.traces[curve] = body + [(merged, +1)]
    else:
        new_head = st.fresh("s")
        new_tail = st.fresh("s")
        prev_piece = rehead(prev_de, new_head, at_head=True)
        next_piece = rehead(next_de, new_tail, at_head=False)
        # junction markers glue the stubs to the new route; normalization
        # dissolves them afterwards
        route_start = st.fresh("s")
        route_end = st.fresh("s")
        st.rotations[st.fresh("j")] = [new_head, route_start]
        st.rotations[st.fresh("j")] = [route_end, new_tail]

        pending_tail = route_start
        acc = []
        twist_acc = 0
        for item in items:
            if item[0] == "edge":
                de = item[1]
                for piece in _resolve_sub(de, edge_sub):
                    acc.extend(st.reading_of(piece))
                    twist_acc ^= 1 if st.twists[piece[0]] else 0
            else:
                p = item[1]
                for _r, ev in p.events:
                    in_h, out_h = st.fresh("s"), st.fresh("s")
                    ev.slots.append((in_h, out_h))
                    eid = st.fresh("E")
                    st.edges[eid] = [pending_tail, in_h]
                    st.twists[eid] = bool(twist_acc)
                    st.readings[eid] = tuple(acc)
                    new_route.append((eid, +1))
                    acc = []
                    twist_acc = 0
                    pending_tail = out_h
        eid = st.fresh("E")
        st.edges[eid] = [pending_tail, route_end]
        st.twists[eid] = bool(twist_acc)
        st.readings[eid] = tuple(acc)
        new_route.append((eid, +1))

        for ev in ordered:
            if ev.kind == "germ":
                (in_h, out_h) = ev.slots[0]
                if ev.passes[0].sweep.dir > 0:
                    st.rotations[ev.name] = [ev.away_half, out_h,
                                             ev.toward_half, in_h]
                else:
                    st.rotations[ev.name] = [ev.away_half, in_h,
                                             ev.toward_half, out_h]
            else:
                deep, shal = ev.passes
                d_in, d_out = ev.slots[0]
                s_in, s_out = ev.slots[1]
                if ev.deep_at_end:
                    if shal.sweep.dir > 0:
                        st.rotations[ev.name] = [d_out, s_out, d_in, s_in]
                    else:
                        st.rotations[ev.name] = [d_out, s_in, d_in, s_out]
                else:
                    if shal.sweep.dir > 0:
                        st.rotations[ev.name] = [d_out, s_in, d_in, s_out]
                    else:
                        st.rotations[ev.name] = [d_out, s_out, d_in, s_in]

        body = _splice(trace, start, length, [])
        out = []
        for de in body:
            out.extend(_resolve_sub(de, edge_sub))
        # insert the new route right after prev_de
        final = []
        for de in out:
            final.append(de)
            if de == prev_piece:
                final.extend(new_route)
        st.traces[curve] = final

    # other traces: apply splits
    for c in st.traces:
        if c != curve:
            st.traces[c] = _substitute_trace(st.traces[c], edge_sub)

    return _finish(st, state, curve)


def contract_curve(state, curve):
    """Replace a null-homotopic curve by a crossing-free trivial loop."""
    st = _State(state.to_config())
    word = CyclicWord(st.trace_letters(curve))
    if not is_trivial(word, st.surface):
        raise TautError("contract_curve needs a null-homotopic curve")
    half_vertex = st.half_vertex()
    deleted = set()
    for de in st.traces[curve]:
        deleted.add(st.tail_half(de))
        deleted.add(st.head_half(de))
        del st.edges[de[0]], st.twists[de[0]], st.readings[de[0]]
    for v in list(st.rotations):
        rot = [h for h in st.rotations[v] if h not in deleted]
        if rot:
            st.rotations[v] = rot
        else:
            del st.rotations[v]
    m = st.fresh("m")
    h1, h2 = st.fresh("s"), st.fresh("s")
    st.rotations[m] = [h1, h2]
    eid = st.fresh("E")
    st.edges[eid] = [h2, h1]
    st.twists[eid] = False
    st.readings[eid] = ()
    st.traces[curve] = [(eid, +1)]
    return _finish(st, state, curve)


def _finish(st, old_state, curve):
    cfg = st.to_config()
    cfg = normalize(cfg)
    report = cfg.validate()
    if report.errors:
        raise TautError("surgery produced an invalid complex: %s"
                        % "; ".join(report.errors))
    new_state = _State(cfg)
    for c in new_state.traces:
        old_word = CyclicWord(old_state.trace_letters(c))
        new_word = CyclicWord(new_state.trace_letters(c))
        if not are_freely_homotopic(old_word, new_word, st.surface):
            raise TautError("surgery changed the class of %s" % c)
    return new_state


# ----------------------------------------------------------------------
# candidate search


def _monogon_candidates(st):
    """Subpaths returning to their start vertex with trivial based word,
    shortest first."""
    half_vertex = st.half_vertex()
    out = []
    for c in sorted(st.traces):
        t = st.traces[c]
        n = len(t)
        for length in range(1, n):
            for i in range(n):
                a = half_vertex[st.tail_half(t[i])][0]
                b = half_vertex[st.head_half(t[(i + length - 1) % n])][0]
                if a != b:
                    continue
                word = st.subpath_letters(c, i, length)
                if is_trivial(CyclicWord(word), st.surface):
                    out.append((length, c, i))
        # whole-trace loop: the curve itself is null-homotopic
        if n >= 1 and is_trivial(CyclicWord(st.trace_letters(c)), st.surface):
            if not (n == 1 and len(st.rotations[half_vertex[st.tail_half(t[0])][0]]) == 2):
                out.append((n, c, None))
    out.sort(key=lambda x: (x[0], x[1], x[2] if x[2] is not None else -1))
    return out


def _bigon_candidates(st):
    """Pairs (X, rail) of edge-disjoint subpaths with common endpoints,
    homotopic rel endpoints, rail in either orientation, ordered by
    total length.  Yields (c1, i1, k1, rail_edges)."""
    half_vertex = st.half_vertex()
    sub = []
    for c in sorted(st.traces):
        t = st.traces[c]
        n = len(t)
        for i in range(n):
            for length in range(1, n):
                a = half_vertex[st.tail_half(t[i])][0]
                b = half_vertex[st.head_half(t[(i + length - 1) % n])][0]
                sub.append((c, i, length, a, b))
    by_ab = {}
    for s in sub:
        by_ab.setdefault((s[3], s[4]), []).append(s)
    pairs = []
    for c1, i1, k1, a, b in sub:
        for c2, i2, k2, a2, b2 in by_ab.get((a, b), ()):
            if (c1, i1, k1) != (c2, i2, k2):
                pairs.append((k1 + k2, c1, i1, k1, c2, i2, k2, False))
        for c2, i2, k2, a2, b2 in by_ab.get((b, a), ()):
            if (c1, i1, k1) != (c2, i2, k2):
                pairs.append((k1 + k2, c1, i1, k1, c2, i2, k2, True))
    pairs.sort(key=lambda p: p[:7])
    out = []
    for total, c1, i1, k1, c2, i2, k2, rev in pairs:
        t1, t2 = st.traces[c1], st.traces[c2]
        n1, n2 = len(t1), len(t2)
        e1 = {t1[(i1 + j) % n1][0] for j in range(k1)}
        e2 = {t2[(i2 + j) % n2][0] for j in range(k2)}
        if e1 & e2:
            continue
        # the surviving neighbors of X must not lie on the rail, else the
        # reroute would ride its own stubs
        if t1[(i1 - 1) % n1][0] in e2 or t1[(i1 + k1) % n1][0] in e2:
            continue
        w1 = st.subpath_letters(c1, i1, k1)
        w2 = st.subpath_letters(c2, i2, k2)
        if rev:
            w2 = _invert(w2)
        if not is_trivial(CyclicWord(tuple(_free_reduce(w1 + _invert(w2)))),
                          st.surface):
            continue
        rail = [t2[(i2 + j) % n2] for j in range(k2)]
        if rev:
            rail = [(e, -d) for (e, d) in reversed(rail)]
        out.append((c1, i1, k1, rail, (c2, i2, k2, rev)))
    return out


def find_innermost_disk(config):
    """A reducing singular monogon or bigon site, if any."""
    st = _State(config)
    base = st.crossing_pairs()
    for length, c, i in _monogon_candidates(st):
        if i is None:
            if base > 0 or len(st.traces[c]) > 1:
                return ReductionMove("remove_monogon", c, 0, length)
            continue
        for d in (+1, -1):
            try:
                cand = _reroute(st, c, i, length, [], mono_dir=d)
            except _RerouteFailed:
                continue
            if cand.crossing_pairs() < base:
                return ReductionMove("remove_monogon", c, i, length)
    for c1, i1, k1, rail, partner in _bigon_candidates(st):
        try:
            cand = _reroute(st, c1, i1, k1, rail)
        except _RerouteFailed:
            continue
        if cand.crossing_pairs() < base:
            return ReductionMove("remove_bigon", c1, i1, k1, partner=partner)
    return None


def _best_reduction(st):
    """The first strictly reducing surgery in canonical order."""
    base = st.crossing_pairs()
    for length, c, i in _monogon_candidates(st):
        if i is None:
            new = contract_curve(st, c)
            if new.crossing_pairs() < base or len(st.traces[c]) > 1:
                return new, ReductionMove("remove_monogon", c, 0, length)
            continue
        best = None
        for d in (+1, -1):
            try:
                cand = _reroute(st, c, i, length, [], mono_dir=d)
            except _RerouteFailed:
                continue
            if cand.crossing_pairs() < base and (
                    best is None or cand.crossing_pairs() < best.crossing_pairs()):
                best = cand
        if best is not None:
            return best, ReductionMove("remove_monogon", c, i, length)
    for c1, i1, k1, rail, partner in _bigon_candidates(st):
        try:
            cand = _reroute(st, c1, i1, k1, rail)
        except _RerouteFailed:
            continue
        if cand.crossing_pairs() < base:
            return cand, ReductionMove("remove_bigon", c1, i1, k1,
                                       partner=partner)
    return None, None


def to_taut(config):
    """Reduce to taut position; returns (configuration, move log)."""
    st = _State(config)
    log = []
    while True:
        new, move = _best_reduction(st)
        if new is None:
            break
        log.append(move.describe())
        st = new
    return st.to_config(), log


def realized_crossings(config):
    """Total crossings, counted as vertex pairs."""
    return config.total_crossing_pairs()


# ----------------------------------------------------------------------
# intersection numbers of free homotopy classes


_GI_CACHE = {}


def _pairwise_table(config):
    """Realized crossing counts: {(curve, curve): crossing points}, with
    self pairs counted as vertex pass pairs."""
    owner = config.curve_of_edge()
    table = {}
    for v, rot in config.rotations.items():
        n2 = len(rot)
        passes = []
        seen = set()
        for i, h in enumerate(rot):
            if i in seen:
                continue
            j = (i + n2 // 2) % n2
            seen.add(i)
            seen.add(j)
            e, _end = config.half_edge[h]
            passes.append(owner[e])
        for i in range(len(passes)):
            for j in range(i + 1, len(passes)):
                key = tuple(sorted((passes[i], passes[j])))
                table[key] = table.get(key, 0) + 1
    return table


def minimal_representative(surface, words):
    """A taut configuration realizing the given classes together."""
    from .draw import draw
    cfg = draw(surface, list(words))
    out, _log = to_taut(cfg)
    return out


def self_intersection(word, surface):
    """Minimal self-intersections of the class, counted in the source
    (each double point contributes two)."""
    if is_trivial(word, surface):
        raise TautError("self_intersection of a trivial class")
    from .words import unoriented_class_key
    key = ("self", surface.token(), unoriented_class_key(word, surface))
    if key not in _GI_CACHE:
        out = minimal_representative(surface, [word])
        (name,) = out.curves
        _GI_CACHE[key] = out.intersections_along(name)
    return _GI_CACHE[key]


def geometric_intersection(u, v, surface):
    """Minimum number of crossing points between transversal curves in
    the two classes (as two distinct curves, also when the classes agree)."""
    if is_trivial(u, surface) or is_trivial(v, surface):
        raise TautError("geometric_intersection of a trivial class")
    from .words import unoriented_class_key
    ku = unoriented_class_key(u, surface)
    kv = unoriented_class_key(v, surface)
    key = ("pair", surface.token()) + tuple(sorted([ku, kv]))
    if key not in _GI_CACHE:
        out = minimal_representative(surface, [u, v])
        names = sorted(out.curves)
        table = _pairwise_table(out)
        _GI_CACHE[key] = table.get((names[0], names[1]), 0)
    return _GI_CACHE[key]


@dataclass
class IntersectionReport:
    curves: list
    realized_pair: dict      # (c, c') sorted tuple -> crossing points
    realized_self: dict      # c -> source count
    minimal_pair: dict
    minimal_self: dict

    def entries(self):
        rows = []
        for c in self.curves:
            rows.append(("self", c, c, self.realized_self[c], self.minimal_self[c]))
        for i, c in enumerate(self.curves):
            for d in self.curves[i + 1:]:
                key = tuple(sorted((c, d)))
                rows.append(("pair", c, d, self.realized_pair.get(key, 0),
                             self.minimal_pair.get(key, 0)))
        return rows

    def minimal(self):
        return all(r == m for _k, _c, _d, r, m in self.entries())


def intersection_report(config):
    from .homotopy import trace_to_word
    names = sorted(config.curves)
    table = _pairwise_table(config)
    classes = {c: trace_to_word(config, config.curves[c]) for c in names}
    realized_self = {}
    for c in names:
        realized_self[c] = 2 * table.get((c, c), 0)
        # multiple points: intersections_along counts them with multiplicity
    realized_self = {c: config.intersections_along(c)
                     - sum(table.get(tuple(sorted((c, d))), 0)
                           for d in names if d != c)
                     for c in names}
    minimal_self = {c: self_intersection(classes[c], config.surface)
                    for c in names}
    minimal_pair = {}
    for i, c in enumerate(names):
        for d in names[i + 1:]:
            minimal_pair[tuple(sorted((c, d)))] = geometric_intersection(
                classes[c], classes[d], config.surface)
    realized_pair = {k: v for k, v in table.items() if k[0] != k[1]}
    return IntersectionReport(names, realized_pair, realized_self,
                              minimal_pair, minimal_self)


@dataclass
class MinimalityReport:
    passed: bool
    failures: list
    report: IntersectionReport = None


def check_minimal_configuration(config):
    """Essentiality, realized-equals-minimal counts, and the allowed
    power types (powers only of orientation-reversing roots, exponent
    2 or odd)."""
    from .homotopy import trace_to_word
    from .words import maximal_root, orientation_character
    failures = []
    classes = {}
    for c in sorted(config.curves):
        w = trace_to_word(config, config.curves[c])
        if is_trivial(w, config.surface):
            failures.append(("inessential", c))
        classes[c] = w
    if failures:
        return MinimalityReport(False, failures)
    rep = intersection_report(config)
    for kind, c, d, realized, minimal in rep.entries():
        if realized != minimal:
            failures.append(("nonminimal", kind, c, d, realized, minimal))
    for c, w in classes.items():
        root, r = maximal_root(w, config.surface)
        if r > 1:
            if orientation_character(root, config.surface) != -1:
                failures.append(("power_of_preserving", c, r))
            elif not (r == 2 or r % 2 == 1):
                failures.append(("even_power", c, r))
    return MinimalityReport(not failures, failures, rep)


# ----------------------------------------------------------------------
# independent oracle over the embedded move space


def oracle_min_crossings(config, budget=None):
    """Least crossing count reachable by embedded monogon/bigon removals
    and insertions plus triangle slides, breadth first.  Insertions are
    admitted while the count stays within `budget` (default: the starting
    count, which keeps the search non-increasing)."""
    from .config import canonical_key
    from .moves import (MoveError, face_shapes, insert_finger, insert_kink,
                        remove_bigon_face, remove_monogon_face,
                        triangle_slides)
    start = config.total_crossing_pairs()
    if budget is None:
        budget = start
    if start > budget:
        raise TautError("budget exceeded: %d crossings > %d" % (start, budget))
    for rot in config.rotations.values():
        if len(rot) not in (2, 4):
            raise TautError("oracle requires a generic configuration")
    seen = {canonical_key(config)}
    frontier = [config]
    best = start
    while frontier:
        nxt = []
        for cfg in frontier:
            count = cfg.total_crossing_pairs()
            best = min(best, count)
            shapes = face_shapes(cfg)
            neighbors = []
            for orbit in shapes[1]:
                try:
                    neighbors.append(remove_monogon_face(cfg, orbit))
                except MoveError:
                    pass
            for orbit in shapes[2]:
                try:
                    neighbors.append(remove_bigon_face(cfg, orbit))
                except MoveError:
                    pass
            for orbit in shapes[3]:
                neighbors.extend(triangle_slides(cfg, orbit))
            if count + 1 <= budget:
                for e in sorted(cfg.edges):
                    for ch in (+1, -1):
                        try:
                            neighbors.append(insert_kink(cfg, e, ch))
                        except MoveError:
                            pass
            if count + 2 <= budget:
                for orbit in cfg.faces():
                    for i in range(len(orbit)):
                        for j in range(len(orbit)):
                            if i == j:
                                continue
                            f1, f2 = orbit[i], orbit[j]
                            e1 = cfg.half_edge[f1[0]][0]
                            e2 = cfg.half_edge[f2[0]][0]
                            if e1 == e2:
                                continue
                            try:
                                neighbors.append(insert_finger(cfg, f1, f2))
                            except MoveError:
                                pass
            for nb in neighbors:
                if nb.total_crossing_pairs() > budget:
                    continue
                key = canonical_key(nb)
                if key not in seen:
                    seen.add(key)
                    nxt.append(nb)
        frontier = nxt
    return best
