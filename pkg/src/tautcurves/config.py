"""Embedded curve configurations as ribbon graphs.

A configuration is a graph with a cyclic rotation of half-edges at each
vertex and a twist flag per edge (signed rotation system), together
with the curve traces.  Strand continuation through a vertex is always
diametric, so traces are forced by the combinatorics; declared curves
name and orient them.

Crossing-free curves are kept as a single valence-2 marker vertex with
a self-loop edge; all other valence-2 vertices are removed by
normalization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .words import SurfacePresentation


class ConfigError(ValueError):
    pass


def other_end(ends, h):
    return ends[1] if ends[0] == h else ends[0]


class RibbonConfiguration:
    """Rotation-system model of a configuration of closed curves."""

    def __init__(self, surface, rotations, edges, twists, curves,
                 declared_classes=None):
        self.surface = surface
        self.rotations = {v: tuple(r) for v, r in rotations.items()}
        self.edges = {e: tuple(ends) for e, ends in edges.items()}
        self.twists = dict(twists)
        self.curves = {c: tuple(t) for c, t in curves.items()}
        self.declared_classes = dict(declared_classes or {})
        self._index()

    # ------------------------------------------------------------------

    def _index(self):
        self.half_vertex = {}
        for v, rot in self.rotations.items():
            for i, h in enumerate(rot):
                if h in self.half_vertex:
                    raise ConfigError("half-edge %r appears in two rotations" % (h,))
                self.half_vertex[h] = (v, i)
        self.half_edge = {}
        for e, ends in self.edges.items():
            if len(ends) != 2:
                raise ConfigError("edge %r does not have two ends" % (e,))
            for k, h in enumerate(ends):
                if h in self.half_edge:
                    raise ConfigError("half-edge %r appears in two edges" % (h,))
                self.half_edge[h] = (e, k)
            self.twists.setdefault(e, False)
        for h in self.half_vertex:
            if h not in self.half_edge:
                raise ConfigError("half-edge %r has no edge" % (h,))
        for h in self.half_edge:
            if h not in self.half_vertex:
                raise ConfigError("half-edge %r has no vertex" % (h,))

    def __eq__(self, other):
        return (isinstance(other, RibbonConfiguration)
                and self.surface == other.surface
                and self.rotations == other.rotations
                and self.edges == other.edges
                and self.twists == other.twists
                and self.curves == other.curves
                and self.declared_classes == other.declared_classes)

    # ------------------------------------------------------------------
    # directed-edge helpers; a directed edge is (edge_id, +1|-1)

    def tail_half(self, de):
        e, d = de
        ends = self.edges[e]
        return ends[0] if d > 0 else ends[1]

    def head_half(self, de):
        e, d = de
        ends = self.edges[e]
        return ends[1] if d > 0 else ends[0]

    def directed_from(self, h):
        e, end = self.half_edge[h]
        return (e, +1 if end == 0 else -1)

    def valence(self, v):
        return len(self.rotations[v])

    def vertex_of(self, h):
        return self.half_vertex[h][0]

    def continuation_half(self, h):
        """Diametrically opposite half-edge at the same vertex."""
        v, i = self.half_vertex[h]
        rot = self.rotations[v]
        n2 = len(rot)
        if n2 % 2:
            raise ConfigError("odd valence at vertex %r" % (v,))
        return rot[(i + n2 // 2) % n2]

    def next_directed(self, de):
        return self.directed_from(self.continuation_half(self.head_half(de)))

    def strand_trails(self):
        """Closed trails forced by diametric continuation, one per curve."""
        seen = set()
        trails = []
        for e in sorted(self.edges):
            for d in (+1, -1):
                if (e, d) in seen:
                    continue
                trail = []
                de = (e, d)
                while de not in seen:
                    seen.add(de)
                    seen.add((de[0], -de[1]))
                    trail.append(de)
                    de = self.next_directed(de)
                if de != trail[0]:
                    raise ConfigError("strand continuation does not close")
                trails.append(tuple(trail))
                break
        return trails

    # ------------------------------------------------------------------
    # faces via the flag walk; a flag is (half_edge, side) with side 0 the
    # wall on the ccw-earlier side of the band end, traversed outward

    def next_flag(self, flag):
        h, s = flag
        e, _ = self.half_edge[h]
        h1 = other_end(self.edges[e], h)
        s1 = s if self.twists[e] else 1 - s
        v, i = self.half_vertex[h1]
        rot = self.rotations[v]
        if s1 == 1:
            return (rot[(i + 1) % len(rot)], 0)
        return (rot[(i - 1) % len(rot)], 1)

    def face_orbits(self):
        flags = [(h, s) for h in sorted(self.half_edge) for s in (0, 1)]
        seen = set()
        orbits = []
        for f in flags:
            if f in seen:
                continue
            orbit = []
            cur = f
            while cur not in seen:
                seen.add(cur)
                orbit.append(cur)
                cur = self.next_flag(cur)
            orbits.append(tuple(orbit))
        return orbits

    def faces(self):
        """Boundary cycles, one per face (reversal pairs collapsed)."""
        orbits = self.face_orbits()
        out = []
        taken = set()
        for orbit in orbits:
            key = frozenset(orbit)
            rev = frozenset(self._reverse_flag(f) for f in orbit)
            if rev in taken or key in taken:
                continue
            taken.add(key)
            out.append(orbit)
        return out

    def _reverse_flag(self, flag):
        """The flag traversing the same wall from the other end."""
        h, s = flag
        e, _ = self.half_edge[h]
        h1 = other_end(self.edges[e], h)
        s1 = s if self.twists[e] else 1 - s
        return (h1, s1)

    def euler_characteristic(self):
        return len(self.rotations) - len(self.edges) + len(self.faces())

    def is_filling(self):
        return self.euler_characteristic() == self.surface.euler_characteristic \
            and self.ribbon_orientable() == self.surface.orientable

    def ribbon_orientable(self):
        """True if the regular neighborhood of the graph is orientable."""
        sign = {}
        for v0 in sorted(self.rotations):
            if v0 in sign:
                continue
            sign[v0] = 1
            stack = [v0]
            while stack:
                v = stack.pop()
                for h in self.rotations[v]:
                    e, _ = self.half_edge[h]
                    w = self.vertex_of(other_end(self.edges[e], h))
                    want = sign[v] * (-1 if self.twists[e] else 1)
                    if w not in sign:
                        sign[w] = want
                        stack.append(w)
                    elif sign[w] != want:
                        return False
        return True

    # ------------------------------------------------------------------

    def curve_of_edge(self):
        owner = {}
        for c, trail in self.curves.items():
            for e, _d in trail:
                owner[e] = c
        return owner

    def passages(self, curve):
        """Per pass through a vertex: (vertex, in_half, out_half)."""
        out = []
        for de in self.curves[curve]:
            h_in = self.head_half(de)
            out.append((self.vertex_of(h_in), h_in, self.continuation_half(h_in)))
        return out

    def intersections_along(self, curve):
        """Crossings counted in the source: (n - 1) per pass through a
        2n-valent vertex."""
        if curve not in self.curves:
            raise ConfigError("no curve named %r" % (curve,))
        total = 0
        for v, _hi, _ho in self.passages(curve):
            total += self.valence(v) // 2 - 1
        return total

    def total_crossing_pairs(self):
        """Total crossings: sum over vertices of (n choose 2)."""
        t = 0
        for v in self.rotations:
            n = self.valence(v) // 2
            t += n * (n - 1) // 2
        return t

    # ------------------------------------------------------------------

    def validate(self):
        report = ValidationReport()
        for v, rot in self.rotations.items():
            if len(rot) % 2:
                report.errors.append("vertex %s has odd valence %d" % (v, len(rot)))
            elif len(rot) == 2:
                e0, _ = self.half_edge[rot[0]]
                e1, _ = self.half_edge[rot[1]]
                if e0 != e1:
                    report.errors.append(
                        "vertex %s is an unnormalized subdivision vertex" % (v,))
        if report.errors:
            return report
        try:
            trails = self.strand_trails()
        except ConfigError as exc:
            report.errors.append(str(exc))
            return report
        # declared curves must be exactly the forced trails
        canon = {self._trail_key(t): t for t in trails}
        used = set()
        covered = set()
        for c, trail in sorted(self.curves.items()):
            for i, de in enumerate(trail):
                nxt = trail[(i + 1) % len(trail)]
                if self.next_directed(de) != nxt:
                    report.errors.append(
                        "curve %s is not a transversal strand at step %d" % (c, i))
                    return report
                if de[0] in covered:
                    report.errors.append("edge %s traversed twice" % (de[0],))
                    return report
                covered.add(de[0])
            key = self._trail_key(trail)
            if key not in canon or key in used:
                report.errors.append("curve %s does not match a strand" % (c,))
            used.add(key)
        if covered != set(self.edges):
            report.errors.append("some edges belong to no declared curve")
        if report.errors:
            return report
        report.faces = self.faces()
        report.euler_characteristic = len(self.rotations) - len(self.edges) + len(report.faces)
        report.filling = self.is_filling()
        return report

    @staticmethod
    def _trail_key(trail):
        best = None
        for t in (trail, tuple((e, -d) for e, d in reversed(trail))):
            for i in range(len(t)):
                cand = t[i:] + t[:i]
                if best is None or cand < best:
                    best = cand
        return best

    def require_valid(self):
        report = self.validate()
        if report.errors:
            raise ConfigError("; ".join(report.errors))
        return report

    # ------------------------------------------------------------------
    # serialization

    def serialize(self):
        lines = ["surface %s" % self.surface.token()]
        for v in self.rotations:
            lines.append("vertex %s : %s" % (v, " ".join(self.rotations[v])))
        for e in self.edges:
            ends = " ".join(self.edges[e])
            if self.twists.get(e):
                lines.append("edge %s : %s twisted" % (e, ends))
            else:
                lines.append("edge %s : %s" % (e, ends))
        for c, trail in self.curves.items():
            toks = " ".join(("%s" % e) if d > 0 else ("-%s" % e) for e, d in trail)
            lines.append("curve %s : %s" % (c, toks))
        for c, word in self.declared_classes.items():
            lines.append("class %s : %s" % (c, self.surface.format_word(word)))
        return "\n".join(lines) + "\n"

    @staticmethod
    def parse(text):
        surface = None
        rotations, edges, twists, curves, classes = {}, {}, {}, {}, {}
        raw_classes = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            kind = parts[0]
            try:
                if kind == "surface":
                    surface = SurfacePresentation.from_token(parts[1])
                elif kind == "vertex":
                    name = parts[1]
                    assert parts[2] == ":"
                    rotations[name] = tuple(parts[3:])
                elif kind == "edge":
                    name = parts[1]
                    assert parts[2] == ":"
                    rest = parts[3:]
                    tw = False
                    if rest and rest[-1] == "twisted":
                        tw = True
                        rest = rest[:-1]
                    if len(rest) != 2:
                        raise ConfigError("edge needs two half-edges")
                    edges[name] = tuple(rest)
                    twists[name] = tw
                elif kind == "curve":
                    name = parts[1]
                    assert parts[2] == ":"
                    trail = []
                    for tok in parts[3:]:
                        if tok.startswith("-"):
                            trail.append((tok[1:], -1))
                        else:
                            trail.append((tok, +1))
                    curves[name] = tuple(trail)
                elif kind == "class":
                    name = parts[1]
                    assert parts[2] == ":"
                    raw_classes[name] = " ".join(parts[3:])
                else:
                    raise ConfigError("unknown statement %r" % (kind,))
            except (IndexError, AssertionError):
                raise ConfigError("line %d: malformed %r statement" % (lineno, kind))
        if surface is None:
            raise ConfigError("missing surface statement")
        for name, txt in raw_classes.items():
            classes[name] = surface.parse_word(txt)
        return RibbonConfiguration(surface, rotations, edges, twists, curves,
                                   declared_classes=classes)


@dataclass
class ValidationReport:
    errors: list = field(default_factory=list)
    faces: list = field(default_factory=list)
    euler_characteristic: int = None
    filling: bool = None

    def ok(self):
        return not self.errors


# ----------------------------------------------------------------------
# normalization and canonical keys


def normalize(config):
    """Remove valence-2 subdivision vertices, keeping one marker vertex
    per crossing-free component.  Edge readings, when present, are
    concatenated across merges."""
    rotations = {v: list(r) for v, r in config.rotations.items()}
    edges = {e: list(ends) for e, ends in config.edges.items()}
    twists = dict(config.twists)
    curves = {c: list(t) for c, t in config.curves.items()}
    readings = getattr(config, "readings", None)
    if readings is not None:
        readings = dict(readings)

    def reading_dir(e, d):
        r = readings[e]
        return r if d > 0 else tuple((g, -s) for (g, s) in reversed(r))

    def half_edge_map():
        m = {}
        for e, ends in edges.items():
            for k, h in enumerate(ends):
                m[h] = (e, k)
        return m

    changed = True
    while changed:
        changed = False
        hmap = half_edge_map()
        for v in list(rotations):
            rot = rotations[v]
            if len(rot) != 2:
                continue
            h1, h2 = rot
            e1, _ = hmap[h1]
            e2, _ = hmap[h2]
            if e1 == e2:
                continue  # marker vertex of a crossing-free loop
            x = other_end(edges[e1], h1)
            y = other_end(edges[e2], h2)
            # directions of the two old edges along the pass x -> v -> y
            d1 = +1 if edges[e1][1] == h1 else -1
            d2 = +1 if edges[e2][0] == h2 else -1
            keep, drop = e1, e2
            tw = twists[e1] != twists[e2]
            pat_fwd = ((e1, d1), (e2, d2))
            pat_rev = ((e2, -d2), (e1, -d1))
            if readings is not None:
                merged_reading = reading_dir(e1, d1) + reading_dir(e2, d2)
            edges[keep] = [x, y]
            twists[keep] = tw
            del edges[drop]
            del twists[drop]
            del rotations[v]
            if readings is not None:
                del readings[drop]
                readings[keep] = merged_reading
            for c, trail in curves.items():
                n = len(trail)
                done = False
                for i in range(n):
                    pair = (trail[i], trail[(i + 1) % n])
                    if pair == pat_fwd or pair == pat_rev:
                        newde = (keep, +1) if pair == pat_fwd else (keep, -1)
                        if (i + 1) % n == 0:
                            newt = [newde] + trail[1:n - 1]
                        else:
                            newt = trail[:i] + [newde] + trail[i + 2:]
                        curves[c] = newt
                        done = True
                        break
                if done:
                    break
            changed = True
            break
    out = RibbonConfiguration(config.surface, rotations, edges, twists,
                              {c: tuple(t) for c, t in curves.items()},
                              config.declared_classes)
    if readings is not None:
        out.readings = readings
    return out


def canonical_key(config):
    """Label-independent key of the ribbon structure with traces.

    Canonicalizes by BFS relabeling from every starting flag and taking
    the lexicographically least encoding.  Curve names are forgotten;
    twists and rotations are kept.
    """
    rotations = config.rotations
    best = None
    halves = sorted(config.half_edge)
    for start in halves:
        enc = _encode_from(config, start)
        if best is None or enc < best:
            best = enc
    return best


def _encode_from(config, start):
    order = {}

    def visit(h):
        if h not in order:
            order[h] = len(order)

    queue = [start]
    visit(start)
    qi = 0
    while qi < len(queue):
        h = queue[qi]
        qi += 1
        v, i = config.half_vertex[h]
        rot = config.rotations[v]
        n = len(rot)
        for k in range(n):
            h2 = rot[(i + k) % n]
            if h2 not in order:
                visit(h2)
                queue.append(h2)
        e, _ = config.half_edge[h]
        tw = other_end(config.edges[e], h)
        if tw not in order:
            visit(tw)
            queue.append(tw)
    # encode: for each half-edge in discovered order: (twin, rot-next, twist)
    enc = []
    inv = {idx: h for h, idx in order.items()}
    for idx in range(len(inv)):
        h = inv[idx]
        v, i = config.half_vertex[h]
        rot = config.rotations[v]
        nxt = rot[(i + 1) % len(rot)]
        e, _ = config.half_edge[h]
        tw = other_end(config.edges[e], h)
        enc.append((order[tw], order[nxt], config.twists[e]))
    return tuple(enc)
