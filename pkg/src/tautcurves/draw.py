"""Draw cyclic words as transversal curve configurations.

The standard model of the surface is one hub disk with the relator's
letters as ports around the boundary and one band per generator (twisted
for same-sign letter pairs).  Curves traverse bands in parallel lanes
(never crossing there) and cross only inside the hub, where each step is
a straight chord between exact rational points on the unit circle, so
all crossings, their order along chords, and the rotations at crossing
points are exact.

Every edge of the resulting configuration carries its reading (the band
letters it traverses), so path words need no base-structure computation.
"""

from __future__ import annotations

from fractions import Fraction

from .config import RibbonConfiguration
from .words import CyclicWord, are_freely_homotopic, is_trivial


class DrawError(ValueError):
    pass


class ConcurrencyError(DrawError):
    pass


def _circle_point(t):
    """Rational point on the unit circle via the tangent half-angle."""
    den = 1 + t * t
    return ((1 - t * t) / den, 2 * t / den)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _segments_cross(p1, p2, q1, q2):
    d1 = _cross(p1, p2, q1)
    d2 = _cross(p1, p2, q2)
    d3 = _cross(q1, q2, p1)
    d4 = _cross(q1, q2, p2)
    return (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0) and 0 not in (d1, d2, d3, d4)


def _intersection(p1, p2, q1, q2):
    """Exact crossing point and parameter along (p1, p2)."""
    dx1, dy1 = p2[0] - p1[0], p2[1] - p1[1]
    dx2, dy2 = q2[0] - q1[0], q2[1] - q1[1]
    den = dx1 * dy2 - dy1 * dx2
    s = ((q1[0] - p1[0]) * dy2 - (q1[1] - p1[1]) * dx2) / den
    return (p1[0] + s * dx1, p1[1] + s * dy1), s


def _sort_ccw(items):
    """Sort (vector, payload) pairs by angle, exactly."""

    def less(u, v):
        hu = 0 if (u[1] > 0 or (u[1] == 0 and u[0] > 0)) else 1
        hv = 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1
        if hu != hv:
            return hu < hv
        return _cross((Fraction(0), Fraction(0)), u, v) > 0

    out = list(items)
    for a in range(1, len(out)):
        b = a
        while b > 0 and less(out[b][0], out[b - 1][0]):
            out[b], out[b - 1] = out[b - 1], out[b]
            b -= 1
    return out


class _Model:
    """Port and band layout of the standard one-vertex surface model.

    Ports appear around the hub in the order of the vertex link of the
    standard polygon: walk germ -> wedge partner -> glued germ around
    the single vertex of the polygon complex.
    """

    def __init__(self, surface, jitter=0):
        self.surface = surface
        rel = surface.relator.letters
        if not rel:
            raise DrawError("the sphere has no essential curves to draw")
        self.L = len(rel)
        occ, signs = {}, {}
        for pos, (g, s) in enumerate(rel):
            occ.setdefault(g, []).append(pos)
            signs.setdefault(g, []).append(s)
        self.twisted = {g: signs[g][0] == signs[g][1] for g in occ}

        def identify(germ):
            which, i = germ  # ('start'|'end', side index)
            g, s = rel[i]
            p, q = occ[g]
            j = q if i == p else p
            if self.twisted[g]:
                return (which, j)
            return ("end" if which == "start" else "start", j)

        def wedge_partner(germ):
            which, i = germ
            if which == "start":
                return ("end", (i - 1) % self.L)
            return ("start", (i + 1) % self.L)

        def germ_class(germ):
            """(generator, end index) of a side germ."""
            which, i = germ
            g, s = rel[i]
            p, _q = occ[g]
            if s > 0:
                return (g, 0 if which == "start" else 1)
            return (g, 1 if which == "start" else 0)

        order = []
        cur = ("start", 0)
        for _ in range(self.L):
            order.append(germ_class(cur))
            cur = identify(wedge_partner(cur))
        if cur != ("start", 0) or len(set(order)) != self.L:
            raise DrawError("vertex link of the standard polygon did not close")
        self.port_order = order
        self.port_of = {ge: k for k, ge in enumerate(order)}
        self.ports = {g: (self.port_of[(g, 0)], self.port_of[(g, 1)])
                      for g in occ}
        self.jitter = jitter

    def point(self, port, slot, nslots):
        idx = Fraction(port) + Fraction(2 * slot + 1, 2 * nslots + 1)
        t = (2 * idx / self.L - 1) * 8
        if self.jitter:
            t += Fraction(self.jitter * (1 + port + 3 * slot) ** 2,
                          10007 * self.L * (nslots + 1))
        return _circle_point(t)


def model_complex_check(surface):
    """The hub-and-bands one-vertex complex must present the declared
    surface with band readings equal to the standard generators."""
    model = _Model(surface)
    rotations = {"hub": tuple("p%d" % i for i in range(model.L))}
    edges, twists = {}, {}
    for g, (p1, p2) in model.ports.items():
        edges["band%d" % g] = ("p%d" % p1, "p%d" % p2)
        twists["band%d" % g] = model.twisted[g]
    cfg = RibbonConfiguration(surface, rotations, edges, twists, {})
    faces = cfg.faces()
    if len(faces) != 1:
        raise DrawError("model layout has %d faces" % len(faces))
    word = []
    for h, _s in faces[0]:
        e, end = cfg.half_edge[h]
        word.append((int(e[4:]), +1 if end == 0 else -1))
    if not is_trivial(CyclicWord(word), surface):
        raise DrawError("model face word is not the relator")
    if cfg.euler_characteristic() != surface.euler_characteristic:
        raise DrawError("model has the wrong Euler characteristic")
    return True


def draw(surface, words, names=None):
    """Draw the given nontrivial classes, retrying layout jitter if the
    chords happen to be concurrent."""
    for j in range(0, 40):
        try:
            return draw_words(surface, words, names=names, jitter=j)
        except ConcurrencyError:
            continue
    raise DrawError("could not find a concurrency-free layout")


def draw_words(surface, words, names=None, jitter=0):
    """Build a transversal configuration realizing the given classes."""
    for w in words:
        if not len(w):
            raise DrawError("cannot draw a trivial class")
    names = names or ["c%d" % i for i in range(len(words))]
    model = _Model(surface, jitter=jitter)

    band_passes = {g: [] for g in model.ports}
    for ci, w in enumerate(words):
        for li, (g, _s) in enumerate(w.letters):
            band_passes[g].append((ci, li))
    lane = {}
    for g, passes in band_passes.items():
        for t, key in enumerate(passes):
            lane[key] = t

    def endpoints(ci, li):
        g, s = words[ci].letters[li]
        t = lane[(ci, li)]
        k = len(band_passes[g])
        p1, p2 = model.ports[g]
        a = (p1, t, k)
        b = (p2, t if model.twisted[g] else k - 1 - t, k)
        return (a, b) if s > 0 else (b, a)

    coords = {}

    def point_of(key):
        if key not in coords:
            coords[key] = model.point(*key)
        return coords[key]

    # one hub chord per letter, from the previous letter's arrival point
    chord_index = {}
    chords = []
    for ci, w in enumerate(words):
        n = len(w.letters)
        for li in range(n):
            dep, _arr = endpoints(ci, li)
            _pd, parr = endpoints(ci, (li - 1) % n)
            chord_index[(ci, li)] = len(chords)
            chords.append((ci, li, point_of(parr), point_of(dep)))

    # crossings among chords
    events = {}
    vertices = {}
    seen_points = set()
    for i in range(len(chords)):
        for j in range(i + 1, len(chords)):
            p1, p2 = chords[i][2], chords[i][3]
            q1, q2 = chords[j][2], chords[j][3]
            if not _segments_cross(p1, p2, q1, q2):
                continue
            pt, si = _intersection(p1, p2, q1, q2)
            _pt, sj = _intersection(q1, q2, p1, p2)
            if pt in seen_points:
                raise ConcurrencyError("three chords meet at a point")
            seen_points.add(pt)
            name = "x%d" % len(vertices)
            vertices[name] = (pt, i, j)
            events.setdefault(i, []).append((si, name))
            events.setdefault(j, []).append((sj, name))
    for i in events:
        events[i].sort()

    # rotations at crossings: exact ccw order of the four germ directions
    rotations = {}
    half_of = {}
    hid = 0
    for name in sorted(vertices, key=lambda s: int(s[1:])):
        _pt, i, j = vertices[name]
        dirs = []
        for ch in (i, j):
            p1, p2 = chords[ch][2], chords[ch][3]
            fwd = (p2[0] - p1[0], p2[1] - p1[1])
            dirs.append((fwd, (ch, "out")))
            dirs.append(((-fwd[0], -fwd[1]), (ch, "in")))
        rot = []
        for _vec, (ch, side) in _sort_ccw(dirs):
            h = "h%d" % hid
            hid += 1
            rot.append(h)
            half_of[(name, ch, side)] = h
        rotations[name] = tuple(rot)

    edges, twists, curves, readings = {}, {}, {}, {}
    eid = 0
    marker_id = 0
    for ci, w in enumerate(words):
        n = len(w.letters)
        stops = []
        for li in range(n):
            for _s, vname in events.get(chord_index[(ci, li)], []):
                stops.append((vname, chord_index[(ci, li)]))
            stops.append(("band", li))
        if not any(s[0] != "band" for s in stops):
            mname = "m%d" % marker_id
            marker_id += 1
            h1, h2 = "h%d" % hid, "h%d" % (hid + 1)
            hid += 2
            rotations[mname] = (h1, h2)
            ename = "E%d" % eid
            eid += 1
            edges[ename] = (h2, h1)
            twists[ename] = sum(1 for g, _s in w.letters if model.twisted[g]) % 2 == 1
            curves[names[ci]] = ((ename, +1),)
            readings[ename] = tuple(w.letters)
            continue
        first = next(k for k, s in enumerate(stops) if s[0] != "band")
        stops = stops[first + 1:] + stops[:first + 1]
        cursor = stops[-1]  # (vertex, chord): the crossing the walk starts at
        trail = []
        letters_acc = []
        twist_acc = False
        for stop in stops:
            if stop[0] == "band":
                g, s = w.letters[stop[1]]
                letters_acc.append((g, s))
                if model.twisted[g]:
                    twist_acc = not twist_acc
            else:
                vname, ch = stop
                ename = "E%d" % eid
                eid += 1
                edges[ename] = (half_of[(cursor[0], cursor[1], "out")],
                                half_of[(vname, ch, "in")])
                twists[ename] = twist_acc
                readings[ename] = tuple(letters_acc)
                trail.append((ename, +1))
                letters_acc = []
                twist_acc = False
                cursor = (vname, ch)
        curves[names[ci]] = tuple(trail)

    cfg = RibbonConfiguration(surface, rotations, edges, twists, curves)
    report = cfg.validate()
    if report.errors:
        raise DrawError("drawn configuration invalid: %s" % "; ".join(report.errors))
    cfg.readings = readings
    from .homotopy import trace_to_word
    for ci, w in enumerate(words):
        got = trace_to_word(cfg, cfg.curves[names[ci]])
        if not are_freely_homotopic(got, w, surface):
            raise DrawError("drawn curve %s does not realize its class" % names[ci])
    return cfg
