"""Local moves on generic configurations.

Embedded monogon/bigon removals and their insertions, plus the triangle
slide.  Removals are pure deletions: the crossing vertices split into
per-strand valence-2 junctions which normalization dissolves, so this
code path is independent of the singular reroute engine.  Insertions
build the local picture explicitly.  The triangle slide rides the
reroute engine with a turning rail.
"""

from __future__ import annotations

from .config import RibbonConfiguration, normalize
from .homotopy import ensure_readings
from .words import are_freely_homotopic, _invert


class MoveError(RuntimeError):
    pass


def face_shapes(config):
    """Faces grouped by wall count: {1: [...], 2: [...], 3: [...]}."""
    out = {1: [], 2: [], 3: []}
    for orbit in config.faces():
        if len(orbit) in out:
            out[len(orbit)].append(orbit)
    return out


def _dicts(config):
    ensure_readings(config)
    return (
        {v: list(r) for v, r in config.rotations.items()},
        {e: list(ends) for e, ends in config.edges.items()},
        dict(config.twists),
        {e: tuple(r) for e, r in config.readings.items()},
        {c: list(t) for c, t in config.curves.items()},
    )


def _build(config, rotations, edges, twists, readings, curves):
    cfg = RibbonConfiguration(config.surface, rotations,
                              {e: tuple(x) for e, x in edges.items()},
                              twists, {c: tuple(t) for c, t in curves.items()})
    cfg.readings = readings
    cfg = normalize(cfg)
    report = cfg.validate()
    if report.errors:
        raise MoveError("; ".join(report.errors))
    from .homotopy import trace_to_word
    for c in cfg.curves:
        old = trace_to_word(config, config.curves[c])
        new = trace_to_word(cfg, cfg.curves[c])
        if not are_freely_homotopic(old, new, config.surface):
            raise MoveError("move changed the class of %s" % c)
    return cfg


def _fresh(names, prefix):
    k = 0
    while "%s%d" % (prefix, k) in names:
        k += 1
    name = "%s%d" % (prefix, k)
    names.add(name)
    return name


def _split_vertex(rotations, names, v, skip=()):
    """Replace a 4-valent vertex by one valence-2 junction per strand,
    dropping the germs in `skip`."""
    rot = rotations[v]
    if len(rot) != 4:
        raise MoveError("vertex %s is not a double point" % v)
    del rotations[v]
    for i in (0, 1):
        pair = [rot[i], rot[i + 2]]
        pair = [h for h in pair if h not in skip]
        if len(pair) == 2:
            rotations[_fresh(names, "j")] = pair


def remove_monogon_face(config, orbit):
    """Delete an empty monogon: drop its loop edge; the strand through
    the crossing straightens out."""
    rotations, edges, twists, readings, curves = _dicts(config)
    (h, _s), = orbit
    e, _end = config.half_edge[h]
    h1, h2 = edges[e]
    v = config.vertex_of(h1)
    if config.vertex_of(h2) != v:
        raise MoveError("monogon wall is not a loop")
    if len(rotations[v]) != 4:
        raise MoveError("monogon crossing is not a double point")
    names = set(rotations) | set(edges)
    survivors = [g for g in rotations[v] if g not in (h1, h2)]
    del rotations[v]
    rotations[_fresh(names, "j")] = survivors
    del edges[e], twists[e], readings[e]
    curves = {c: [de for de in t if de[0] != e] for c, t in curves.items()}
    curves = {c: t for c, t in curves.items() if t}
    if len(curves) != len(config.curves):
        raise MoveError("monogon removal erased a curve")
    return _build(config, rotations, edges, twists, readings, curves)


def remove_bigon_face(config, orbit):
    """Pull two strands apart across an empty bigon: the two corner
    crossings dissolve into junctions."""
    (ha, _sa), (hb, _sb) = orbit
    e1, _ = config.half_edge[ha]
    e2, _ = config.half_edge[hb]
    if e1 == e2:
        raise MoveError("degenerate bigon on a single edge")
    rotations, edges, twists, readings, curves = _dicts(config)
    v = config.vertex_of(edges[e1][0])
    w = config.vertex_of(edges[e1][1])
    if v == w:
        raise MoveError("bigon corners coincide")
    if {config.vertex_of(edges[e2][0]), config.vertex_of(edges[e2][1])} != {v, w}:
        raise MoveError("bigon sides do not share corners")
    names = set(rotations) | set(edges)
    _split_vertex(rotations, names, v)
    _split_vertex(rotations, names, w)
    return _build(config, rotations, edges, twists, readings, curves)


# ----------------------------------------------------------------------
# insertions


def insert_kink(config, edge, chirality):
    """Add a small loop on an edge (+1 or -1 chirality)."""
    rotations, edges, twists, readings, curves = _dicts(config)
    names = set(rotations) | set(edges) | {h for x in edges.values() for h in x}
    u_h, w_h = edges[edge]
    x = _fresh(names, "k")
    g_in = _fresh(names, "s")
    g_out = _fresh(names, "s")
    l1 = _fresh(names, "s")
    l2 = _fresh(names, "s")
    eA = _fresh(names, "E")
    eB = _fresh(names, "E")
    loop = _fresh(names, "E")
    edges[eA] = [u_h, g_in]
    edges[eB] = [g_out, w_h]
    edges[loop] = [l1, l2]
    twists[eA] = twists[edge]
    twists[eB] = False
    twists[loop] = False
    readings[eA] = readings[edge]
    readings[eB] = ()
    readings[loop] = ()
    del edges[edge], twists[edge], readings[edge]
    if chirality > 0:
        rotations[x] = [g_in, l2, l1, g_out]
    else:
        rotations[x] = [g_in, g_out, l1, l2]
    subs = {(edge, +1): [(eA, +1), (loop, +1), (eB, +1)]}
    curves = _sub_traces(curves, subs)
    return _build(config, rotations, edges, twists, readings, curves)


def _sub_traces(curves, subs):
    def expand(de):
        if de in subs:
            return list(subs[de])
        rev = (de[0], -de[1])
        if rev in subs:
            return [(e, -d) for (e, d) in reversed(subs[rev])]
        return [de]

    return {c: [x for de in t for x in expand(de)] for c, t in curves.items()}


def _wall_direction(config, flag):
    """Directed edge whose left wall is the given flag."""
    h, s = flag
    e, end = config.half_edge[h]
    if s == 1:
        return (e, +1 if end == 0 else -1)   # h is the tail germ
    return (e, +1 if end == 1 else -1)       # h is the head germ


def insert_finger(config, flag1, flag2):
    """Push the edge of flag1 across their common face through the edge
    of flag2 (two new crossings)."""
    e1 = config.half_edge[flag1[0]][0]
    e2 = config.half_edge[flag2[0]][0]
    if e1 == e2:
        raise MoveError("finger pushes along a single edge are not supported")
    rotations, edges, twists, readings, curves = _dicts(config)
    names = set(rotations) | set(edges) | {h for x in edges.values() for h in x}
    d1 = _wall_direction(config, flag1)
    d2 = _wall_direction(config, flag2)

    def split3(de, zone_at_tail):
        """Split an edge into three pieces along its directed sense; the
        finger zone pieces are untwisted and empty, the far piece keeps
        the reading and twist."""
        e, d = de
        tail, head = (edges[e][0], edges[e][1]) if d > 0 else (edges[e][1], edges[e][0])
        p1, p2, p3 = _fresh(names, "E"), _fresh(names, "E"), _fresh(names, "E")
        m1a, m1b = _fresh(names, "s"), _fresh(names, "s")
        m2a, m2b = _fresh(names, "s"), _fresh(names, "s")
        edges[p1] = [tail, m1a]
        edges[p2] = [m1b, m2a]
        edges[p3] = [m2b, head]
        reading = readings[e] if d > 0 else _invert(readings[e])
        if zone_at_tail:
            readings[p1], readings[p2], readings[p3] = (), (), tuple(reading)
            twists[p1], twists[p2], twists[p3] = False, False, twists[e]
        else:
            readings[p1], readings[p2], readings[p3] = tuple(reading), (), ()
            twists[p1], twists[p2], twists[p3] = twists[e], False, False
        del edges[e], twists[e], readings[e]
        return (p1, p2, p3), (m1a, m1b, m2a, m2b)

    zone1 = (flag1[1] == 1)  # the marked germ is the tail of the directed edge
    zone2 = (flag2[1] == 1)
    (q1, q2, q3), (x_back, x_tip, y_tip, y_on) = split3(d1, zone1)
    (p1, p2, p3), (xa, xb, ya, yb) = split3(d2, zone2)
    # vertices x (first crossing along d2) and y
    x = _fresh(names, "c")
    y = _fresh(names, "c")
    # ccw rotations from the planar picture: e2 west->east with the face
    # north, e1's finger descending southward, tip turning east
    rotations[x] = [xb, x_back, xa, x_tip]
    rotations[y] = [yb, y_on, ya, y_tip]
    subs = {
        d2: [(p1, +1), (p2, +1), (p3, +1)],
        d1: [(q1, +1), (q2, +1), (q3, +1)],
    }
    curves = _sub_traces(curves, subs)
    return _build(config, rotations, edges, twists, readings, curves)


def triangle_slides(config, orbit):
    """All three slides across a triangle face, as new configurations."""
    from .taut import _State, _reroute, _RerouteFailed
    st = _State(config)
    # boundary directed edges of the face
    des = []
    for h, _s in orbit:
        e, end = config.half_edge[h]
        des.append((e, +1 if end == 0 else -1))
    results = []
    for k in range(3):
        de = des[k]
        other = [des[(k + 1) % 3], des[(k + 2) % 3]]
        placed = None
        for c, t in st.traces.items():
            for i, cand in enumerate(t):
                if cand[0] == de[0]:
                    placed = (c, i, cand[1] == de[1])
                    break
            if placed:
                break
        c, i, same_dir = placed
        if same_dir:
            rail = [(e, -d) for (e, d) in reversed(other)]
        else:
            rail = other
        try:
            new = _reroute(st, c, i, 1, rail)
        except _RerouteFailed:
            continue
        results.append(new.to_config())
    return results
