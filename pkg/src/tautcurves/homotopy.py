"""Fundamental-group bookkeeping for filling configurations.

A filling configuration presents the surface group: generators are the
non-tree edges, relators are the face boundary words.  The presentation
is Tietze-simplified to the standard one-relator form by the classical
polygon moves (spur checks, crosscap gathering, handle gathering, and
the handle-to-crosscaps conversion), tracking how every original edge
rewrites into the standard generators.

The result is a *reading* for every edge: a word in the standard
generators such that the concatenated readings of any closed edge path
represent its free-homotopy class, and readings of based loops at a
common vertex compare exactly.
"""

from __future__ import annotations

from .config import ConfigError, other_end
from .words import CyclicWord, _free_reduce, _invert, are_freely_homotopic, is_trivial


class BaseStructure:
    def __init__(self, tree_edges, readings, final_names):
        self.tree_edges = tree_edges
        self.readings = readings          # edge id -> tuple of (gen index, sign)
        self.final_names = final_names    # informational


def spanning_tree(config):
    verts = sorted(config.rotations)
    if not verts:
        raise ConfigError("empty configuration")
    root = verts[0]
    seen = {root}
    tree = set()
    frontier = [root]
    adj = {v: [] for v in verts}
    for e, (h0, h1) in sorted(config.edges.items()):
        adj[config.vertex_of(h0)].append((e, config.vertex_of(h1)))
        adj[config.vertex_of(h1)].append((e, config.vertex_of(h0)))
    while frontier:
        v = frontier.pop(0)
        for e, w in adj[v]:
            if w not in seen:
                seen.add(w)
                tree.add(e)
                frontier.append(w)
    if seen != set(verts):
        raise ConfigError("configuration is not connected")
    return tree


def face_words(config):
    """Each face as a word over directed edges (tuples (edge, sign))."""
    words = []
    for orbit in config.faces():
        word = []
        for h, _s in orbit:
            e, end = config.half_edge[h]
            word.append((e, +1 if end == 0 else -1))
        words.append(tuple(word))
    return words


class _Presentation:
    """Mutable presentation with substitution tracking."""

    def __init__(self, generators, relators, tracked):
        self.gens = set(generators)
        self.relators = [tuple(r) for r in relators]
        self.tracked = {k: tuple(w) for k, w in tracked.items()}
        self._fresh = 0

    def fresh(self):
        self._fresh += 1
        name = "@%d" % self._fresh
        self.gens.add(name)
        return name

    def substitute(self, gen, expr):
        """Eliminate `gen`, replacing it by `expr` everywhere."""
        expr = tuple(expr)

        def sub(word):
            out = []
            for g, s in word:
                if g == gen:
                    out.extend(expr if s > 0 else _invert(expr))
                else:
                    out.append((g, s))
            return tuple(_free_reduce(out))

        self.relators = [sub(r) for r in self.relators]
        self.tracked = {k: sub(w) for k, w in self.tracked.items()}
        self.gens.discard(gen)

    def rename_inverse(self, gen):
        """Replace gen by its inverse everywhere (orientation rename)."""

        def sub(word):
            return tuple((g, -s if g == gen else s) for g, s in word)

        self.relators = [sub(r) for r in self.relators]
        self.tracked = {k: sub(w) for k, w in self.tracked.items()}


def _cyclic_reduce_word(word):
    w = list(_free_reduce(word))
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = _free_reduce(w[1:-1])
    return tuple(w)


def _merge_faces(pres):
    """Eliminate shared edges until a single face relator remains."""
    while len(pres.relators) > 1:
        progress = False
        counts = {}
        for i, r in enumerate(pres.relators):
            for g, _s in r:
                counts.setdefault(g, []).append(i)
        for g, where in sorted(counts.items()):
            if len(where) == 2 and where[0] != where[1]:
                i, j = where
                rj = pres.relators[j]
                pos = [k for k, (x, _s) in enumerate(rj) if x == g][0]
                x, s = rj[pos]
                rest = rj[pos + 1:] + rj[:pos]  # relator = g^s * rest (cyclically)
                expr = _invert(rest) if s > 0 else tuple(rest)
                del pres.relators[j]
                pres.substitute(g, expr)
                progress = True
                break
        if not progress:
            raise ConfigError("faces do not merge; configuration not filling")
    pres.relators = [_cyclic_reduce_word(pres.relators[0])]


def _occurrences(word, gen):
    return [(i, s) for i, (g, s) in enumerate(word) if g == gen]


def _rotate(word, i):
    return word[i:] + word[:i]


def _gather_crosscaps(pres):
    """Make every same-sign pair adjacent."""
    while True:
        W = pres.relators[0]
        n = len(W)
        target = None
        for g in sorted({x for x, _ in W}):
            occ = _occurrences(W, g)
            if len(occ) == 2 and occ[0][1] == occ[1][1]:
                i, j = occ[0][0], occ[1][0]
                gap = (j - i) % n
                if gap != 1 and (i - j) % n != 1:
                    target = (g, occ[0][1], i, j)
                    break
        if target is None:
            return
        g, s, i, j = target
        if s < 0:
            pres.rename_inverse(g)
            continue
        W = _rotate(pres.relators[0], i)  # W = g B g C
        jj = [k for k, (x, _s) in enumerate(W) if x == g][1]
        B = W[1:jj]
        y = pres.fresh()
        # cut y := g*B, glue: g = y * B^-1
        pres.relators[0] = W
        pres.substitute(g, (( y, 1),) + _invert(B))
        pres.relators[0] = _cyclic_reduce_word(pres.relators[0])


def _handle_blocks(word):
    """Start indices of gathered 4-letter commutator blocks (cyclic)."""
    n = len(word)
    blocks = []
    for i in range(n):
        a, b, c, d = (word[i], word[(i + 1) % n], word[(i + 2) % n],
                      word[(i + 3) % n])
        if a[0] == c[0] and a[1] == -c[1] and b[0] == d[0] and b[1] == -d[1] \
                and a[0] != b[0]:
            blocks.append(i)
    # keep non-overlapping blocks greedily
    chosen = []
    used = set()
    for i in blocks:
        span = {(i + k) % n for k in range(4)}
        if not span & used:
            chosen.append(i)
            used |= span
    return chosen, used


def _gather_handles(pres):
    """Collect every linked opposite-sign pair into a commutator block."""
    while True:
        W = pres.relators[0]
        n = len(W)
        _blocks, used = _handle_blocks(W)
        target = None
        for i in range(n):
            if i in used:
                continue
            g, _s = W[i]
            occ = _occurrences(W, g)
            if len(occ) == 2 and occ[0][1] == -occ[1][1]:
                target = g
                break
        if target is None:
            return
        g = target
        occ = _occurrences(W, g)
        ipos = occ[0][0] if occ[0][1] > 0 else occ[1][0]
        W = _rotate(W, ipos)  # starts with (g, +1)
        jg = [k for k, (x, _s) in enumerate(W) if x == g][1]
        # linking letter z: exactly one occurrence strictly inside (0, jg)
        link = None
        for k in range(1, jg):
            z, t = W[k]
            pos_z = [kk for kk, (zz, _ss) in enumerate(W) if zz == z]
            inside = [p for p in pos_z if 0 < p < jg]
            if len(pos_z) == 2 and len(inside) == 1:
                link = (z, k, t, [p for p in pos_z if p != k][0])
                break
        if link is None:
            raise ConfigError("unlinked handle pair; complex is not a closed surface")
        z, k, t, k2 = link
        pres.relators[0] = W
        if t < 0:
            pres.rename_inverse(z)
            continue
        # W = g A z B g^-1 C z^-1 D
        A, B = W[1:k], W[k + 1:jg]
        C, D = W[jg + 1:k2], W[k2 + 1:]
        y = pres.fresh()
        # cut y := A z B, glue z = A^-1 y B^-1;
        # then cut s := g^-1 (C B), glue g = (C B) s^-1;
        # the relator becomes s^-1 y s y^-1 (A D C B)
        pres.substitute(z, _invert(A) + ((y, 1),) + _invert(B))
        s = pres.fresh()
        CB = tuple(_free_reduce(C + B))
        pres.substitute(g, CB + ((s, -1),))
        pres.relators[0] = _cyclic_reduce_word(pres.relators[0])


def _convert_mixed(pres):
    """While crosscap pairs and handle blocks coexist, absorb one handle
    into crosscaps (Dyck's trade: handle + crosscap = three crosscaps)."""
    while True:
        W = pres.relators[0]
        n = len(W)
        blocks, _used = _handle_blocks(W)
        cross = [i for i in range(n)
                 if W[i][0] == W[(i + 1) % n][0] and W[i][1] == W[(i + 1) % n][1]]
        if not blocks or not cross:
            return
        found = next((i for i in cross if (i + 2) % n in blocks), None)
        if found is None:
            raise ConfigError("mixed relator without crosscap-handle adjacency")
        W = _rotate(W, found)
        pres.relators[0] = W
        # W = c c a b a^-1 b^-1 E, up to signs of c and a
        if W[0][1] < 0:
            pres.rename_inverse(W[0][0])
            continue
        if W[2][1] < 0:
            pres.rename_inverse(W[2][0])
            continue
        c, a = W[0][0], W[2][0]
        # d := c a, glue a = c^-1 d: the c pair separates and the
        # crosscap gatherer finishes the conversion
        d = pres.fresh()
        pres.substitute(a, ((c, -1), (d, 1)))
        pres.relators[0] = _cyclic_reduce_word(pres.relators[0])
        _gather_crosscaps(pres)


def _match_standard(pres, surface):
    """Rename final generators onto the surface's standard presentation.

    Returns dict final-gen -> (index, sign) in the standard generators.
    """
    W = pres.relators[0]
    rel = surface.relator.letters
    if len(W) != len(rel):
        raise ConfigError(
            "normalized relator length %d does not match surface %s"
            % (len(W), surface.token()))
    if not W:
        return {}
    n = len(W)
    for cand in (W, _invert(W)):
        for rot in range(n):
            V = _rotate(cand, rot)
            mapping = {}
            ok = True
            for (g, s), (gi, si) in zip(V, rel):
                key = (gi, si * s)
                if g in mapping and mapping[g] != key:
                    ok = False
                    break
                if g not in mapping:
                    mapping[g] = key
            if ok and len(mapping) == len({m[0] for m in mapping.values()}):
                return mapping
    raise ConfigError("normalized relator does not match the standard relator")


def compute_base_structure(config):
    """Spanning tree plus readings of every edge in the standard
    presentation of the declared surface."""
    report = config.validate()
    if report.errors:
        raise ConfigError("; ".join(report.errors))
    if not report.filling:
        raise ConfigError("configuration is not filling; faces are not all disks")
    tree = spanning_tree(config)
    gens = [e for e in sorted(config.edges) if e not in tree]
    relators = []
    for word in face_words(config):
        relators.append(tuple((e, s) for e, s in word if e not in tree))
    tracked = {e: (((e, 1),) if e not in tree else ()) for e in config.edges}
    pres = _Presentation(gens, [_cyclic_reduce_word(r) for r in relators], tracked)
    _merge_faces(pres)
    if pres.relators[0] == ():
        if config.surface.kind != "sphere":
            raise ConfigError("relator collapsed; surface is a sphere")
        mapping = {}
    else:
        _gather_crosscaps(pres)
        _gather_handles(pres)
        _convert_mixed(pres)
        _gather_crosscaps(pres)
        mapping = _match_standard(pres, config.surface)
    readings = {}
    for e in config.edges:
        word = []
        for g, s in pres.tracked[e]:
            gi, si = mapping[g]
            word.append((gi, si * s))
        readings[e] = tuple(word)
    return BaseStructure(tree, readings, mapping)


# ----------------------------------------------------------------------
# public path-word interface


def ensure_readings(config):
    readings = getattr(config, "readings", None)
    if readings is None:
        base = compute_base_structure(config)
        config.readings = base.readings
        config.base_structure = base
    return config.readings


def path_letters(config, path):
    """Linear (freely reduced) word of a directed-edge path."""
    readings = ensure_readings(config)
    out = []
    for e, d in path:
        word = readings[e]
        out.extend(word if d > 0 else _invert(word))
    return tuple(_free_reduce(out))


def trace_to_word(config, path):
    """Free-homotopy class word of a closed edge path."""
    return CyclicWord(path_letters(config, path))


def based_loop_trivial(config, path):
    """Is the closed path null-homotopic (based, hence freely)?"""
    return is_trivial(CyclicWord(path_letters(config, path)), config.surface)


def paths_homotopic_rel_endpoints(config, p1, p2):
    """Are two edge paths with common endpoints homotopic rel endpoints?"""
    w = path_letters(config, p1) + _invert(path_letters(config, p2))
    return is_trivial(CyclicWord(w), config.surface)
