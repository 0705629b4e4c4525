"""Exact algebra of free-homotopy classes on closed surfaces.

Words live in one-relator standard presentations.  Hyperbolic kinds
(orientable genus >= 2, non-orientable genus >= 3) are handled with
Dehn reduction plus saturation over length-preserving half-relator
swaps; sphere, projective plane, torus and Klein bottle are handled by
their explicit conjugacy classifications.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class WordError(ValueError):
    pass


# A letter is (generator index, sign) with sign in {+1, -1}.


def _invert(letters):
    return tuple((g, -s) for (g, s) in reversed(letters))


def _free_reduce(letters):
    out = []
    for g, s in letters:
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return out


class CyclicWord:
    """A cyclically reduced word, immutable and hashable.

    Equality is literal (same letter tuple); use the presentation's
    conjugacy test for free-homotopy comparisons.
    """

    __slots__ = ("letters",)

    def __init__(self, letters):
        word = _free_reduce(tuple(letters))
        while len(word) >= 2 and word[0][0] == word[-1][0] and word[0][1] == -word[-1][1]:
            word = word[1:-1]
            word = _free_reduce(word)
        self.letters = tuple(word)

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, CyclicWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return "CyclicWord(%r)" % (self.letters,)

    def inverse(self):
        return CyclicWord(_invert(self.letters))

    def power(self, n):
        if n == 0:
            return CyclicWord(())
        base = self.letters if n > 0 else _invert(self.letters)
        return CyclicWord(base * abs(n))

    def is_trivial_word(self):
        return not self.letters

    def rotations(self):
        w = self.letters
        return {w[i:] + w[:i] for i in range(max(1, len(w)))}


KINDS = ("sphere", "projective_plane", "torus", "klein_bottle",
         "orientable", "nonorientable")


@dataclass(frozen=True)
class SurfacePresentation:
    """A closed surface with its standard one-relator presentation."""

    kind: str
    genus: int  # orientable genus g, or non-orientable genus k (crosscaps)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise WordError("unknown surface kind %r" % (self.kind,))
        if self.kind == "orientable" and self.genus < 2:
            raise WordError("orientable kind covers genus >= 2 only")
        if self.kind == "nonorientable" and self.genus < 3:
            raise WordError("nonorientable kind covers genus >= 3 only")

    @staticmethod
    def from_token(token):
        """Parse a kind token: S2, RP2, T2, K2, O<g>, N<k>."""
        t = token.strip()
        if t == "S2":
            return SurfacePresentation("sphere", 0)
        if t == "RP2":
            return SurfacePresentation("projective_plane", 1)
        if t == "T2":
            return SurfacePresentation("torus", 1)
        if t == "K2":
            return SurfacePresentation("klein_bottle", 2)
        if t.startswith("O") and t[1:].isdigit():
            return SurfacePresentation("orientable", int(t[1:]))
        if t.startswith("N") and t[1:].isdigit():
            return SurfacePresentation("nonorientable", int(t[1:]))
        raise WordError("unknown surface token %r" % (token,))

    def token(self):
        return {
            "sphere": "S2", "projective_plane": "RP2", "torus": "T2",
            "klein_bottle": "K2",
        }.get(self.kind) or ("O%d" % self.genus if self.kind == "orientable"
                             else "N%d" % self.genus)

    @property
    def generators(self):
        if self.kind == "sphere":
            return ()
        if self.kind == "projective_plane":
            return ("a",)
        if self.kind == "torus":
            return ("a", "b")
        if self.kind == "klein_bottle":
            return ("a", "b")
        if self.kind == "orientable":
            names = []
            for i in range(1, self.genus + 1):
                names += ["a%d" % i, "b%d" % i]
            return tuple(names)
        return tuple("a%d" % i for i in range(1, self.genus + 1))

    @property
    def relator(self):
        """Standard relator: product of commutators, or of squares."""
        if self.kind == "sphere":
            return CyclicWord(())
        if self.kind in ("projective_plane", "klein_bottle", "nonorientable"):
            n = {"projective_plane": 1, "klein_bottle": 2}.get(self.kind, self.genus)
            return CyclicWord([(i, +1) for i in range(n) for _ in (0, 1)])
        if self.kind == "torus":
            return CyclicWord([(0, 1), (1, 1), (0, -1), (1, -1)])
        letters = []
        for i in range(self.genus):
            a, b = 2 * i, 2 * i + 1
            letters += [(a, 1), (b, 1), (a, -1), (b, -1)]
        return CyclicWord(letters)

    @property
    def euler_characteristic(self):
        if self.kind == "sphere":
            return 2
        if self.kind in ("projective_plane",):
            return 1
        if self.kind in ("torus",):
            return 0
        if self.kind == "klein_bottle":
            return 0
        if self.kind == "orientable":
            return 2 - 2 * self.genus
        return 2 - self.genus

    @property
    def orientable(self):
        return self.kind in ("sphere", "torus", "orientable")

    @property
    def hyperbolic(self):
        return (self.kind == "orientable") or (self.kind == "nonorientable")

    def generator_reverses_orientation(self, index):
        """True if the generator is one-sided (crosscap generators only)."""
        if self.orientable:
            return False
        return True  # every crosscap generator a_i reverses orientation

    # ------------------------------------------------------------------
    # word construction / formatting

    def parse_word(self, text):
        """Parse whitespace-separated signed symbols; uppercase = inverse."""
        letters = []
        index = {g: i for i, g in enumerate(self.generators)}
        for tok in text.split():
            name, sign = tok, +1
            if tok[:1].isupper():
                name, sign = tok.lower(), -1
            if name not in index:
                raise WordError("unknown generator symbol %r" % (tok,))
            letters.append((index[name], sign))
        return CyclicWord(letters)

    def format_word(self, word):
        gens = self.generators
        out = []
        for g, s in word.letters:
            name = gens[g]
            out.append(name if s > 0 else name[0].upper() + name[1:])
        return " ".join(out)

    # ------------------------------------------------------------------
    # internals for Dehn reduction

    def _symmetrized_relator(self):
        rel = self.relator.letters
        words = set()
        for base in (rel, _invert(rel)):
            for i in range(len(base)):
                words.add(base[i:] + base[:i])
        return tuple(sorted(words))

    def _half_tables(self):
        """Maps: subword of length > L/2 (resp. == L/2) -> shorter (equal)
        complement, over all symmetrized relators."""
        more, equal = {}, {}
        rel_len = len(self.relator)
        half = rel_len // 2
        for r in self._symmetrized_relator():
            for k in range(half, rel_len + 1):
                piece = r[:k]
                complement = _invert(r[k:])
                if k > half:
                    more.setdefault(piece, complement)
                elif k == half:
                    equal.setdefault(piece, complement)
        return more, equal


@lru_cache(maxsize=None)
def _tables_for(pres):
    return pres._half_tables()


def cyclic_reduce(letters, pres=None):
    """Freely and cyclically reduce a raw letter sequence."""
    if pres is not None:
        for g, _s in letters:
            if not 0 <= g < len(pres.generators):
                raise WordError("letter index %r out of range" % (g,))
    return CyclicWord(letters)


def _linear_dehn_pass(word, more):
    """One strictly shortening replacement on a cyclic word, if any."""
    w = word
    n = len(w)
    if n == 0:
        return None
    doubled = w + w
    max_len = max(len(k) for k in more) if more else 0
    for start in range(n):
        for length in range(min(max_len, n), 0, -1):
            piece = doubled[start:start + length]
            rep = more.get(piece)
            if rep is not None:
                rest = doubled[start + length:start + n]
                return tuple(_free_reduce(rep + rest))
    return None


def _cyclic_normal_set(word, pres):
    """All minimal-length cyclic representatives reachable by rotations and
    half-relator swaps after full Dehn reduction.  The returned frozenset is
    a conjugacy invariant for the hyperbolic kinds."""
    more, equal = _tables_for(pres)
    w = CyclicWord(word.letters).letters
    while True:
        shorter = _linear_dehn_pass(w, more)
        if shorter is None:
            break
        w = CyclicWord(shorter).letters
    if not w:
        return frozenset([()])
    half = len(pres.relator) // 2
    seen = set()
    frontier = [w]
    while frontier:
        cur = frontier.pop()
        for rot in CyclicWord(cur).rotations():
            if rot in seen:
                continue
            # a plateau word must stay fully Dehn reduced
            shorter = _linear_dehn_pass(rot, more)
            if shorter is not None:
                # the swap closure exposed a shortening; restart from there
                return _cyclic_normal_set(CyclicWord(shorter), pres)
            seen.add(rot)
            n = len(rot)
            if half > n:
                continue
            doubled = rot + rot
            for start in range(n):
                piece = doubled[start:start + half]
                rep = equal.get(piece)
                if rep is None:
                    continue
                rest = doubled[start + half:start + n]
                new = CyclicWord(rep + rest).letters
                if len(new) < n:
                    return _cyclic_normal_set(CyclicWord(new), pres)
                if new not in seen:
                    frontier.append(new)
    return frozenset(seen)


def dehn_normalize(word, pres):
    """Shortest cyclic representative of the conjugacy class (hyperbolic
    kinds).  Output is empty exactly for the trivial class."""
    if not pres.hyperbolic:
        raise WordError("dehn_normalize applies to hyperbolic kinds only")
    forms = _cyclic_normal_set(word, pres)
    return CyclicWord(min(forms))


# ----------------------------------------------------------------------
# special-case conjugacy data


def _torus_vector(word):
    e = [0, 0]
    for g, s in word.letters:
        e[g] += s
    return tuple(e)


def _klein_normal_form(word):
    """Normal form (m, n) in <u, v | v u v^-1 = u^-1> for a word over the
    crosscap generators a, b of the Klein bottle (a = u v^-1, b = v)."""
    m, n = 0, 0
    for g, s in word.letters:
        if g == 0:  # a = u v^-1
            if s > 0:
                m += (1 if n % 2 == 0 else -1)
                n -= 1
            else:
                n += 1
                m -= (1 if n % 2 == 0 else -1)
        else:  # b = v
            n += s
    return m, n


def _klein_conjugacy_key(word):
    m, n = _klein_normal_form(word)
    if n % 2 == 0:
        return (abs(m), n)
    return (m % 2, n)


def are_freely_homotopic(u, v, pres):
    """True iff u and v are conjugate in the fundamental group."""
    if pres.kind == "sphere":
        return True
    if pres.kind == "projective_plane":
        return (sum(s for _g, s in u.letters) % 2) == (sum(s for _g, s in v.letters) % 2)
    if pres.kind == "torus":
        return _torus_vector(u) == _torus_vector(v)
    if pres.kind == "klein_bottle":
        return _klein_conjugacy_key(u) == _klein_conjugacy_key(v)
    return bool(_cyclic_normal_set(u, pres) & _cyclic_normal_set(v, pres))


def is_trivial(word, pres):
    if pres.kind == "sphere":
        return True
    if pres.kind == "projective_plane":
        return sum(s for _g, s in word.letters) % 2 == 0
    if pres.kind == "torus":
        return _torus_vector(word) == (0, 0)
    if pres.kind == "klein_bottle":
        return _klein_normal_form(word) == (0, 0)
    return len(dehn_normalize(word, pres)) == 0


def same_unoriented_class(u, v, pres):
    """Free homotopy of unoriented curves: u ~ v or u ~ v^-1."""
    return are_freely_homotopic(u, v, pres) or are_freely_homotopic(u, v.inverse(), pres)


def class_key(word, pres):
    """Hashable conjugacy-class key (oriented)."""
    if pres.kind == "sphere":
        return ()
    if pres.kind == "projective_plane":
        return sum(s for _g, s in word.letters) % 2
    if pres.kind == "torus":
        return _torus_vector(word)
    if pres.kind == "klein_bottle":
        return _klein_conjugacy_key(word)
    return min(_cyclic_normal_set(word, pres))


def unoriented_class_key(word, pres):
    return min(class_key(word, pres), class_key(word.inverse(), pres))


def orientation_character(word, pres):
    """+1 if the class preserves orientation, -1 otherwise."""
    if pres.orientable:
        return +1
    flips = sum(1 for g, _s in word.letters if pres.generator_reverses_orientation(g))
    return +1 if flips % 2 == 0 else -1


def maximal_root(word, pres):
    """Primitive root and maximal exponent r with word ~ root**r.

    On the projective plane the nontrivial class is reported with
    exponent 1 (pi_1 is Z/2, so powers are not well ordered there).
    """
    if is_trivial(word, pres):
        raise WordError("maximal_root of the trivial class")
    if pres.kind == "sphere":
        raise WordError("maximal_root of the trivial class")
    if pres.kind == "projective_plane":
        return CyclicWord([(0, 1)]), 1
    if pres.kind == "torus":
        from math import gcd
        m, n = _torus_vector(word)
        r = gcd(abs(m), abs(n))
        pm, pn = m // r, n // r
        letters = [(0, 1 if pm > 0 else -1)] * abs(pm)
        letters += [(1, 1 if pn > 0 else -1)] * abs(pn)
        return CyclicWord(letters), r
    if pres.kind == "klein_bottle":
        return _klein_maximal_root(word)
    return _hyperbolic_maximal_root(word, pres)


def _klein_build(p, q):
    """Word over the crosscap generators with normal form u^p v^q."""
    letters = []
    for _ in range(abs(p)):
        letters += [(0, 1), (1, 1)] if p > 0 else [(1, -1), (0, -1)]
    letters += [(1, 1 if q > 0 else -1)] * abs(q)
    return CyclicWord(letters)


def _klein_maximal_root(word):
    """Roots in <u, v | v u v^-1 = u^-1>.

    Powers: (p, q)^r = (rp, rq) for q even; for q odd, (p, rq) when r is
    odd and (0, rq) when r is even.  Conjugacy classes: (|m|, n) for n
    even, (m mod 2, n) for n odd.
    """
    m, n = _klein_normal_form(word)
    if n == 0:
        return _klein_build(1 if m > 0 else -1, 0), abs(m)
    if n % 2 == 1:
        # maximal odd exponent |n| with root (m mod 2, sign(n))
        return _klein_build(m % 2, 1 if n > 0 else -1), abs(n)
    if m == 0:
        # v^n with n even: root v, exponent |n|
        return _klein_build(0, 1 if n > 0 else -1), abs(n)
    best_r, best_root = 1, _klein_build(m, n)
    for r in range(2, abs(m) + 1):
        if m % r == 0 and n % r == 0 and (n // r) % 2 == 0:
            best_r, best_root = r, _klein_build(m // r, n // r)
    return best_root, best_r


def _hyperbolic_maximal_root(word, pres):
    forms = _cyclic_normal_set(word, pres)
    n = len(next(iter(forms)))
    if n == 0:
        raise WordError("maximal_root of the trivial class")
    best_r, best_root = 1, CyclicWord(min(forms))
    for r in range(n, 1, -1):
        if n % r:
            continue
        period = n // r
        for form in forms:
            if form[:period] * r == form:
                root = CyclicWord(form[:period])
                if are_freely_homotopic(word, root.power(r), pres):
                    return root, r
    return best_root, best_r
