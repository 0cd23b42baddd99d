"""Free simplicial groups with explicit face/degeneracy data.

A :class:`FreeSimplicialGroup` stores, per degree, the nondegenerate free
generators together with the face images of each.  Degenerate generators are
materialized lazily as fresh tagged generators whose names encode a canonical
iterated degeneracy (``s2.s0.x`` means ``s_2 s_0 x``, indices strictly
decreasing left to right).  Faces and degeneracies extend homomorphically to
words.

Also provided: reduced simplicial sets, the Kan loop group construction, and
the built-in complexes (surfaces, three-complexes with a single 3-cell,
simplicial spheres).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .words import Alphabet, Generator, Word, WordError, commutator, gen_word, identity


class SimplicialError(ValueError):
    """Inconsistent simplicial data (identity violation, bad degree, ...)."""


# ---------------------------------------------------------------------------
# canonical iterated degeneracies
# ---------------------------------------------------------------------------

def insert_degeneracy(op: int, ops: Tuple[int, ...]) -> Tuple[int, ...]:
    """Normalize s_op composed after the canonical sequence ``ops``.

    ``ops`` lists operator indices outermost first, strictly decreasing.
    Uses s_i s_j = s_{j+1} s_i for i <= j.
    """
    if not ops or op > ops[0]:
        return (op,) + ops
    return (ops[0] + 1,) + insert_degeneracy(op, ops[1:])


def ops_name(ops: Tuple[int, ...], base: str) -> str:
    return "".join("s%d." % j for j in ops) + base


def parse_ops(name: str) -> Tuple[Tuple[int, ...], str]:
    """Split a canonical degenerate name into (ops, base name)."""
    ops: List[int] = []
    rest = name
    while True:
        head, dot, tail = rest.partition(".")
        if dot and head.startswith("s") and head[1:].isdigit():
            ops.append(int(head[1:]))
            rest = tail
        else:
            break
    return tuple(ops), rest


# ---------------------------------------------------------------------------
# free simplicial groups
# ---------------------------------------------------------------------------

@dataclass
class FreeSimplicialGroup:
    """A free simplicial group truncated at ``max_degree``.

    ``base`` holds the nondegenerate generators per degree; ``face_words``
    maps (generator name, face index) to a Word one degree down.  For a
    degree-q nondegenerate generator all q+1 face images must be supplied
    (q >= 1); degree-0 generators have no faces.
    """

    max_degree: int = 4
    base: Dict[int, List[Generator]] = field(default_factory=dict)
    face_words: Dict[Tuple[str, int], Word] = field(default_factory=dict)
    # optional provenance: name of the (q+1)-cell of Y for each base generator
    cell_of_generator: Dict[str, str] = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        self._alphabets: Dict[int, Alphabet] = {}

    # -- generator bookkeeping ------------------------------------------------

    def base_generators(self, q: int) -> List[Generator]:
        return list(self.base.get(q, []))

    def generators(self, q: int) -> List[Generator]:
        """All free generators of K_q: nondegenerate ones plus the canonical
        degeneracies of lower-degree generators."""
        return list(self.alphabet(q))

    def alphabet(self, q: int) -> Alphabet:
        if q < 0 or q > self.max_degree:
            raise SimplicialError("degree %d out of range [0, %d]" % (q, self.max_degree))
        if q not in self._alphabets:
            a = Alphabet()
            for g in self.base.get(q, []):
                a.add(g)
            if q >= 1:
                for g in self.alphabet(q - 1):
                    for j in range(q):
                        a.add(self.degeneracy_of_generator(q - 1, g, j))
            self._alphabets[q] = a
        return self._alphabets[q]

    def is_degenerate_generator(self, g: Generator) -> bool:
        ops, _ = parse_ops(g.name)
        return bool(ops)

    def decompose(self, g: Generator) -> Tuple[Tuple[int, ...], Generator]:
        ops, base_name = parse_ops(g.name)
        base_degree = g.degree_tag - len(ops)
        for cand in self.base.get(base_degree, []):
            if cand.name == base_name:
                return ops, cand
        raise SimplicialError("generator %r has no base in degree %d" % (g.name, base_degree))

    # -- degeneracies ---------------------------------------------------------

    def degeneracy_of_generator(self, q: int, g: Generator, j: int) -> Generator:
        if not (0 <= j <= q):
            raise SimplicialError("degeneracy index %d out of range for degree %d" % (j, q))
        ops, base = parse_ops(g.name)
        new_ops = insert_degeneracy(j, ops)
        return Generator(ops_name(new_ops, base), q + 1)

    def apply_degeneracy(self, q: int, j: int, w: Word) -> Word:
        letters = [(self.degeneracy_of_generator(q, g, j), e) for g, e in w]
        return Word.reduce(letters)

    # -- faces ----------------------------------------------------------------

    def face_of_generator(self, q: int, g: Generator, i: int) -> Word:
        if not (0 <= i <= q) or q < 1:
            raise SimplicialError("face index %d out of range for degree %d" % (i, q))
        ops, base_name = parse_ops(g.name)
        if not ops:
            try:
                return self.face_words[(g.name, i)]
            except KeyError:
                raise SimplicialError("missing face d_%d of generator %r" % (i, g.name)) from None
        j = ops[0]
        inner = Generator(ops_name(ops[1:], base_name), q - 1)
        if i < j:
            return self.apply_degeneracy(q - 2, j - 1, self.face_of_generator(q - 1, inner, i))
        if i == j or i == j + 1:
            return gen_word(inner)
        return self.apply_degeneracy(q - 2, j, self.face_of_generator(q - 1, inner, i - 1))

    def apply_face(self, q: int, i: int, w: Word) -> Word:
        """d_i : K_q -> K_{q-1}, extended homomorphically and freely reduced."""
        out: List[Tuple[Generator, int]] = []
        for g, e in w:
            img = self.face_of_generator(q, g, i)
            out.extend(img if e == 1 else img.inverse())
        return Word.reduce(out)

    # -- degeneracy-image detection (sharp-normalization support) -------------

    def degenerate_image_names(self, q: int, j: int) -> set:
        """Names of the generators of K_q lying in the image of s_j."""
        return {self.degeneracy_of_generator(q - 1, g, j).name
                for g in self.alphabet(q - 1)}

    def word_in_degeneracy_image(self, q: int, j: int, w: Word) -> bool:
        imgs = self.degenerate_image_names(q, j)
        return all(g.name in imgs for g, _ in w)

    # -- consistency ----------------------------------------------------------

    def check_identities(self, up_to: Optional[int] = None) -> List[str]:
        """Verify d_i d_j = d_{j-1} d_i on every generator of degree >= 2.

        The d_i s_j and s_i s_j identities hold by construction of the lazy
        degeneracies; only the user-supplied face tables can break d d.
        Returns a list of human-readable violation descriptions.
        """
        bad = []
        top = self.max_degree if up_to is None else up_to
        for q in range(2, top + 1):
            for g in self.alphabet(q):
                w = gen_word(g)
                for jj in range(q + 1):
                    for ii in range(jj):
                        lhs = self.apply_face(q - 1, ii, self.apply_face(q, jj, w))
                        rhs = self.apply_face(q - 1, jj - 1, self.apply_face(q, ii, w))
                        if lhs != rhs:
                            bad.append("d_%d d_%d %s = %s but d_%d d_%d %s = %s (degree %d)"
                                       % (ii, jj, g.name, lhs, jj - 1, ii, g.name, rhs, q))
        return bad

    def require_identities(self):
        bad = self.check_identities()
        if bad:
            raise SimplicialError("simplicial identity violation:\n" + "\n".join(bad))

    # -- cells of the underlying complex --------------------------------------

    def cells(self) -> Dict[int, List[str]]:
        """Cells of the complex Y this group models: one 0-cell plus one
        (q+1)-cell per nondegenerate degree-q generator."""
        out: Dict[int, List[str]] = {0: ["o"]}
        for q, gens in sorted(self.base.items()):
            if gens:
                out[q + 1] = [self.cell_of_generator.get(g.name, g.name) for g in gens]
        return out


# ---------------------------------------------------------------------------
# built-in complexes
# ---------------------------------------------------------------------------

def builtin_surface(genus: int, max_degree: int = 4) -> FreeSimplicialGroup:
    """Kan-style model for the closed orientable surface of the given genus.

    Degree 0 is free on x_1,y_1,...,x_l,y_l; degree 1 adds the relator
    generator r with d_0 r = prod [x_j, y_j] and d_1 r = 1.
    """
    if genus < 0:
        raise SimplicialError("genus must be >= 0")
    K = FreeSimplicialGroup(max_degree=max_degree, label="surface genus %d" % genus)
    xs = [Generator("x%d" % (j + 1), 0) for j in range(genus)]
    ys = [Generator("y%d" % (j + 1), 0) for j in range(genus)]
    K.base[0] = [g for pair in zip(xs, ys) for g in pair]
    r = Generator("r", 1)
    K.base[1] = [r]
    rel = identity()
    for a, b in zip(xs, ys):
        rel = rel * commutator(gen_word(a), gen_word(b))
    K.face_words[("r", 0)] = rel
    K.face_words[("r", 1)] = identity()
    K.cell_of_generator = {g.name: "u_" + g.name for g in K.base[0]}
    K.cell_of_generator["r"] = "c"
    K.require_identities()
    return K


def builtin_threefold(generators: Sequence[str],
                      relators: Sequence[str],
                      sigma_faces: Sequence[str],
                      max_degree: int = 4) -> FreeSimplicialGroup:
    """A 3-complex with 1-cells, 2-cells, and a single 3-cell.

    ``generators`` are the degree-0 generator names; ``relators`` the
    attaching words of the 2-cells (words in the generators); ``sigma_faces``
    the three face words (d_0, d_1, d_2) of the degree-2 generator sigma,
    written in the degree-1 alphabet {r1, ..., rl, s0.<gen>, ...}.

    The simplicial identities are verified on all supplied data; a violation
    raises :class:`SimplicialError`.
    """
    if len(sigma_faces) != 3:
        raise SimplicialError("sigma needs exactly three face words")
    K = FreeSimplicialGroup(max_degree=max_degree, label="threefold")
    K.base[0] = [Generator(n, 0) for n in generators]
    a0 = Alphabet.of(K.base[0])
    rel_gens = [Generator("r%d" % (j + 1), 1) for j in range(len(relators))]
    K.base[1] = rel_gens
    for g, rel_text in zip(rel_gens, relators):
        K.face_words[(g.name, 0)] = a0.parse(rel_text)
        K.face_words[(g.name, 1)] = identity()
    sigma = Generator("sigma", 2)
    K.base[2] = [sigma]
    a1 = K.alphabet(1)
    for i, text in enumerate(sigma_faces):
        K.face_words[(sigma.name, i)] = a1.parse(text)
    K.cell_of_generator = {n: "u_" + n for n in generators}
    K.cell_of_generator.update({g.name: "c_%d" % (j + 1) for j, g in enumerate(rel_gens)})
    K.cell_of_generator["sigma"] = "c"
    K.require_identities()
    return K


def minimal_threefold(max_degree: int = 4) -> FreeSimplicialGroup:
    """The minimal 3-sphere: no 1- or 2-cells, a single 3-cell."""
    return builtin_threefold([], [], ["1", "1", "1"], max_degree=max_degree)


# ---------------------------------------------------------------------------
# reduced simplicial sets and the Kan loop group
# ---------------------------------------------------------------------------

SimplexRef = Tuple[Tuple[int, ...], str]  # (canonical degeneracy ops, base name)


@dataclass
class ReducedSimplicialSet:
    """A simplicial set with a single 0-simplex, given by its nondegenerate
    simplices and their faces (which may be degenerate)."""

    basepoint: str = "*"
    nondegenerate: Dict[int, List[str]] = field(default_factory=dict)
    faces: Dict[Tuple[str, int], SimplexRef] = field(default_factory=dict)

    def __post_init__(self):
        self.nondegenerate.setdefault(0, [self.basepoint])
        if self.nondegenerate[0] != [self.basepoint]:
            raise SimplicialError("a reduced simplicial set has exactly one 0-simplex")
        self._dim: Dict[str, int] = {}
        for n, names in self.nondegenerate.items():
            for name in names:
                self._dim[name] = n

    def dim_base(self, name: str) -> int:
        try:
            return self._dim[name]
        except KeyError:
            raise SimplicialError("unknown simplex %r" % (name,)) from None

    def ref_dim(self, ref: SimplexRef) -> int:
        ops, base = ref
        return self.dim_base(base) + len(ops)

    def degeneracy(self, ref: SimplexRef, j: int) -> SimplexRef:
        ops, base = ref
        return insert_degeneracy(j, ops), base

    def face(self, ref: SimplexRef, i: int) -> SimplexRef:
        ops, base = ref
        if not ops:
            n = self.dim_base(base)
            if n == 0:
                raise SimplicialError("0-simplex has no faces")
            try:
                return self.faces[(base, i)]
            except KeyError:
                raise SimplicialError("missing face d_%d of simplex %r" % (i, base)) from None
        j = ops[0]
        inner = (ops[1:], base)
        if i < j:
            return self.degeneracy(self.face(inner, i), j - 1)
        if i == j or i == j + 1:
            return inner
        return self.degeneracy(self.face(inner, i - 1), j)

    def check_identities(self) -> List[str]:
        bad = []
        for n, names in self.nondegenerate.items():
            if n < 2:
                continue
            for name in names:
                ref: SimplexRef = ((), name)
                for jj in range(n + 1):
                    for ii in range(jj):
                        lhs = self.face(self.face(ref, jj), ii)
                        rhs = self.face(self.face(ref, ii), jj - 1)
                        if lhs != rhs:
                            bad.append("simplex %r: d_%d d_%d != d_%d d_%d" % (name, ii, jj, jj - 1, ii))
        return bad


def sphere_set(n: int) -> ReducedSimplicialSet:
    """The n-sphere as Delta[n] / boundary: one vertex, one nondegenerate
    n-simplex whose faces all collapse to the basepoint."""
    if n < 1:
        raise SimplicialError("sphere dimension must be >= 1")
    X = ReducedSimplicialSet(nondegenerate={0: ["*"], n: ["top"]})
    collapsed: SimplexRef = (tuple(range(n - 2, -1, -1)), "*")  # s_{n-2}...s_0 *
    for i in range(n + 1):
        X.faces[("top", i)] = collapsed
    return X


def torus_set() -> ReducedSimplicialSet:
    """The torus as the standard two-triangle Delta-complex with one vertex."""
    X = ReducedSimplicialSet(nondegenerate={0: ["*"], 1: ["a", "b", "c"], 2: ["U", "L"]})
    pt: SimplexRef = ((), "*")
    for e in ("a", "b", "c"):
        X.faces[(e, 0)] = pt
        X.faces[(e, 1)] = pt
    X.faces[("U", 0)] = ((), "b")
    X.faces[("U", 1)] = ((), "c")
    X.faces[("U", 2)] = ((), "a")
    X.faces[("L", 0)] = ((), "a")
    X.faces[("L", 1)] = ((), "c")
    X.faces[("L", 2)] = ((), "b")
    return X


def kan_loop_group(X: ReducedSimplicialSet, max_degree: int = 4) -> FreeSimplicialGroup:
    """The Kan loop group of a reduced simplicial set.

    K_q is free on the nondegenerate (q+1)-simplices of X.  Writing t(x) for
    the generator attached to a (q+1)-simplex x, with t(s_0 y) = 1 and
    t(s_{j} z) = s_{j-1} t(z) for j >= 1, the faces are

        d_0 t(x) = t(d_1 x) * t(d_0 x)^{-1},
        d_i t(x) = t(d_{i+1} x)   for i >= 1,

    and the simplicial identities are verified on the result.
    """
    bad = X.check_identities()
    if bad:
        raise SimplicialError("input simplicial set is inconsistent:\n" + "\n".join(bad))
    K = FreeSimplicialGroup(max_degree=max_degree, label="kan loop group")
    for q in range(0, max_degree + 1):
        K.base[q] = [Generator(name, q) for name in X.nondegenerate.get(q + 1, [])]

    def tau(ref: SimplexRef) -> Word:
        ops, base = ref
        n = X.dim_base(base) + len(ops)
        if n == 0:
            raise SimplicialError("tau of a 0-simplex")
        if not ops:
            return gen_word(Generator(base, n - 1))
        j = ops[0]
        if j == 0:
            return identity()
        return K.apply_degeneracy(n - 2, j - 1, tau((ops[1:], base)))

    for q in range(0, max_degree + 1):
        for g in K.base[q]:
            if q == 0:
                continue
            ref: SimplexRef = ((), g.name)
            d0 = tau(X.face(ref, 1)) * tau(X.face(ref, 0)).inverse()
            K.face_words[(g.name, 0)] = d0
            for i in range(1, q + 1):
                K.face_words[(g.name, i)] = tau(X.face(ref, i + 1))
    K.cell_of_generator = {g.name: g.name for q in K.base for g in K.base[q]}
    K.require_identities()
    return K


# ---------------------------------------------------------------------------
# JSON ingestion
# ---------------------------------------------------------------------------

def complex_from_json(data: dict, max_degree: int = 4) -> FreeSimplicialGroup:
    """Build a FreeSimplicialGroup from the JSON schema:

    {"kind":"surface","genus":l} |
    {"kind":"threefold","generators":[...],"relators":[...],"sigma_faces":[w0,w1,w2]} |
    {"kind":"simplicial_set","simplices":{"0":["*"],...},"faces":{"name":[refs]},...}

    Simplex references use the degeneracy name syntax, e.g. "s1.s0.*".
    """
    kind = data.get("kind")
    if kind == "surface":
        return builtin_surface(int(data["genus"]), max_degree=max_degree)
    if kind == "threefold":
        return builtin_threefold(data.get("generators", []), data.get("relators", []),
                                 data["sigma_faces"], max_degree=max_degree)
    if kind == "simplicial_set":
        simplices = {int(k): list(v) for k, v in data["simplices"].items()}
        X = ReducedSimplicialSet(nondegenerate=simplices)
        for name, refs in data.get("faces", {}).items():
            for i, ref_text in enumerate(refs):
                X.faces[(name, i)] = parse_ops(ref_text)
        return kan_loop_group(X, max_degree=max_degree)
    raise SimplicialError("unknown complex kind %r" % (kind,))
