"""Homology-level model of compact oriented surfaces with boundary.

Each connected component of genus g with boundary labels l_1..l_b carries
the ordered H1 basis

    a_1, b_1, ..., a_g, b_g, [l_1], ..., [l_{b-1}]

where [l_i] is the class of the boundary circle oriented as the boundary
(surface on the left).  The class of the last circle is dependent:
[l_b] = -([l_1] + ... + [l_{b-1}]).  A disconnected surface concatenates
the bases of its components.

Conventions, fixed once for the whole package:

* pairing(x, y) counts signed crossings of x then y with <a_i, b_i> = +1;
  boundary classes pair to zero with every closed class.
* A positive Dehn twist along c acts by x -> x + <c, x> c, so
  T_{a1}(b1) = b1 + a1.  The same formula acts on arcs.
* Each component has one marked point per boundary circle.  Its last label
  is the reference point; the standard arc eta_l runs from the reference
  point to the marked point of l, pairs +1 with [l] and 0 with every a_i,
  b_i.  Arcs are stored as eta_end - eta_start + (closed part).
* Twist words compose right to left: the rightmost letter acts first.

Twists along nullhomologous curves act trivially at this level; that is a
limitation of the model, not a claim about the mapping class group.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .zmodule import IntMatrix

Vector = tuple[int, ...]


class SurfaceError(ValueError):
    pass


@dataclass(frozen=True)
class Component:
    genus: int
    labels: tuple[str, ...]

    def __post_init__(self):
        if self.genus < 0:
            raise SurfaceError("genus must be >= 0")
        if not self.labels:
            raise SurfaceError("every page component needs at least one boundary circle")
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def boundary_count(self) -> int:
        return len(self.labels)

    @property
    def rank(self) -> int:
        return 2 * self.genus + len(self.labels) - 1

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - len(self.labels)

    @property
    def reference_label(self) -> str:
        return self.labels[-1]


@dataclass(frozen=True)
class CombSurface:
    """A possibly disconnected oriented surface, each component with boundary.

    ``glue_curves`` names extra closed curves (glue circles created by
    binding sums) by their class in the basis above.
    """

    components: tuple[Component, ...]
    glue_curves: tuple[tuple[str, Vector], ...] = ()

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        labels = [l for c in comps for l in c.labels]
        if len(set(labels)) != len(labels):
            raise SurfaceError(f"boundary labels must be unique, got {labels}")
        glue = tuple((str(n), tuple(int(x) for x in v)) for n, v in self.glue_curves)
        for name, vec in glue:
            if len(vec) != self.rank:
                raise SurfaceError(f"glue curve {name} has wrong length")
        object.__setattr__(self, "glue_curves", glue)

    # construction -----------------------------------------------------

    @classmethod
    def standard(cls, genus: int, boundary: int, labels: Sequence[str] | None = None) -> CombSurface:
        if labels is None:
            labels = [str(i + 1) for i in range(boundary)]
        if len(labels) != boundary:
            raise SurfaceError("label count does not match boundary count")
        return cls((Component(genus, tuple(labels)),))

    @classmethod
    def disc(cls, label: str = "1") -> CombSurface:
        return cls.standard(0, 1, [label])

    @classmethod
    def annulus(cls, labels: Sequence[str] = ("1", "2")) -> CombSurface:
        return cls.standard(0, 2, labels)

    # bookkeeping -------------------------------------------------------

    @property
    def rank(self) -> int:
        return sum(c.rank for c in self.components)

    @property
    def euler_characteristic(self) -> int:
        return sum(c.euler_characteristic for c in self.components)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(l for c in self.components for l in c.labels)

    @property
    def boundary_count(self) -> int:
        return len(self.labels)

    def offsets(self) -> list[int]:
        out, pos = [], 0
        for c in self.components:
            out.append(pos)
            pos += c.rank
        return out

    def component_of(self, label: str) -> int:
        for i, c in enumerate(self.components):
            if label in c.labels:
                return i
        raise SurfaceError(f"unknown boundary label {label!r}")

    def glue_dict(self) -> dict[str, Vector]:
        return dict(self.glue_curves)

    def basis_names(self) -> list[str]:
        names = []
        for ci, c in enumerate(self.components):
            suffix = f"@{ci}" if len(self.components) > 1 else ""
            for i in range(1, c.genus + 1):
                names += [f"a{i}{suffix}", f"b{i}{suffix}"]
            names += [f"d({l})" for l in c.labels[:-1]]
        return names

    def zero(self) -> Vector:
        return (0,) * self.rank

    def basis_vector(self, index: int) -> Vector:
        v = [0] * self.rank
        v[index] = 1
        return tuple(v)

    def a(self, i: int, component: int = 0) -> Vector:
        c = self.components[component]
        if not 1 <= i <= c.genus:
            raise SurfaceError(f"a{i} does not exist on a genus {c.genus} component")
        return self.basis_vector(self.offsets()[component] + 2 * (i - 1))

    def b(self, i: int, component: int = 0) -> Vector:
        c = self.components[component]
        if not 1 <= i <= c.genus:
            raise SurfaceError(f"b{i} does not exist on a genus {c.genus} component")
        return self.basis_vector(self.offsets()[component] + 2 * (i - 1) + 1)

    def boundary_class(self, label: str) -> Vector:
        ci = self.component_of(label)
        c = self.components[ci]
        start = self.offsets()[ci] + 2 * c.genus
        v = [0] * self.rank
        if label == c.reference_label:
            for k in range(c.boundary_count - 1):
                v[start + k] = -1
        else:
            v[start + c.labels.index(label)] = 1
        return tuple(v)

    def arc_pairing_row(self, label: str) -> Vector:
        """Pairing <eta_label, e_k> of the standard arc with each basis vector."""
        ci = self.component_of(label)
        c = self.components[ci]
        v = [0] * self.rank
        if label != c.reference_label:
            v[self.offsets()[ci] + 2 * c.genus + c.labels.index(label)] = 1
        return tuple(v)

    def intersection_matrix(self) -> IntMatrix:
        m = IntMatrix(self.rank, self.rank)
        for off, c in zip(self.offsets(), self.components):
            for i in range(c.genus):
                m[off + 2 * i, off + 2 * i + 1] = 1
                m[off + 2 * i + 1, off + 2 * i] = -1
        return m

    def component_support(self, v: Sequence[int]) -> set[int]:
        out = set()
        for ci, (off, c) in enumerate(zip(self.offsets(), self.components)):
            if any(v[off:off + c.rank]):
                out.add(ci)
        return out

    def check_invariants(self) -> None:
        """Recompute rank = 1 - chi per component and label uniqueness."""
        for c in self.components:
            if c.rank != 1 - c.euler_characteristic:
                raise SurfaceError("rank does not match Euler characteristic")
        if len(set(self.labels)) != len(self.labels):
            raise SurfaceError("duplicate labels")


# pairing and twists ----------------------------------------------------


def intersection(surface: CombSurface, x: Sequence[int], y: Sequence[int]) -> int:
    """Algebraic intersection number of two closed classes."""
    n = surface.rank
    if len(x) != n or len(y) != n:
        raise SurfaceError("class does not live on this surface")
    total = 0
    for off, c in zip(surface.offsets(), surface.components):
        for i in range(c.genus):
            p, q = off + 2 * i, off + 2 * i + 1
            total += x[p] * y[q] - x[q] * y[p]
    return total


def _axpy(k: int, x: Sequence[int], y: Sequence[int]) -> Vector:
    return tuple(b + k * a for a, b in zip(x, y))


@dataclass(frozen=True)
class CurveClass:
    """A closed curve on a page, known by its H1 class (plus a display name)."""

    name: str
    vector: Vector

    @property
    def is_zero(self) -> bool:
        return not any(self.vector)


@dataclass(frozen=True)
class ArcClass:
    """Arc between two marked points of one component.

    Represents eta_end - eta_start + closed, with eta the standard arcs.
    """

    start: str
    end: str
    closed: Vector

    def pairing(self, surface: CombSurface, c: Sequence[int]) -> int:
        """<arc, c> for a closed class c."""
        total = intersection(surface, self.closed, c)
        total += sum(a * b for a, b in zip(surface.arc_pairing_row(self.end), c))
        total -= sum(a * b for a, b in zip(surface.arc_pairing_row(self.start), c))
        return total


@dataclass(frozen=True)
class Twist:
    curve: CurveClass
    power: int


@dataclass(frozen=True)
class TwistWord:
    """Product of Dehn twist powers, composed right to left."""

    letters: tuple[Twist, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))

    @classmethod
    def of(cls, *pairs: tuple[CurveClass, int]) -> TwistWord:
        return cls(tuple(Twist(c, k) for c, k in pairs))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: TwistWord) -> TwistWord:
        """self * other: apply other first, then self."""
        return TwistWord(self.letters + other.letters)

    def inverse(self) -> TwistWord:
        return TwistWord(tuple(Twist(t.curve, -t.power) for t in reversed(self.letters)))

    def transferred(self, matrix: IntMatrix) -> TwistWord:
        return TwistWord(tuple(
            Twist(CurveClass(t.curve.name, matrix.apply(t.curve.vector)), t.power)
            for t in self.letters))

    def check_on(self, surface: CombSurface) -> None:
        for t in self.letters:
            if len(t.curve.vector) != surface.rank:
                raise SurfaceError(f"curve {t.curve.name} does not live on this surface")


def twist_action(surface: CombSurface, word: TwistWord, x: Sequence[int]) -> Vector:
    """Image of a closed class under the word (rightmost letter first)."""
    word.check_on(surface)
    v = tuple(x)
    if len(v) != surface.rank:
        raise SurfaceError("class does not live on this surface")
    for t in reversed(word.letters):
        c = t.curve.vector
        v = _axpy(t.power * intersection(surface, c, v), c, v)
    return v


def twist_action_arc(surface: CombSurface, word: TwistWord, arc: ArcClass) -> ArcClass:
    """Image of an arc class under the word, same formula as closed classes."""
    word.check_on(surface)
    closed = tuple(arc.closed)
    for t in reversed(word.letters):
        c = t.curve.vector
        cur = ArcClass(arc.start, arc.end, closed)
        closed = _axpy(-t.power * cur.pairing(surface, c), c, closed)
    return ArcClass(arc.start, arc.end, closed)


def word_matrix(surface: CombSurface, word: TwistWord) -> IntMatrix:
    """Matrix of the word's action on H1 (columns are images of basis vectors)."""
    cols = [twist_action(surface, word, surface.basis_vector(i)) for i in range(surface.rank)]
    return IntMatrix.from_columns(cols, surface.rank)


# curve names -----------------------------------------------------------


def resolve_curve(surface: CombSurface, token: str) -> CurveClass:
    """Resolve a curve token: a<i>, b<i>, d(<label>), glue(<name>), core, vec[...].

    ``a<i>``/``b<i>`` count handles across components in basis order.
    ``core`` is an alias for the boundary-parallel curve of an annulus.
    """
    token = token.strip()
    if token == "core":
        if len(surface.components) != 1 or surface.components[0].genus != 0 \
                or surface.boundary_count != 2:
            raise SurfaceError("alias 'core' only exists on an annulus")
        return CurveClass("core", surface.boundary_class(surface.labels[0]))
    if token.startswith("d(") and token.endswith(")"):
        return CurveClass(token, surface.boundary_class(token[2:-1].strip()))
    if token.startswith("glue(") and token.endswith(")"):
        name = token[5:-1].strip()
        glue = surface.glue_dict()
        if name not in glue:
            raise SurfaceError(f"unknown glue circle {name!r}")
        return CurveClass(token, glue[name])
    if token.startswith("vec[") and token.endswith("]"):
        body = token[4:-1].strip()
        try:
            vec = tuple(int(x) for x in body.split(",")) if body else ()
        except ValueError:
            raise SurfaceError(f"bad vector literal {token!r}") from None
        if len(vec) != surface.rank:
            raise SurfaceError(f"vector {token} has length {len(vec)}, surface rank is {surface.rank}")
        return CurveClass(token, vec)
    if len(token) >= 2 and token[0] in "ab" and token[1:].isdigit():
        idx = int(token[1:])
        seen = 0
        for ci, c in enumerate(surface.components):
            if idx <= seen + c.genus:
                getter = surface.a if token[0] == "a" else surface.b
                return CurveClass(token, getter(idx - seen, ci))
            seen += c.genus
        raise SurfaceError(f"curve {token} does not exist (total genus {seen})")
    raise SurfaceError(f"unresolvable curve {token!r}")


# surgery on surfaces -----------------------------------------------------


@dataclass
class HandleResult:
    surface: CombSurface
    transfer: IntMatrix
    new_labels: tuple[str, ...]
    new_generators: dict[str, Vector] = field(default_factory=dict)


def attach_one_handle(surface: CombSurface, label_a: str, label_b: str,
                      new_labels: Sequence[str] | None = None) -> HandleResult:
    """Attach an orientable 1-handle with feet on boundary circles label_a, label_b.

    * different components: they merge, the two circles fuse into one;
    * same component, different circles: the circles fuse, genus grows by one;
    * same circle (label_a == label_b): the circle splits in two.

    Euler characteristic always drops by one.  ``transfer`` is the matrix of
    the inclusion old page -> new page on H1 (old boundary classes are read
    as curves pushed slightly into the interior).
    """
    for l in (label_a, label_b):
        surface.component_of(l)
    ca, cb = surface.component_of(label_a), surface.component_of(label_b)
    comps = list(surface.components)

    if label_a == label_b:
        names = tuple(new_labels) if new_labels else (f"{label_a}'", f"{label_a}''")
        if len(names) != 2:
            raise SurfaceError("splitting a circle produces two labels")
        c = comps[ca]
        i = c.labels.index(label_a)
        comps[ca] = Component(c.genus, c.labels[:i] + names + c.labels[i + 1:])
        new = CombSurface(tuple(comps))
        images = {label_a: _add(new.boundary_class(names[0]), new.boundary_class(names[1]))}
        transfer = _transfer(surface, new, {ci: ci for ci in range(len(comps))}, images)
        return HandleResult(new, transfer, names)

    merged = (new_labels[0] if new_labels else f"{label_a}+{label_b}",)
    if ca != cb:
        c0, c1 = comps[ca], comps[cb]
        labels = tuple(l for l in c0.labels if l != label_a) + merged + \
            tuple(l for l in c1.labels if l != label_b)
        merged_comp = Component(c0.genus + c1.genus, labels)
        new_comps = []
        comp_map = {}
        for ci, c in enumerate(comps):
            if ci == cb:
                continue
            comp_map[ci] = len(new_comps)
            new_comps.append(merged_comp if ci == ca else c)
        comp_map[cb] = comp_map[ca]
        new = CombSurface(tuple(new_comps))
        images = {}
        for lab, comp in ((label_a, c0), (label_b, c1)):
            # pushed-in copy of the attaching circle cuts off the rest of its old component
            img = new.zero()
            for l in comp.labels:
                if l != lab:
                    img = _sub(img, new.boundary_class(l))
            images[lab] = img
        transfer = _transfer(surface, new, comp_map, images,
                             genus_shift={cb: c0.genus})
        return HandleResult(new, transfer, merged)

    c = comps[ca]
    labels = []
    for l in c.labels:
        if l == label_a:
            labels.append(merged[0])
        elif l != label_b:
            labels.append(l)
    comps[ca] = Component(c.genus + 1, tuple(labels))
    new = CombSurface(tuple(comps))
    a_new = new.a(c.genus + 1, ca)
    images = {label_a: a_new,
              label_b: _sub(new.boundary_class(merged[0]), a_new)}
    transfer = _transfer(surface, new, {ci: ci for ci in range(len(comps))}, images)
    b_new = new.b(c.genus + 1, ca)
    return HandleResult(new, transfer, merged, {"handle_a": a_new, "handle_b": b_new})


def _add(x, y) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def _sub(x, y) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def _transfer(old: CombSurface, new: CombSurface, comp_map: dict[int, int],
              images: dict[str, Vector], genus_shift: dict[int, int] | None = None) -> IntMatrix:
    """Assemble the H1 transfer matrix old -> new.

    a_i/b_i of old component ci go to a_{i+shift}/b_{i+shift} of new
    component comp_map[ci]; boundary classes follow ``images`` or keep
    their label.  Dependent (reference) classes are handled by linearity.
    """
    genus_shift = genus_shift or {}
    cols = []
    for ci, c in enumerate(old.components):
        nci = comp_map[ci]
        shift = genus_shift.get(ci, 0)
        for i in range(1, c.genus + 1):
            cols.append(new.a(i + shift, nci))
            cols.append(new.b(i + shift, nci))
        for l in c.labels[:-1]:
            cols.append(images[l] if l in images else new.boundary_class(l))
    m = IntMatrix.from_columns(cols, new.rank)
    # The reference label's class is dependent in the old basis; check that the
    # linear extension agrees with the requested image.
    for ci, c in enumerate(old.components):
        ref = c.reference_label
        want = images[ref] if ref in images else new.boundary_class(ref)
        got = m.apply(old.boundary_class(ref))
        if got != tuple(want):
            raise SurfaceError(f"inconsistent boundary transfer for {ref!r}")
    return m


def relabel(surface: CombSurface, mapping: dict[str, str]) -> CombSurface:
    comps = tuple(Component(c.genus, tuple(mapping.get(l, l) for l in c.labels))
                  for c in surface.components)
    return CombSurface(comps, surface.glue_curves)


def reorder_labels(surface: CombSurface, component: int, order: Sequence[str]) -> tuple[CombSurface, IntMatrix]:
    """Permute the labels of one component; returns the change-of-basis matrix."""
    c = surface.components[component]
    if sorted(order) != sorted(c.labels):
        raise SurfaceError("new order must be a permutation of the labels")
    comps = list(surface.components)
    comps[component] = Component(c.genus, tuple(order))
    new = CombSurface(tuple(comps))
    m = _transfer(surface, new, {ci: ci for ci in range(len(comps))}, {})
    glue = tuple((n, m.apply(v)) for n, v in surface.glue_curves)
    return CombSurface(tuple(comps), glue), m


def disjoint_union(surfaces: Sequence[CombSurface]) -> tuple[CombSurface, list[IntMatrix]]:
    """Disjoint union with the block inclusion matrices."""
    comps = tuple(c for s in surfaces for c in s.components)
    rank = sum(s.rank for s in surfaces)
    incs, pos = [], 0
    for s in surfaces:
        m = IntMatrix(rank, s.rank)
        for i in range(s.rank):
            m[pos + i, i] = 1
        incs.append(m)
        pos += s.rank
    glue = tuple((n, inc.apply(v)) for s, inc in zip(surfaces, incs) for n, v in s.glue_curves)
    return CombSurface(comps, glue), incs


# doubling along the boundary ----------------------------------------------


@dataclass
class ClosedSurface:
    """Closed oriented surface given by a lattice with an intersection form.

    The form is unimodular; ``genus`` is half the rank.
    """

    form: IntMatrix
    names: list[str]

    @property
    def rank(self) -> int:
        return self.form.rows

    @property
    def genus(self) -> int:
        return self.rank // 2

    @property
    def euler_characteristic(self) -> int:
        return 2 - self.rank

    def pairing(self, x: Sequence[int], y: Sequence[int]) -> int:
        return sum(x[i] * sum(self.form[i, j] * y[j] for j in range(self.rank))
                   for i in range(self.rank) if x[i])

    def transvection(self, c: Sequence[int], power: int, x: Sequence[int]) -> Vector:
        return _axpy(power * self.pairing(c, x), c, x)


@dataclass
class DoubleResult:
    closed: ClosedSurface
    map0: IntMatrix  # H1(S0) -> H1(F), with F containing S0 with reversed orientation
    map1: IntMatrix  # H1(S1) -> H1(F)
    crossing: list[Vector]  # one class per non-reference glued circle


def glue_double(s0: CombSurface, s1: CombSurface, matching: dict[str, str] | None = None) -> DoubleResult:
    """Closed surface (-S0) glued to S1 along matched boundary circles.

    Both surfaces must be connected with equal boundary counts; ``matching``
    maps labels of s0 to labels of s1 (default: by position).  Classes of
    S0 enter with the opposite orientation, so the restricted form is
    negated.  The result has genus g0 + g1 + b - 1.
    """
    if len(s0.components) != 1 or len(s1.components) != 1:
        raise SurfaceError("glue_double expects connected surfaces")
    if s0.boundary_count != s1.boundary_count:
        raise SurfaceError("boundary counts differ")
    if matching is None:
        matching = dict(zip(s0.labels, s1.labels))
    if sorted(matching) != sorted(s0.labels) or sorted(matching.values()) != sorted(s1.labels):
        raise SurfaceError("matching must be a bijection of boundary labels")
    c0, c1 = s0.components[0], s1.components[0]
    g1, b = c1.genus, c0.boundary_count
    n0 = s0.rank
    rank = n0 + 2 * g1 + (b - 1)
    names = [f"{n}^-" for n in s0.basis_names()] + [f"{n}^+" for n in s1.basis_names()[:2 * g1]] \
        + [f"x({l})" for l in c0.labels[:-1]]

    map0 = IntMatrix(rank, n0)
    for i in range(n0):
        map0[i, i] = 1
    inverse = {v: k for k, v in matching.items()}
    cols1 = []
    for i in range(2 * g1):
        v = [0] * rank
        v[n0 + i] = 1
        cols1.append(tuple(v))
    for l1 in c1.labels[:-1]:
        cols1.append(map0.apply(s0.boundary_class(inverse[l1])))
    map1 = IntMatrix.from_columns(cols1, rank)
    if map1.apply(s1.boundary_class(c1.reference_label)) != map0.apply(s0.boundary_class(inverse[c1.reference_label])):
        raise SurfaceError("boundary identification is inconsistent")

    crossing = []
    for j, l in enumerate(c0.labels[:-1]):
        v = [0] * rank
        v[n0 + 2 * g1 + j] = 1
        crossing.append(tuple(v))

    form = IntMatrix(rank, rank)
    j0 = s0.intersection_matrix()
    j1 = s1.intersection_matrix()
    for p in range(n0):
        for q in range(n0):
            form[p, q] = -j0[p, q]
    for p in range(2 * g1):
        for q in range(2 * g1):
            form[n0 + p, n0 + q] = j1[p, q]
    ref0 = c0.reference_label
    for j, l in enumerate(c0.labels[:-1]):
        xi = n0 + 2 * g1 + j
        # x_l = eta^0_l in -S0, followed by the reversed S1 arc from matching[l] to matching[ref0].
        row0 = s0.arc_pairing_row(l)
        row1 = _sub(s1.arc_pairing_row(matching[l]), s1.arc_pairing_row(matching[ref0]))
        for p in range(n0):
            form[xi, p] += -row0[p]
        for q in range(s1.rank):
            if q < 2 * g1:
                form[xi, n0 + q] += -row1[q]
    for p in range(rank):
        for q in range(rank):
            if p >= n0 + 2 * g1 and q < n0 + 2 * g1:
                form[q, p] = -form[p, q]
    closed = ClosedSurface(form, names)

    # Pairing of crossing classes with boundary circles must agree from both sides.
    for j, l in enumerate(c0.labels):
        for x_idx, lx in enumerate(c0.labels[:-1]):
            side1 = -(_dot(s1.arc_pairing_row(matching[lx]), s1.boundary_class(matching[l]))
                      - _dot(s1.arc_pairing_row(matching[ref0]), s1.boundary_class(matching[l])))
            side0 = -_dot(s0.arc_pairing_row(lx), s0.boundary_class(l))
            if side0 != side1:
                raise SurfaceError("crossing class pairings disagree across the glued circle")
            if closed.pairing(crossing[x_idx], map0.apply(s0.boundary_class(l))) != side0:
                raise SurfaceError("assembled form is inconsistent")
    det = form.determinant()
    if abs(det) != 1:
        raise SurfaceError(f"glued form is not unimodular (det {det})")
    return DoubleResult(closed, map0, map1, crossing)


def _dot(x, y) -> int:
    return sum(a * b for a, b in zip(x, y))
