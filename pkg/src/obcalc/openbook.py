"""Abstract open books and the homology of the manifolds they determine.

A concrete book (dimension 3) is a page surface plus a twist word.  The
closed manifold is the mapping torus of the monodromy with one solid torus
glued along each binding circle, the meridian of the solid torus being the
boundary section {point} x S^1 of the mapping torus.

H1 presentation used below, per connected page component:

    generators  H1(page) + Z<t>
    relations   (phi_* - id)(x)       for every basis class x
                t + delta_l           for every boundary label l

where delta_l = [gamma_l - phi(gamma_l)] for the standard arc gamma_l from
the reference marked point to l (so delta is zero on the reference label).

>>> from obcalc.surface import CombSurface, TwistWord, resolve_curve
>>> ann = CombSurface.annulus()
>>> str(manifold_h1(OpenBook3(ann, TwistWord.of((resolve_curve(ann, "core"), 5)))))
'Z/5'
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from .surface import (
    ArcClass,
    CombSurface,
    SurfaceError,
    TwistWord,
    glue_double,
    twist_action_arc,
    word_matrix,
)
from .zmodule import AbelianGroup, IntMatrix, cokernel_of_columns


class OpenBookError(ValueError):
    pass


@dataclass(frozen=True)
class OpenBook3:
    page: CombSurface
    monodromy: TwistWord = field(default_factory=TwistWord)
    name: str = ""

    def __post_init__(self):
        if self.page.boundary_count < 1:
            raise OpenBookError("page needs at least one boundary circle")
        try:
            self.monodromy.check_on(self.page)
        except SurfaceError as exc:
            raise OpenBookError(str(exc)) from None

    @property
    def binding_labels(self) -> tuple[str, ...]:
        return self.page.labels

    @property
    def euler_characteristic(self) -> int:
        return self.page.euler_characteristic


def monodromy_matrix(ob: OpenBook3) -> IntMatrix:
    return word_matrix(ob.page, ob.monodromy)


SectionDefects = dict[str, tuple[int, ...]]


def section_defects(ob: OpenBook3, arc_offsets: dict[str, Sequence[int]] | None = None) -> SectionDefects:
    """delta_l for every binding label.

    ``arc_offsets`` optionally replaces the standard arc to l by the arc
    plus a closed class; the resulting H1 does not change.
    """
    arc_offsets = arc_offsets or {}
    page = ob.page
    out: SectionDefects = {}
    for comp in page.components:
        ref = comp.reference_label
        out[ref] = page.zero()
        for label in comp.labels[:-1]:
            offset = tuple(arc_offsets.get(label, page.zero()))
            gamma = ArcClass(ref, label, offset)
            image = twist_action_arc(page, ob.monodromy, gamma)
            out[label] = tuple(a - b for a, b in zip(gamma.closed, image.closed))
    return out


def h1_relations(ob: OpenBook3, arc_offsets=None) -> tuple[list[tuple[int, ...]], int]:
    """Relation columns and generator count of the H1 presentation."""
    page = ob.page
    n = page.rank
    ncomp = len(page.components)
    size = n + ncomp
    mat = monodromy_matrix(ob)
    cols = []
    for i in range(n):
        col = list(mat.column(i))
        col[i] -= 1
        cols.append(tuple(col) + (0,) * ncomp)
    defects = section_defects(ob, arc_offsets)
    for ci, comp in enumerate(page.components):
        for label in comp.labels:
            t = [0] * ncomp
            t[ci] = 1
            cols.append(tuple(defects[label]) + tuple(t))
    return cols, size


def manifold_h1(ob: OpenBook3, arc_offsets=None) -> AbelianGroup:
    if isinstance(ob, SymbolicOpenBook):
        raise OpenBookError("H1 unavailable for symbolic books")
    cols, size = h1_relations(ob, arc_offsets)
    return cokernel_of_columns(cols, size)


def manifold_h_star(ob: OpenBook3) -> tuple[AbelianGroup, AbelianGroup, AbelianGroup, AbelianGroup]:
    """(H0, H1, H2, H3) of the closed manifold.

    A disconnected page gives a disconnected manifold; each summand is then
    the direct sum over components.
    """
    h1 = manifold_h1(ob)
    k = len(ob.page.components)
    return AbelianGroup(k), h1, AbelianGroup(h1.free_rank), AbelianGroup(k)


def conjugate(ob: OpenBook3, by: TwistWord) -> OpenBook3:
    return OpenBook3(ob.page, by * ob.monodromy * by.inverse(), ob.name)


def fibration_oracle_h1(ob0: OpenBook3, ob1: OpenBook3, matching: dict[str, str] | None = None) -> AbelianGroup:
    """H1 of the manifold fibred over the circle with fibre (-S0) glued to S1.

    This is the complement of the bindings of both books glued along all
    binding tori with the page framing.  Reversing the normal circle turns
    the first mapping torus into that of phi0^-1 on -S0; with respect to the
    orientation of the glued fibre its letters therefore act in reverse
    order with unchanged exponents.
    """
    for ob in (ob0, ob1):
        if len(ob.page.components) != 1:
            raise OpenBookError("the fibration oracle expects connected pages")
    if ob0.page.boundary_count != ob1.page.boundary_count:
        raise OpenBookError("binding counts differ")
    d = glue_double(ob0.page, ob1.page, matching)
    closed = d.closed
    letters = [(d.map0.apply(t.curve.vector), t.power) for t in ob0.monodromy.letters]
    letters += [(d.map1.apply(t.curve.vector), t.power) for t in reversed(ob1.monodromy.letters)]
    # letters are now listed in the order they act
    cols = []
    for i in range(closed.rank):
        v = tuple(1 if j == i else 0 for j in range(closed.rank))
        for c, k in letters:
            v = closed.transvection(c, k, v)
        cols.append(tuple(x - (1 if j == i else 0) for j, x in enumerate(v)))
    return AbelianGroup(1) + cokernel_of_columns(cols, closed.rank)


# symbolic books ------------------------------------------------------------

_SUP = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


def normalize_name(name: str) -> str:
    """Canonical spelling of a manifold descriptor.

    >>> normalize_name("S^3 x S^1")
    'S³×S¹'
    >>> normalize_name("D3")
    'D³'
    """
    s = name.strip()
    s = re.sub(r"\^\{?(-?\d+)\}?", lambda m: m.group(1).translate(_SUP), s)
    s = re.sub(r"\b([SDTB])(\d+)\b", lambda m: m.group(1) + m.group(2).translate(_SUP), s)
    s = re.sub(r"\s*(?:\bx\b|\*|×)\s*", "×", s)
    return s


def sphere(k: int) -> str:
    return f"S{str(k).translate(_SUP)}"


def disc(k: int) -> str:
    return f"D{str(k).translate(_SUP)}"


@dataclass(frozen=True)
class Descriptor:
    name: str
    chi: int
    betti: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "name", normalize_name(self.name))


@dataclass(frozen=True)
class SymbolicOpenBook:
    """Open book of dimension n known only through descriptors.

    ``binding_page`` describes the page of the binding's own open book
    (the Sigma' of a binding sum); None when unknown.  ``label`` names the binding so sum
    directives can address it.
    """

    dim: int
    page: Descriptor
    binding: str
    binding_page: Descriptor | None
    manifold: str = ""
    monodromy: str = "id"
    tags: tuple[str, ...] = ("identity",)
    name: str = ""
    label: str = "B"

    def __post_init__(self):
        if self.dim < 3:
            raise OpenBookError("symbolic books need dimension >= 3")
        object.__setattr__(self, "binding", normalize_name(self.binding))
        object.__setattr__(self, "manifold", normalize_name(self.manifold))
        object.__setattr__(self, "tags", tuple(self.tags))

    @property
    def euler_characteristic(self) -> int:
        return self.page.chi


def standard_sphere_book(n: int, name: str = "") -> SymbolicOpenBook:
    """S^n with page D^{n-1}, binding S^{n-2} and trivial monodromy."""
    return SymbolicOpenBook(
        dim=n,
        page=Descriptor(disc(n - 1), 1),
        binding=sphere(n - 2),
        binding_page=Descriptor(disc(n - 3), 1),
        manifold=sphere(n),
        name=name,
    )
