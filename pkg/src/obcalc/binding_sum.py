"""Binding sums of open books.

In dimension 3 the two summed binding circles stay in the binding (as
push-offs) and the page changes by two 1-handles: the first joins the two
circles, the second splits the merged circle again.  Topologically the new
page is the page with a small disc removed next to each of the two circles
and the two holes glued; the identification circle is the glue circle.

The monodromy is the old one, transferred to the new page, followed by

    W = T(d l0)^s T(d l1)^s T(o0)^(-s) T(o1)^(-s) T(glue)^(-2s)

with s the calibrated sign below.  The first four letters come from the
burn twisting the collar of each summed circle forward inside the removed
point and back outside it: d l is the curve between the binding and the
hole, o is the curve enclosing both (the old boundary-parallel curve).
The glue twists come from the twist map around each removed point.  All
curves are disjoint, so W commutes with the transferred word.  An outer
curve that is nullhomologous (it bounds a disc when that page component is
a disc) is left out of W and recorded in the certificate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .openbook import (
    Descriptor,
    OpenBook3,
    SymbolicOpenBook,
    disc,
    fibration_oracle_h1,
    manifold_h1,
    section_defects,
    sphere,
)
from .surface import (
    CombSurface,
    CurveClass,
    TwistWord,
    attach_one_handle,
    disjoint_union,
    relabel,
    reorder_labels,
    word_matrix,
)
from .zmodule import AbelianGroup, IntMatrix

# Checked by calibrate_signs(); see its docstring for why +1.
SIGN = 1



def _dropped_note(labels: Sequence[str]) -> str:
    if not labels:
        return "none"
    return ("negative outer twist omitted at " + ", ".join(labels)
            + " (curve is nullhomologous in the new page)")


class BindingSumError(ValueError):
    pass


@dataclass(frozen=True)
class SumSite:
    label0: str
    label1: str

    def check(self, page: CombSurface) -> None:
        if self.label0 == self.label1:
            raise BindingSumError("a binding sum needs two distinct binding labels")
        for label in (self.label0, self.label1):
            if label not in page.labels:
                raise BindingSumError(f"unknown binding label {label!r}")


@dataclass
class HandleRecord:
    name: str
    feet: tuple[str, str]
    kind: str  # "join" or "split"
    chi_before: int
    chi_after: int


@dataclass
class SumCertificate:
    glue_label: str
    handles: list[HandleRecord]
    appended_word: TwistWord
    chi_before: int
    chi_after: int
    sign: int
    boundary_before: int
    boundary_after: int
    dropped: str = "none"
    binding_page_chi: int = 1

    def check(self) -> None:
        if self.chi_after != self.chi_before - 2 * self.binding_page_chi:
            raise BindingSumError("Euler characteristic bookkeeping failed")
        if self.boundary_after != self.boundary_before:
            raise BindingSumError("binding count changed in a 3-dimensional sum")

    def to_dict(self) -> dict:
        return {
            "glue_label": self.glue_label,
            "handles": [
                {"name": h.name, "feet": list(h.feet), "kind": h.kind,
                 "chi_before": h.chi_before, "chi_after": h.chi_after}
                for h in self.handles
            ],
            "appended_word": [
                {"curve": t.curve.name, "vector": list(t.curve.vector), "power": t.power}
                for t in self.appended_word.letters
            ],
            "chi_before": self.chi_before,
            "chi_after": self.chi_after,
            "boundary_before": self.boundary_before,
            "boundary_after": self.boundary_after,
            "sign": self.sign,
            "dropped": self.dropped,
        }


def _natural_order(old: CombSurface, labels: Sequence[str]) -> list[str]:
    rank = {l: i for i, l in enumerate(old.labels)}
    return sorted(labels, key=lambda l: rank[l])


def binding_sum_3d(ob: OpenBook3, site: SumSite, glue_label: str | None = None,
                   sign: int | None = None) -> tuple[OpenBook3, SumCertificate]:
    """Sum two binding circles of one (possibly disconnected) open book."""
    s = SIGN if sign is None else sign
    if s not in (1, -1):
        raise BindingSumError("sign must be +1 or -1")
    page = ob.page
    site.check(page)
    l0, l1 = site.label0, site.label1
    glue_label = glue_label or f"{l0}#{l1}"
    if glue_label in page.glue_dict():
        raise BindingSumError(f"glue label {glue_label!r} already used")
    merged = f"({l0}|{l1})"

    first = attach_one_handle(page, l0, l1, [merged])
    second = attach_one_handle(first.surface, merged, merged, [l0, l1])
    new = second.surface
    transfer = second.transfer @ first.transfer

    ci = new.component_of(l0)
    new, reorder = reorder_labels(new, ci, _natural_order(page, new.components[ci].labels))
    transfer = reorder @ transfer

    glue_vec = tuple(a - b for a, b in zip(transfer.apply(page.boundary_class(l0)),
                                           new.boundary_class(l0)))
    glue = tuple((n, transfer.apply(v)) for n, v in page.glue_curves) + ((glue_label, glue_vec),)
    new = CombSurface(new.components, glue)
    new.check_invariants()

    letters = [(CurveClass(f"d({l0})", new.boundary_class(l0)), s),
               (CurveClass(f"d({l1})", new.boundary_class(l1)), s)]
    dropped = []
    for label in (l0, l1):
        outer = CurveClass(f"outer({label})", transfer.apply(page.boundary_class(label)))
        if outer.is_zero:
            dropped.append(label)
        else:
            letters.append((outer, -s))
    letters.append((CurveClass(f"glue({glue_label})", glue_vec), -2 * s))
    w = TwistWord.of(*letters)
    word = ob.monodromy.transferred(transfer) * w

    cert = SumCertificate(
        glue_label=glue_label,
        handles=[
            HandleRecord("H1", (l0, l1), "join", page.euler_characteristic,
                         first.surface.euler_characteristic),
            HandleRecord("H2", (merged, merged), "split", first.surface.euler_characteristic,
                         new.euler_characteristic),
        ],
        appended_word=w,
        chi_before=page.euler_characteristic,
        chi_after=new.euler_characteristic,
        sign=s,
        boundary_before=page.boundary_count,
        boundary_after=new.boundary_count,
        dropped=_dropped_note(dropped),
    )
    cert.check()
    return OpenBook3(new, word, ob.name), cert


def union(books: Sequence[OpenBook3], names: Sequence[str] | None = None) -> OpenBook3:
    """Disjoint union; labels become '<name>.<label>' when names are given."""
    pages = []
    for i, ob in enumerate(books):
        p = ob.page
        if names is not None:
            p = relabel(p, {l: f"{names[i]}.{l}" for l in p.labels})
        pages.append(p)
    page, incs = disjoint_union(pages)
    word = TwistWord()
    for ob, inc in zip(books, incs):
        word = word * ob.monodromy.transferred(inc)
    return OpenBook3(page, word, "+".join(names) if names else "")


def sum_all_bindings(ob0: OpenBook3, ob1: OpenBook3, matching: dict[str, str] | None = None,
                     sign: int | None = None) -> tuple[OpenBook3, list[SumCertificate]]:
    """Sum every binding circle of ob0 with its partner in ob1, one at a time."""
    if ob0.page.boundary_count != ob1.page.boundary_count:
        raise BindingSumError("binding counts differ")
    if matching is None:
        matching = dict(zip(ob0.page.labels, ob1.page.labels))
    book = union([ob0, ob1], ["L", "R"])
    certs = []
    for a, b in matching.items():
        book, cert = binding_sum_3d(book, SumSite(f"L.{a}", f"R.{b}"), sign=sign)
        certs.append(cert)
    return book, certs


def acts_trivially(page: CombSurface, word: TwistWord) -> bool:
    """Word is the identity on H1 and on the section defects of every arc."""
    if word_matrix(page, word) != IntMatrix.identity(page.rank):
        return False
    defects = section_defects(OpenBook3(page, word))
    return all(not any(v) for v in defects.values())


@dataclass
class Calibration:
    sign: int
    consistent: list[int]
    log: list[str] = field(default_factory=list)


def calibrate_signs() -> Calibration:
    """Check the global sign s of the appended word W against the anchors.

    Anchors: two (disc, id) must sum to an annulus with trivially acting
    monodromy and H1 = Z; two (annulus, id) summed along both pairs must
    match the fibration oracle (Z^3); a small family of twisted annuli must
    match the oracle too.

    Both signs pass every anchor: reversing s replaces W by its inverse,
    which H1 cannot see.  The build constant SIGN = +1 follows the
    geometric reading that the burn twists the collar between binding and
    push-off positively (right-handed).  This raises if SIGN stops being
    consistent, which signals a transvection or arc convention bug.
    """
    disc_book = OpenBook3(CombSurface.disc())
    ann = CombSurface.annulus()
    core = CurveClass("core", ann.boundary_class("1"))
    family = [
        (OpenBook3(ann), OpenBook3(ann)),
        (OpenBook3(ann, TwistWord.of((core, 1))), OpenBook3(ann)),
        (OpenBook3(ann, TwistWord.of((core, 2))), OpenBook3(ann, TwistWord.of((core, 3)))),
        (OpenBook3(ann, TwistWord.of((core, -1))), OpenBook3(ann, TwistWord.of((core, 4)))),
    ]
    log, good = [], []
    for s in (1, -1):
        ok = True
        book, _ = sum_all_bindings(disc_book, disc_book, sign=s)
        h1 = manifold_h1(book)
        anchor = (book.page.components[0].genus == 0 and book.page.boundary_count == 2
                  and acts_trivially(book.page, book.monodromy) and h1 == AbelianGroup(1))
        log.append(f"s={s:+d} disc+disc: page genus {book.page.components[0].genus}, "
                   f"b={book.page.boundary_count}, H1={h1}, {'ok' if anchor else 'FAIL'}")
        ok &= anchor
        for a, b in family:
            got = manifold_h1(sum_all_bindings(a, b, sign=s)[0])
            want = fibration_oracle_h1(a, b)
            log.append(f"s={s:+d} {_brief(a)} + {_brief(b)}: sum {got}, oracle {want}, "
                       f"{'ok' if got == want else 'FAIL'}")
            ok &= got == want
        if ok:
            good.append(s)
    if SIGN not in good:
        raise BindingSumError(f"sign {SIGN:+d} is not consistent:\n" + "\n".join(log))
    return Calibration(SIGN, good, log)


def _brief(ob: OpenBook3) -> str:
    word = " ".join(f"{t.curve.name}^{t.power}" for t in ob.monodromy.letters) or "id"
    c = ob.page.components[0]
    return f"(g{c.genus}b{c.boundary_count}, {word})"


# symbolic sums ----------------------------------------------------------------


def _standard_sphere_dim(ob: SymbolicOpenBook) -> int | None:
    n = ob.dim
    if (ob.manifold == sphere(n) and ob.page.name == disc(n - 1) and ob.binding == sphere(n - 2)
            and ob.binding_page is not None and ob.binding_page.name == disc(n - 3)
            and "identity" in ob.tags):
        return n
    return None


_KNOWN_PAGES = {3: "annulus", 4: "S¹×D²"}
_KNOWN_BINDINGS = {3: "S¹ ⊔ S¹"}


def binding_sum_symbolic(ob0: SymbolicOpenBook, ob1: SymbolicOpenBook,
                         name: str = "") -> SymbolicOpenBook:
    """Binding sum of two symbolic books along their bindings.

    Only Euler characteristics are computed in general; names are filled in
    for sums of standard sphere books and left generic otherwise.
    """
    if ob0.dim != ob1.dim:
        raise BindingSumError("dimensions differ")
    if ob0.binding_page is None or ob1.binding_page is None:
        raise BindingSumError("the page of a summed binding must be known")
    if ob0.binding != ob1.binding or ob0.binding_page != ob1.binding_page:
        raise BindingSumError(
            f"binding descriptors differ: {ob0.binding} / {ob1.binding}")
    n = ob0.dim
    chi = ob0.page.chi + ob1.page.chi - 2 * ob0.binding_page.chi
    known = _standard_sphere_dim(ob0) == n and _standard_sphere_dim(ob1) == n
    if known:
        page_name = _KNOWN_PAGES.get(n, f"{disc(n - 2)}×S¹")
        binding = _KNOWN_BINDINGS.get(n, f"{sphere(n - 3)}×S¹")
        manifold = f"{sphere(n - 1)}×S¹"
        tags: tuple[str, ...] = ("identity",)
        monodromy = "isotopic to id"
    else:
        page_name = f"({ob0.page.name})#_B({ob1.page.name})"
        binding = f"({ob0.binding})#_B'({ob1.binding})"
        manifold = f"({ob0.manifold or '?'})#_B({ob1.manifold or '?'})"
        tags = ("composed-with psi*D",)
        monodromy = f"({ob0.monodromy}) u ({ob1.monodromy}), psi o D over handle region"
    return SymbolicOpenBook(
        dim=n,
        page=Descriptor(page_name, chi),
        binding=binding,
        binding_page=None,
        manifold=manifold,
        monodromy=monodromy,
        tags=tags,
        name=name or f"{ob0.name}#{ob1.name}",
        label=ob0.label,
    )
