"""Command line front end: ``obcalc <command> FILE``.

Exit status is 0 when every verification passes and no oracle comparison
mismatches, 1 otherwise, and 2 for unreadable or invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import __version__
from .binding_sum import (
    BindingSumError,
    SumCertificate,
    SumSite,
    binding_sum_3d,
    binding_sum_symbolic,
    union,
)
from .contact_verify import (
    DEFAULT_TOL,
    GridTooCoarse,
    ProfileError,
    PositivityReport,
    PushOffProfile,
    default_lutz_pair,
    verify_f1_nontangent,
    verify_framing_homotopy,
    verify_pushoff_contact,
)
from .docparse import BookDecl, DocError, OpenBookDoc, SymbolicDecl, VerifyDecl, format_book, format_symbolic, parse
from .openbook import (
    Descriptor,
    OpenBook3,
    OpenBookError,
    SymbolicOpenBook,
    fibration_oracle_h1,
    manifold_h1,
    manifold_h_star,
)
from .surface import CombSurface, CurveClass, SurfaceError, TwistWord, relabel, resolve_curve

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


# building objects from declarations --------------------------------------------


def build_book(decl: BookDecl) -> OpenBook3:
    try:
        page = CombSurface.standard(decl.genus, decl.boundary, decl.labels)
        page = CombSurface(page.components, decl.glue)
        letters = [(resolve_curve(page, c), k) for c, k in decl.word]
    except SurfaceError as exc:
        raise DocError(f"in open book {decl.name!r}: {exc}", decl.line, 1) from None
    return OpenBook3(page, TwistWord.of(*letters), decl.name)


def build_symbolic(decl: SymbolicDecl) -> SymbolicOpenBook:
    try:
        return SymbolicOpenBook(
            dim=decl.dim,
            page=Descriptor(decl.page, decl.page_chi),
            binding=decl.binding,
            binding_page=Descriptor(decl.binding_page, decl.binding_chi_page),
            manifold=decl.manifold,
            monodromy=decl.monodromy,
            tags=("identity",) if decl.monodromy in ("id", "identity", "") else ("annotated",),
            name=decl.name,
        )
    except OpenBookError as exc:
        raise DocError(f"in symbolic book {decl.name!r}: {exc}", decl.line, 1) from None


def _curve_token(page: CombSurface, curve: CurveClass) -> str:
    candidates = [curve.name] + [f"d({l})" for l in page.labels] + [f"glue({g})" for g in page.glue_dict()]
    for name in candidates:
        try:
            if resolve_curve(page, name).vector == curve.vector:
                return name
        except SurfaceError:
            pass
    return "vec[" + ",".join(str(x) for x in curve.vector) + "]"


def book_to_decl(ob: OpenBook3, name: str) -> BookDecl:
    """Printable declaration of a connected concrete book."""
    if len(ob.page.components) != 1:
        raise DocError(f"book {name!r} has a disconnected page and cannot be printed")
    comp = ob.page.components[0]
    word = tuple((_curve_token(ob.page, t.curve), t.power) for t in ob.monodromy.letters)
    return BookDecl(name, comp.genus, comp.boundary_count, comp.labels, word, ob.page.glue_curves)


def symbolic_to_decl(ob: SymbolicOpenBook, name: str) -> SymbolicDecl:
    bp = ob.binding_page
    return SymbolicDecl(name=name, dim=ob.dim, page_chi=ob.page.chi, page=ob.page.name,
                        binding_chi_page=bp.chi if bp else 0, binding=ob.binding,
                        binding_page=bp.name if bp else "", manifold=ob.manifold,
                        monodromy=ob.monodromy)


# session: sums and their bookkeeping ------------------------------------------------


@dataclass
class SumOutcome:
    text: str
    key: str
    book: object
    certificate: SumCertificate | None = None
    chi_before: int = 0
    chi_after: int = 0


@dataclass
class Session:
    doc: OpenBookDoc
    env: dict = field(default_factory=dict)
    alias: dict = field(default_factory=dict)
    qualified: set = field(default_factory=set)
    origins: dict = field(default_factory=dict)
    pairs: dict = field(default_factory=dict)
    outcomes: list[SumOutcome] = field(default_factory=list)

    @classmethod
    def from_doc(cls, doc: OpenBookDoc) -> Session:
        s = cls(doc)
        for decl in doc.books:
            s.env[decl.name] = build_book(decl) if isinstance(decl, BookDecl) else build_symbolic(decl)
            s.alias[decl.name] = decl.name
            s.origins[decl.name] = {decl.name}
            s.pairs[decl.name] = []
        return s

    def _qualify(self, key: str, book: str, label: str) -> str:
        if key in self.qualified:
            return self._label(book, label, key)
        return f"{key}.{label}"

    def _qualified_book(self, key: str) -> OpenBook3:
        ob = self.env[key]
        if key in self.qualified:
            return ob
        return OpenBook3(relabel(ob.page, {l: f"{key}.{l}" for l in ob.page.labels}), ob.monodromy)

    def _label(self, book: str, label: str, key: str) -> str:
        ob = self.env[key]
        if key in self.qualified:
            q = f"{book}.{label}"
            if q in ob.page.labels:
                return q
        return label

    def run_sums(self) -> list[SumOutcome]:
        for sd in self.doc.sums:
            self.outcomes.append(self._run_one(sd))
        return self.outcomes

    def _run_one(self, sd) -> SumOutcome:
        (na, la), (nb, lb) = sd.left, sd.right
        for n in (na, nb):
            if n not in self.alias:
                raise DocError(f"unresolved book {n!r}", sd.line, 1)
        ka, kb = self.alias[na], self.alias[nb]
        A, B = self.env[ka], self.env[kb]
        text = f"sum {na}.{la} {nb}.{lb}"
        if isinstance(A, SymbolicOpenBook) != isinstance(B, SymbolicOpenBook):
            raise DocError("cannot sum a symbolic book with a concrete one", sd.line, 1)
        if isinstance(A, SymbolicOpenBook):
            if ka == kb:
                raise DocError("a symbolic sum needs two different books", sd.line, 1)
            for ob, lab in ((A, la), (B, lb)):
                if lab != ob.label:
                    raise DocError(f"symbolic book {ob.name!r} has binding label {ob.label!r}", sd.line, 1)
            key = sd.result or f"{ka}#{kb}"
            try:
                res = binding_sum_symbolic(A, B, name=key)
            except BindingSumError as exc:
                raise DocError(str(exc), sd.line, 1) from None
            self._replace(ka, kb, key, res)
            return SumOutcome(text, key, res, None, A.page.chi + B.page.chi, res.page.chi)
        qa, qb = self._qualify(ka, na, la), self._qualify(kb, nb, lb)
        if ka != kb:
            merged = union([self._qualified_book(ka), self._qualified_book(kb)])
            key = sd.result or f"{ka}+{kb}"
        else:
            merged = self._qualified_book(ka)
            key = sd.result or ka
        try:
            new, cert = binding_sum_3d(merged, SumSite(qa, qb))
        except (BindingSumError, SurfaceError) as exc:
            raise DocError(str(exc), sd.line, 1) from None
        new = OpenBook3(new.page, new.monodromy, key)
        pairs = self.pairs.get(ka, []) + (self.pairs.get(kb, []) if kb != ka else [])
        pairs.append(((na, la), (nb, lb)))
        origins = self.origins[ka] | self.origins[kb]
        self._replace(ka, kb, key, new)
        self.qualified.add(key)
        self.pairs[key] = pairs
        self.origins[key] = origins
        return SumOutcome(text, key, new, cert, cert.chi_before, cert.chi_after)

    def _replace(self, ka: str, kb: str, key: str, book) -> None:
        for k in {ka, kb}:
            self.env.pop(k, None)
        if key in self.env or (key in self.alias and self.alias[key] not in (ka, kb)):
            raise DocError(f"result name {key!r} is already in use")
        self.env[key] = book
        for n, k in list(self.alias.items()):
            if k in (ka, kb):
                self.alias[n] = key
        self.alias[key] = key
        self.origins.setdefault(key, self.origins.get(ka, set()) | self.origins.get(kb, set()))


# reports ------------------------------------------------------------------------------


def describe_book(name: str, ob) -> dict:
    if isinstance(ob, SymbolicOpenBook):
        return {
            "name": name, "kind": "symbolic", "dim": ob.dim,
            "page": ob.page.name, "chi": ob.page.chi,
            "binding": ob.binding,
            "binding_page_chi": ob.binding_page.chi if ob.binding_page else None,
            "manifold": ob.manifold or None,
            "monodromy": ob.monodromy,
            "homology": None,
            "note": "H1 unavailable for symbolic books",
        }
    comps = ob.page.components
    h = manifold_h_star(ob)
    return {
        "name": name, "kind": "concrete", "dim": 3,
        "genus": [c.genus for c in comps], "boundary": [c.boundary_count for c in comps],
        "labels": list(ob.page.labels), "chi": ob.page.euler_characteristic,
        "homology": {f"H{i}": str(g) for i, g in enumerate(h)},
    }


def _text_book(d: dict) -> str:
    lines = [f"book {d['name']}"]
    if d["kind"] == "symbolic":
        lines += [f"  kind: symbolic, dim {d['dim']}",
                  f"  page: {d['page']} (chi {d['chi']})",
                  f"  binding: {d['binding']}" + (f" (page chi {d['binding_page_chi']})"
                                                  if d["binding_page_chi"] is not None else ""),
                  f"  manifold: {d['manifold'] or 'unnamed'}",
                  f"  monodromy: {d['monodromy']}",
                  f"  {d['note']}"]
        return "\n".join(lines)
    g = ",".join(map(str, d["genus"]))
    b = ",".join(map(str, d["boundary"]))
    lines += ["  kind: concrete, dim 3",
              f"  page: genus {g}, boundary {b}, labels {' '.join(d['labels'])}",
              f"  chi: {d['chi']}"]
    lines += [f"  {k}: {v}" for k, v in d["homology"].items()]
    return "\n".join(lines)


def cmd_invariants(doc: OpenBookDoc, args) -> tuple[int, str, object]:
    session = Session.from_doc(doc)
    entries = [describe_book(decl.name, session.env[decl.name]) for decl in doc.books]
    session.run_sums()
    for out in session.outcomes:
        d = describe_book(out.key, out.book)
        d["from"] = out.text
        entries.append(d)
    text = "\n".join(_text_book(d) + (f"\n  from: {d['from']}" if "from" in d else "") for d in entries)
    return EXIT_OK, text, {"books": entries}


def _cert_text(cert: SumCertificate) -> list[str]:
    lines = ["  certificate:", f"    glue label: {cert.glue_label}"]
    for h in cert.handles:
        feet = h.feet[0] if h.feet[0] == h.feet[1] else ", ".join(h.feet)
        lines.append(f"    handle {h.name}: {h.kind} {feet} (chi {h.chi_before} -> {h.chi_after})")
    word = " ".join(f"T({t.curve.name})^{t.power}" for t in cert.appended_word.letters)
    lines += [f"    appended word: {word}",
              f"    chi: {cert.chi_before} -> {cert.chi_after}",
              f"    boundary: {cert.boundary_before} -> {cert.boundary_after}",
              f"    sign: {cert.sign:+d}",
              f"    dropped: {cert.dropped}"]
    return lines


def cmd_sum(doc: OpenBookDoc, args) -> tuple[int, str, object]:
    if not doc.sums:
        raise DocError("document has no sum statements")
    session = Session.from_doc(doc)
    session.run_sums()
    lines, records = [], []
    for out in session.outcomes:
        lines.append(f"{out.text} -> {out.key}")
        rec = {"statement": out.text, "result": out.key}
        if out.certificate is not None:
            lines += _cert_text(out.certificate)
            rec["certificate"] = out.certificate.to_dict()
        else:
            lines.append(f"  chi: {out.chi_before} -> {out.chi_after}")
            rec["chi_before"], rec["chi_after"] = out.chi_before, out.chi_after
        records.append(rec)
    finals = []
    for key, ob in session.env.items():
        if key not in {o.key for o in session.outcomes}:
            continue
        if isinstance(ob, SymbolicOpenBook):
            finals.append(format_symbolic(symbolic_to_decl(ob, key)))
        else:
            finals.append(format_book(book_to_decl(ob, key)))
    text = "\n".join(lines) + "\n" + "\n".join(finals)
    return EXIT_OK, text, {"sums": records, "results": finals}


def _oracle_pairs(doc: OpenBookDoc, session: Session):
    """(A, B, matching, summed book or None) for every oracle comparison to make."""
    concrete = [d for d in doc.books if isinstance(d, BookDecl)]
    if not doc.sums:
        for i in range(0, len(concrete) - 1, 2):
            a, b = concrete[i], concrete[i + 1]
            if a.boundary == b.boundary:
                yield a.name, b.name, dict(zip(a.labels, b.labels)), None
        return
    for key, ob in session.env.items():
        origins = session.origins.get(key, set())
        pairs = session.pairs.get(key, [])
        if len(origins) != 2 or not pairs or isinstance(ob, SymbolicOpenBook):
            continue
        a, b = sorted(origins, key=lambda n: [d.name for d in concrete].index(n))
        matching = {}
        ok = True
        for (n0, l0), (n1, l1) in pairs:
            if n0 == b and n1 == a:
                (n0, l0), (n1, l1) = (n1, l1), (n0, l0)
            if (n0, n1) != (a, b) or l0 in matching:
                ok = False
                break
            matching[l0] = l1
        A, B = doc.book(a), doc.book(b)
        if ok and sorted(matching) == sorted(A.labels) and sorted(matching.values()) == sorted(B.labels):
            yield a, b, matching, ob
        else:
            yield a, b, None, ob


def cmd_oracle_compare(doc: OpenBookDoc, args) -> tuple[int, str, object]:
    session = Session.from_doc(doc)
    session.run_sums()
    lines, records, status = [], [], EXIT_OK
    found = False
    for a, b, matching, summed in _oracle_pairs(doc, session):
        found = True
        A, B = build_book(doc.book(a)), build_book(doc.book(b))
        if matching is None:
            lines.append(f"compare {a} {b}: partial binding sum, oracle not applicable")
            records.append({"books": [a, b], "status": "N/A"})
            continue
        if summed is None:
            from .binding_sum import sum_all_bindings
            summed, _ = sum_all_bindings(A, B, matching)
        h_sum = manifold_h1(summed)
        h_fib = fibration_oracle_h1(A, B, matching)
        verdict = "MATCH" if h_sum == h_fib else "MISMATCH"
        if verdict == "MISMATCH":
            status = EXIT_FAIL
        lines += [f"compare {a} {b} matching {' '.join(f'{k}:{v}' for k, v in matching.items())}",
                  f"  binding sum H1: {h_sum}",
                  f"  fibration H1: {h_fib}",
                  f"  {verdict}"]
        records.append({"books": [a, b], "matching": matching, "binding_sum": str(h_sum),
                        "fibration": str(h_fib), "status": verdict})
    if not found:
        raise DocError("no pair of concrete open books to compare")
    return status, "\n".join(lines), {"comparisons": records}


_PROFILE_KEYS = ("eps1", "eps2", "eps3", "c", "r_max", "eps_u")


def run_verify(v: VerifyDecl, grid: int | None, tol: float | None) -> PositivityReport:
    params = dict(v.params)
    prof_kw = {k: float(params.pop(k)) for k in _PROFILE_KEYS if k in params}
    prof = PushOffProfile(**prof_kw)
    t = float(params.pop("tol", DEFAULT_TOL)) if tol is None else tol
    if v.kind == "contact":
        n = int(params.pop("n", 2))
        g = int(params.pop("grid", 10_000)) if grid is None else grid
        _reject_extra(v, params)
        return verify_pushoff_contact(default_lutz_pair("ambient"), default_lutz_pair("binding"),
                                      prof, n=n, grid=g, tol=t)
    if v.kind == "framing":
        kw = {k: int(params.pop(k)) for k in ("n_theta", "n_t", "n_h", "n_r", "n_rp") if k in params}
        _reject_extra(v, params)
        return verify_framing_homotopy(prof, tol=t, **kw)
    kw = {k: int(params.pop(k)) for k in ("n_theta",) if k in params}
    g = int(params.pop("grid", 600)) if grid is None else grid
    _reject_extra(v, params)
    return verify_f1_nontangent(prof, n_rp=g, tol=t, **kw)


def _reject_extra(v: VerifyDecl, params: dict) -> None:
    if params:
        raise DocError(f"unknown verify parameter(s) {', '.join(sorted(params))}", v.line, 1)


def cmd_contact_verify(doc: OpenBookDoc, args) -> tuple[int, str, object]:
    verifies = doc.verifies or [VerifyDecl(k) for k in ("contact", "framing", "f1")]
    reports = []
    for v in verifies:
        try:
            reports.append(run_verify(v, args.grid, args.tol))
        except (GridTooCoarse, ProfileError) as exc:
            raise DocError(f"verify {v.kind}: {exc}", v.line, 1) from None
    status = EXIT_OK if all(r.all_passed for r in reports) else EXIT_FAIL
    text = "\n".join(r.to_text() for r in reports)
    return status, text, {"reports": [r.to_dict() for r in reports]}


COMMANDS = {
    "invariants": cmd_invariants,
    "sum": cmd_sum,
    "oracle-compare": cmd_oracle_compare,
    "contact-verify": cmd_contact_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="obcalc", description="Open book calculator.")
    p.add_argument("--version", action="version", version=f"obcalc {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("file", help="description file, '-' for stdin")
        sp.add_argument("--json", action="store_true", help="emit JSON instead of text")
        if name == "contact-verify":
            sp.add_argument("--grid", type=int, default=None,
                            help="radial grid points (contact and f1 checks)")
            sp.add_argument("--tol", type=float, default=None, help=f"tolerance (default {DEFAULT_TOL:g})")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        doc = parse(text)
        status, out, data = COMMANDS[args.command](doc, args)
    except OSError as exc:
        print(f"obcalc: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DocError as exc:
        print(f"obcalc: {args.file}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        print(json.dumps({"command": args.command, "status": status, **data},
                         indent=2, ensure_ascii=False, default=str))
    else:
        print(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
