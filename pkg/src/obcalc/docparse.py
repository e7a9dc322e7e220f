"""Parser and printer for open book description files.

Grammar (statements end with ';', '#' starts a comment)::

    openbook NAME {
        page genus=G boundary=B [labels=L1,L2,...];
        monodromy = "T(a1)^1 T(d(2))^-3";
        [glue NAME = vec[...];]
    }
    symbolic NAME {
        dim=N;
        page chi=X "DESC";
        binding chi_page=Y "DESC" [page "DESC"];
        [manifold "DESC";]
        [monodromy "TEXT";]
    }
    sum BOOK.LABEL BOOK.LABEL [as NAME];
    verify contact|framing|f1 [KEY=VALUE ...];

Word letters are T(curve)^k (k defaults to 1) and act right to left.
Curves: a<i>, b<i>, d(<label>), glue(<label>), core, vec[<ints>].

>>> doc = parse('openbook S3 { page genus=0 boundary=1; monodromy = ""; }')
>>> doc.books[0].genus, doc.books[0].boundary, doc.books[0].word
(0, 1, ())
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field


class DocError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<vec>vec\[[^\]\n]*\])
  | (?P<int>[+-]?\d+(?![A-Za-z_.#'|]))
  | (?P<float>[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?(?![A-Za-z_.#'|]))
  | (?P<word>[A-Za-z0-9_][A-Za-z0-9_.#'+|\-]*)
  | (?P<punct>[{};=,])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out, line, start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise DocError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# word syntax ------------------------------------------------------------------

_LETTER_RE = re.compile(r"\s*T\(((?:[^()]|\([^()]*\))*)\)(\^([+-]?\d*))?")


def parse_word(text: str, line: int = 0, col: int = 0) -> tuple[tuple[str, int], ...]:
    """Parse 'T(c)^k ...' into ((curve, k), ...).

    >>> parse_word("T(core)^3 T(a1)^-1 T(b1)")
    (('core', 3), ('a1', -1), ('b1', 1))
    """
    letters, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _LETTER_RE.match(text, pos)
        if not m:
            raise DocError(f"malformed twist letter at {text[pos:].strip()[:20]!r}", line, col + pos)
        curve = m.group(1).strip()
        if not curve:
            raise DocError("empty curve in twist letter", line, col + pos)
        if m.group(2) is not None:
            if m.group(3) in ("", "+", "-"):
                raise DocError(f"missing exponent after {m.group(0).strip()!r}", line, col + m.end())
            power = int(m.group(3))
        else:
            power = 1
        letters.append((curve, power))
        pos = m.end()
    return tuple(letters)


def format_word(word) -> str:
    return " ".join(f"T({c})^{k}" for c, k in word)


# document model -------------------------------------------------------------------


@dataclass
class BookDecl:
    name: str
    genus: int
    boundary: int
    labels: tuple[str, ...]
    word: tuple[tuple[str, int], ...] = ()
    glue: tuple[tuple[str, tuple[int, ...]], ...] = ()
    line: int = field(default=0, compare=False)


@dataclass
class SymbolicDecl:
    name: str
    dim: int
    page_chi: int
    page: str
    binding_chi_page: int
    binding: str
    binding_page: str = ""
    manifold: str = ""
    monodromy: str = "id"
    line: int = field(default=0, compare=False)


@dataclass
class SumDecl:
    left: tuple[str, str]
    right: tuple[str, str]
    result: str = ""
    line: int = field(default=0, compare=False)


@dataclass
class VerifyDecl:
    kind: str
    params: dict = field(default_factory=dict)
    line: int = field(default=0, compare=False)


@dataclass
class OpenBookDoc:
    books: list = field(default_factory=list)  # BookDecl | SymbolicDecl, in order
    sums: list[SumDecl] = field(default_factory=list)
    verifies: list[VerifyDecl] = field(default_factory=list)

    def book(self, name: str):
        for b in self.books:
            if b.name == name:
                return b
        raise KeyError(name)


VERIFY_KINDS = ("contact", "framing", "f1")


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        shown = tok.text or "end of input"
        raise DocError(f"{msg} (at {shown!r})", tok.line, tok.col)

    def next(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, kind: str, text: str | None = None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            self.error(f"expected {text or kind}")
        return self.next()

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        t = self.tok
        if t.kind == kind and (text is None or t.text == text):
            return self.next()
        return None

    def keyword(self, text: str) -> Token:
        return self.expect("word", text)

    def name(self) -> str:
        t = self.tok
        if t.kind not in ("word", "int"):
            self.error("expected a name")
        return self.next().text

    def integer(self) -> int:
        return int(self.expect("int").text)

    def string(self) -> str:
        raw = self.expect("string").text[1:-1]
        return re.sub(r"\\(.)", r"\1", raw)

    def keyvalue_int(self, key: str) -> int:
        self.keyword(key)
        self.expect("punct", "=")
        return self.integer()

    # statements

    def document(self) -> OpenBookDoc:
        doc = OpenBookDoc()
        names = set()
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind != "word":
                self.error("expected a statement")
            if t.text == "openbook":
                decl = self.openbook()
            elif t.text == "symbolic":
                decl = self.symbolic()
            elif t.text == "sum":
                doc.sums.append(self.sum_stmt())
                continue
            elif t.text == "verify":
                doc.verifies.append(self.verify_stmt())
                continue
            else:
                self.error("unknown statement")
            if decl.name in names:
                raise DocError(f"duplicate name {decl.name!r}", t.line, t.col)
            names.add(decl.name)
            doc.books.append(decl)
        return doc

    def openbook(self) -> BookDecl:
        start = self.keyword("openbook")
        name = self.name()
        self.expect("punct", "{")
        genus = boundary = None
        labels: tuple[str, ...] | None = None
        word: tuple = ()
        glue = []
        seen_word = False
        while not self.accept("punct", "}"):
            t = self.tok
            if t.kind == "word" and t.text == "page":
                self.next()
                genus = self.keyvalue_int("genus")
                boundary = self.keyvalue_int("boundary")
                if self.accept("word", "labels"):
                    self.expect("punct", "=")
                    items = [self.name()]
                    while self.accept("punct", ","):
                        items.append(self.name())
                    labels = tuple(items)
                self.expect("punct", ";")
            elif t.kind == "word" and t.text == "monodromy":
                self.next()
                self.expect("punct", "=")
                s = self.tok
                word = parse_word(self.string(), s.line, s.col + 1)
                seen_word = True
                self.expect("punct", ";")
            elif t.kind == "word" and t.text == "glue":
                self.next()
                gname = self.name()
                self.expect("punct", "=")
                v = self.expect("vec").text[4:-1]
                try:
                    vec = tuple(int(x) for x in v.split(",")) if v.strip() else ()
                except ValueError:
                    self.error("bad vector literal")
                glue.append((gname, vec))
                self.expect("punct", ";")
            else:
                self.error("expected page, monodromy or glue")
        if genus is None:
            raise DocError(f"open book {name!r} has no page line", start.line, start.col)
        if genus < 0 or boundary < 1:
            raise DocError("page needs genus >= 0 and boundary >= 1", start.line, start.col)
        if labels is None:
            labels = tuple(str(i + 1) for i in range(boundary))
        if len(labels) != boundary:
            raise DocError("label count does not match boundary", start.line, start.col)
        if len(set(labels)) != len(labels):
            raise DocError("duplicate boundary labels", start.line, start.col)
        if not seen_word:
            raise DocError(f"open book {name!r} has no monodromy line", start.line, start.col)
        return BookDecl(name, genus, boundary, labels, word, tuple(glue), start.line)

    def symbolic(self) -> SymbolicDecl:
        start = self.keyword("symbolic")
        name = self.name()
        self.expect("punct", "{")
        fields: dict = {}
        while not self.accept("punct", "}"):
            t = self.tok
            if t.kind == "word" and t.text.startswith("dim"):
                fields["dim"] = self.keyvalue_int("dim")
            elif t.kind == "word" and t.text == "page":
                self.next()
                fields["page_chi"] = self.keyvalue_int("chi")
                fields["page"] = self.string()
            elif t.kind == "word" and t.text == "binding":
                self.next()
                fields["binding_chi_page"] = self.keyvalue_int("chi_page")
                fields["binding"] = self.string()
                if self.accept("word", "page"):
                    fields["binding_page"] = self.string()
            elif t.kind == "word" and t.text == "manifold":
                self.next()
                fields["manifold"] = self.string()
            elif t.kind == "word" and t.text == "monodromy":
                self.next()
                fields["monodromy"] = self.string()
            else:
                self.error("expected dim, page, binding, manifold or monodromy")
            self.expect("punct", ";")
        missing = [k for k in ("dim", "page", "binding") if k not in fields]
        if missing:
            raise DocError(f"symbolic book {name!r} lacks {', '.join(missing)}", start.line, start.col)
        return SymbolicDecl(name=name, line=start.line, **fields)

    def _ref(self) -> tuple[str, str]:
        t = self.tok
        text = self.name()
        if "." not in text:
            self.error("expected BOOK.LABEL", t)
        book, label = text.split(".", 1)
        return book, label

    def sum_stmt(self) -> SumDecl:
        start = self.keyword("sum")
        left = self._ref()
        right = self._ref()
        result = ""
        if self.accept("word", "as"):
            result = self.name()
        self.expect("punct", ";")
        return SumDecl(left, right, result, start.line)

    def verify_stmt(self) -> VerifyDecl:
        start = self.keyword("verify")
        kind = self.name()
        if kind not in VERIFY_KINDS:
            self.error(f"verify kind must be one of {', '.join(VERIFY_KINDS)}", start)
        params = {}
        while not self.accept("punct", ";"):
            key = self.expect("word").text
            self.expect("punct", "=")
            t = self.tok
            if t.kind == "int":
                params[key] = int(self.next().text)
            elif t.kind == "float":
                params[key] = float(self.next().text)
            else:
                self.error("expected a number")
        return VerifyDecl(kind, params, start.line)


def parse(text: str) -> OpenBookDoc:
    return _Parser(text).document()


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def format_book(b: BookDecl) -> str:
    default = tuple(str(i + 1) for i in range(b.boundary))
    labels = "" if b.labels == default else " labels=" + ",".join(b.labels)
    lines = [f"openbook {b.name} {{",
             f"    page genus={b.genus} boundary={b.boundary}{labels};",
             f"    monodromy = {_q(format_word(b.word))};"]
    for name, vec in b.glue:
        lines.append(f"    glue {name} = vec[{','.join(str(x) for x in vec)}];")
    lines.append("}")
    return "\n".join(lines)


def format_symbolic(s: SymbolicDecl) -> str:
    lines = [f"symbolic {s.name} {{", f"    dim={s.dim};", f"    page chi={s.page_chi} {_q(s.page)};"]
    bp = f" page {_q(s.binding_page)}" if s.binding_page else ""
    lines.append(f"    binding chi_page={s.binding_chi_page} {_q(s.binding)}{bp};")
    if s.manifold:
        lines.append(f"    manifold {_q(s.manifold)};")
    if s.monodromy != "id":
        lines.append(f"    monodromy {_q(s.monodromy)};")
    lines.append("}")
    return "\n".join(lines)


def format_doc(doc: OpenBookDoc) -> str:
    parts = []
    for b in doc.books:
        parts.append(format_book(b) if isinstance(b, BookDecl) else format_symbolic(b))
    for s in doc.sums:
        tail = f" as {s.result}" if s.result else ""
        parts.append(f"sum {s.left[0]}.{s.left[1]} {s.right[0]}.{s.right[1]}{tail};")
    for v in doc.verifies:
        params = "".join(f" {k}={v.params[k]!r}" for k in v.params)
        parts.append(f"verify {v.kind}{params};")
    return "\n".join(parts) + "\n"
