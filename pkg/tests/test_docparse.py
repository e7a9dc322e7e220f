from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from obcalc.docparse import (
    BookDecl,
    DocError,
    SymbolicDecl,
    format_doc,
    format_word,
    parse,
    parse_word,
    tokenize,
)

SAMPLES = sorted((Path(__file__).parent.parent / "samples").glob("*.ob"))


def test_trivial_book():
    doc = parse('openbook S3 { page genus=0 boundary=1; monodromy = ""; }')
    (b,) = doc.books
    assert (b.name, b.genus, b.boundary, b.labels, b.word) == ("S3", 0, 1, ("1",), ())


def test_core_alias_word():
    doc = parse('openbook L { page genus=0 boundary=2; monodromy = "T(core)^3"; }')
    assert doc.books[0].word == (("core", 3),)


def test_missing_exponent_reports_line():
    text = 'openbook X {\n  page genus=1 boundary=1;\n  monodromy = "T(a1)^";\n}\n'
    with pytest.raises(DocError) as err:
        parse(text)
    assert err.value.line == 3
    assert "line 3" in str(err.value)


@pytest.mark.parametrize("text, line", [
    ("openbook X { page genus=0 boundary=1 monodromy=\"\"; }", 1),
    ("openbook X {\n page genus=0 boundary=1;\n}", 1),
    ("openbook X { page genus=0 boundary=2 labels=a; monodromy=\"\"; }", 1),
    ("openbook X { page genus=0 boundary=2 labels=a,a; monodromy=\"\"; }", 1),
    ("\n\nsum A B;", 3),
    ("verify heat;", 1),
    ("verify contact grid=x;", 1),
    ("openbook X { page genus=0 boundary=1; monodromy=\"\"; }\nopenbook X { page genus=0 boundary=1; monodromy=\"\"; }", 2),
    ("symbolic S { dim=4; }", 1),
    ("openbook X { page genus=0 boundary=1; monodromy=\"T(a1\"; }", 1),
    ("@", 1),
])
def test_errors_carry_positions(text, line):
    with pytest.raises(DocError) as err:
        parse(text)
    assert err.value.line == line


def test_tokenizer_splits_numbers_and_names():
    kinds = [(t.kind, t.text) for t in tokenize("tol=1e-6 grid=10 A.1 1a")][:-1]
    assert kinds == [("word", "tol"), ("punct", "="), ("float", "1e-6"), ("word", "grid"),
                     ("punct", "="), ("int", "10"), ("word", "A.1"), ("word", "1a")]


def test_comments_are_ignored():
    doc = parse("# header\nopenbook D { # trailing\n page genus=0 boundary=1; monodromy=\"\"; }\n")
    assert doc.books[0].name == "D"


def test_symbolic_declaration():
    doc = parse('symbolic S { dim=5; page chi=1 "D^4"; binding chi_page=1 "S^3" page "D^2"; manifold "S^5"; }')
    (s,) = doc.books
    assert isinstance(s, SymbolicDecl)
    assert (s.dim, s.page_chi, s.page, s.binding, s.binding_page, s.manifold) == (5, 1, "D^4", "S^3", "D^2", "S^5")


def test_sum_and_verify_statements():
    doc = parse("sum A.1 B.x as C;\nverify contact grid=2000 tol=1e-7;\nverify framing;")
    (s,) = doc.sums
    assert (s.left, s.right, s.result) == (("A", "1"), ("B", "x"), "C")
    assert doc.verifies[0].params == {"grid": 2000, "tol": 1e-7}
    assert doc.verifies[1].kind == "framing"


def test_glue_lines():
    doc = parse('openbook G { page genus=0 boundary=2; monodromy="T(glue(g))^-2"; glue g = vec[-1]; }')
    assert doc.books[0].glue == (("g", (-1,)),)


names = st.from_regex(r"[A-Za-z][A-Za-z0-9_]{0,5}", fullmatch=True).filter(
    lambda s: s not in ("openbook", "symbolic", "sum", "verify", "as", "page", "monodromy", "glue"))
curves = st.sampled_from(["a1", "b1", "a2", "d(1)", "d(x)", "core", "glue(g)", "vec[1,-2,0]"])


@given(st.lists(st.tuples(curves, st.integers(-5, 5).filter(bool)), max_size=6))
def test_word_round_trip(word):
    assert parse_word(format_word(word)) == tuple(word)


@given(names, st.integers(0, 3), st.integers(1, 4), st.lists(st.tuples(curves, st.integers(-3, 3)), max_size=4))
def test_book_round_trip(name, genus, boundary, word):
    doc = parse(format_doc(parse(f'openbook {name} {{ page genus={genus} boundary={boundary}; '
                                 f'monodromy = "{format_word(word)}"; }}')))
    assert doc.books[0] == BookDecl(name, genus, boundary, tuple(str(i + 1) for i in range(boundary)),
                                    tuple(word))


@pytest.mark.parametrize("path", SAMPLES, ids=lambda p: p.name)
def test_sample_corpus_round_trip(path):
    doc = parse(path.read_text())
    again = parse(format_doc(doc))
    assert again == doc
    assert format_doc(again) == format_doc(doc)
