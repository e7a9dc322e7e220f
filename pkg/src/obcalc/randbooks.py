"""Random concrete open books for the randomized test suites.

The seed comes from ``OBCALC_SEED`` when set, so a failing run can be
replayed exactly.
"""
from __future__ import annotations

import os
import random

from .openbook import OpenBook3
from .surface import CombSurface, TwistWord, resolve_curve

# (genus, boundary): disc, annulus, genus one with one or two boundary circles
PAGE_SHAPES = ((0, 1), (0, 2), (1, 1), (1, 2))
POWERS = (-2, -1, 1, 2)
DEFAULT_SEED = 20240607


def seed_from_env(default: int = DEFAULT_SEED) -> int:
    raw = os.environ.get("OBCALC_SEED", "")
    return int(raw) if raw.strip() else default


def make_rng(default: int = DEFAULT_SEED) -> random.Random:
    return random.Random(seed_from_env(default))


def standard_curve_names(page: CombSurface) -> list[str]:
    """Names of the standard non-trivial curves on a connected page."""
    comp = page.components[0]
    names = []
    for i in range(1, comp.genus + 1):
        names += [f"a{i}", f"b{i}"]
    names += [f"d({l})" for l in comp.labels if any(page.boundary_class(l))]
    return names


def random_word(rng: random.Random, page: CombSurface, max_len: int = 4) -> TwistWord:
    names = standard_curve_names(page)
    if not names:
        return TwistWord()
    n = rng.randint(0, max_len)
    return TwistWord.of(*[(resolve_curve(page, rng.choice(names)), rng.choice(POWERS)) for _ in range(n)])


def random_book(rng: random.Random, shape: tuple[int, int] | None = None, max_len: int = 4,
                name: str = "") -> OpenBook3:
    g, b = shape or rng.choice(PAGE_SHAPES)
    page = CombSurface.standard(g, b)
    return OpenBook3(page, random_word(rng, page, max_len), name)


def random_pair(rng: random.Random, max_len: int = 4) -> tuple[OpenBook3, OpenBook3]:
    """Two books with the same number of binding circles."""
    b = rng.choice((1, 2))
    shapes = [s for s in PAGE_SHAPES if s[1] == b]
    return (random_book(rng, rng.choice(shapes), max_len, "A"),
            random_book(rng, rng.choice(shapes), max_len, "B"))
