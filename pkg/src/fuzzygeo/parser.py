"""Template grammar for spatial expressions.

parse() turns template-structured text ("6 hours south of Ohio near Asheville")
into a SpatialExpression against a known set of anchor names; render_canonical()
is its inverse over canonical surface forms. Matching is a small recursive
descent with backtracking: anchor names resolve longest-first, terms are
case-insensitive, and chained constraints all attach to the head referent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, UnknownAnchorError
from .gazetteer import _levenshtein
from .model import (
    DIRECTION_ADJECTIVES,
    AnchorRef,
    Constraint,
    FrameOfReference,
    QuantityModifier,
    RelationKind,
    SpatialExpression,
    Unit,
)

TERM = "term"
ANCHOR = "anchor"
ANCHOR_LIST = "anchor_list"
QUANTITY = "quantity"


@dataclass(frozen=True)
class Slot:
    kind: str
    optional: bool = False


@dataclass(frozen=True)
class Template:
    """Literal/slot pattern producing exactly one relation kind."""

    pattern: tuple
    produces: RelationKind
    terms: frozenset[str]
    canonical: str
    direction: str | None = None
    frame: FrameOfReference | None = None
    intrinsic: bool = False


_QTY_OPT = Slot(QUANTITY, optional=True)


def _cardinal(d: str) -> Template:
    return Template((_QTY_OPT, Slot(TERM), Slot(ANCHOR)), RelationKind.CARDINAL_OF,
                    frozenset({f"{d} of", f"{d}_of"}), f"{d} of", direction=d)


def _part(d: str) -> Template:
    adj = DIRECTION_ADJECTIVES[d]
    return Template((Slot(TERM), Slot(ANCHOR)), RelationKind.PART_OF,
                    frozenset({adj}), adj, direction=d)


TEMPLATES: tuple[Template, ...] = (
    Template((Slot(TERM), Slot(ANCHOR), "and", Slot(ANCHOR)), RelationKind.BETWEEN,
             frozenset({"between", "betwixt"}), "between"),
    Template((Slot(TERM), Slot(ANCHOR_LIST)), RelationKind.AMONG,
             frozenset({"among"}), "among"),
    _cardinal("north"), _cardinal("south"), _cardinal("east"), _cardinal("west"),
    _part("north"), _part("south"), _part("east"), _part("west"),
    Template((_QTY_OPT, Slot(TERM), Slot(ANCHOR)), RelationKind.AWAY_FROM,
             frozenset({"away_from", "away from"}), "away_from"),
    Template((_QTY_OPT, Slot(TERM), Slot(ANCHOR)), RelationKind.NEAR,
             frozenset({"near"}), "near"),
    Template((Slot(TERM), Slot(ANCHOR)), RelationKind.IN,
             frozenset({"in", "inside"}), "in"),
    Template((Slot(TERM), Slot(ANCHOR)), RelationKind.OUTSIDE,
             frozenset({"outside", "out_of", "out of"}), "outside"),
    Template((Slot(TERM), Slot(ANCHOR)), RelationKind.ALONG_ON,
             frozenset({"along", "on"}), "along"),
    Template((Slot(ANCHOR), Slot(TERM), Slot(ANCHOR)), RelationKind.WITH,
             frozenset({"with"}), "with"),
    # Intrinsic-frame phrases parse so that validation can reject them with a
    # dedicated error instead of a generic parse failure. Kind is a structural
    # placeholder; the frame makes the constraint non-geocodable.
    Template((Slot(TERM), Slot(ANCHOR)), RelationKind.NEAR,
             frozenset({"in front of", "behind"}), "in front of",
             frame=FrameOfReference.INTRINSIC, intrinsic=True),
)

_UNIT_WORDS = {
    "minutes": Unit.MINUTES, "minute": Unit.MINUTES, "mins": Unit.MINUTES, "min": Unit.MINUTES,
    "hours": Unit.HOURS, "hour": Unit.HOURS, "hrs": Unit.HOURS, "hr": Unit.HOURS,
    "km": Unit.KM, "kilometers": Unit.KM, "kilometer": Unit.KM,
    "kilometres": Unit.KM, "kilometre": Unit.KM,
    "miles": Unit.MILES, "mile": Unit.MILES, "mi": Unit.MILES,
}

_SEPARATORS = {",", "and"}
_COPULAS = {"is", "are"}

_TOKEN_RE = re.compile(r"\d+(?:\.\d+)?|[A-Za-z_'][\w'.\-]*|,")


@dataclass(frozen=True)
class _Token:
    text: str
    start: int

    @property
    def lower(self) -> str:
        return self.text.lower()


def _scan(text: str) -> list[_Token]:
    return [_Token(m.group(0), m.start()) for m in _TOKEN_RE.finditer(text)]


def _norm_name(s: str) -> str:
    return re.sub(r"\s*,\s*", ", ", " ".join(s.split()))


class _NameIndex:
    def __init__(self, names):
        self.exact: dict[str, str] = {}
        self.folded: dict[str, str] = {}
        self.max_tokens = 1
        for name in names:
            norm = _norm_name(name)
            self.exact[norm] = name
            self.folded.setdefault(norm.lower(), name)
            self.max_tokens = max(self.max_tokens, len(_scan(norm)))

    def candidates(self, tokens: list[_Token], i: int):
        """Yield (resolved_name, n_tokens, case_folded), longest match first."""
        limit = min(self.max_tokens, len(tokens) - i)
        for n in range(limit, 0, -1):
            cand = _norm_name(" ".join(t.text for t in tokens[i:i + n]))
            if cand in self.exact:
                yield self.exact[cand], n, False
            elif cand.lower() in self.folded:
                yield self.folded[cand.lower()], n, True


class _Parser:
    def __init__(self, tokens: list[_Token], index: _NameIndex, text: str):
        self.tokens = tokens
        self.index = index
        self.text = text
        self.fail_pos = 0
        self.fail_msg = "no template matches"
        self.anchor_fail: tuple[int, int] | None = None  # (char pos, token idx)

    def _fail(self, i: int, msg: str, anchor: bool = False) -> None:
        pos = self.tokens[i].start if i < len(self.tokens) else len(self.text)
        if pos >= self.fail_pos:
            self.fail_pos = pos
            self.fail_msg = msg
        if anchor and pos > 0 and (self.anchor_fail is None or pos >= self.anchor_fail[0]):
            self.anchor_fail = (pos, i)

    def _match_term(self, terms: frozenset[str], i: int):
        by_len = sorted(terms, key=lambda t: -len(t.split()))
        for term in by_len:
            words = term.split()
            n = len(words)
            if i + n <= len(self.tokens) and \
                    [t.lower for t in self.tokens[i:i + n]] == words:
                yield term, i + n
        self._fail(i, "expected a relation term")

    def _match_quantity(self, i: int):
        toks = self.tokens
        if i + 1 < len(toks) and re.fullmatch(r"\d+(?:\.\d+)?", toks[i].text):
            unit = _UNIT_WORDS.get(toks[i + 1].lower)
            if unit is not None:
                yield QuantityModifier(float(toks[i].text), unit), i + 2
            else:
                self._fail(i + 1, f"unknown unit {toks[i + 1].text!r}")

    def _match_anchor(self, i: int, warnings: list[str]):
        found = False
        for name, n, folded in self.index.candidates(self.tokens, i):
            found = True
            if folded:
                surface = " ".join(t.text for t in self.tokens[i:i + n])
                warnings.append(f"anchor {surface!r} matched case-insensitively as {name!r}")
            yield AnchorRef(name), i + n
        if not found:
            self._fail(i, "expected a known anchor name", anchor=True)

    def _match_anchor_list(self, i: int, warnings: list[str]):
        """One or more anchors separated by commas/'and'; longest list first."""
        def tails(j):
            for ref, k in self._match_anchor(j, warnings):
                k2 = k
                while k2 < len(self.tokens) and self.tokens[k2].lower in _SEPARATORS:
                    k2 += 1
                if k2 > k:
                    for rest, end in tails(k2):
                        yield [ref] + rest, end
                yield [ref], k
        yield from tails(i)

    def _match_template(self, tpl: Template, i: int, warnings: list[str]):
        def step(elems, j, anchors, modifier):
            if not elems:
                yield tuple(anchors), modifier, j
                return
            head, rest = elems[0], elems[1:]
            if isinstance(head, str):
                if j < len(self.tokens) and self.tokens[j].lower == head:
                    yield from step(rest, j + 1, anchors, modifier)
                else:
                    self._fail(j, f"expected {head!r}")
                return
            if head.kind == QUANTITY:
                for qty, k in self._match_quantity(j):
                    yield from step(rest, k, anchors, qty)
                if head.optional:
                    yield from step(rest, j, anchors, modifier)
                return
            if head.kind == TERM:
                for term, k in self._match_term(tpl.terms, j):
                    yield from step(rest, k, anchors, modifier)
                return
            if head.kind == ANCHOR:
                for ref, k in self._match_anchor(j, warnings):
                    yield from step(rest, k, anchors + [ref], modifier)
                return
            if head.kind == ANCHOR_LIST:
                for refs, k in self._match_anchor_list(j, warnings):
                    yield from step(rest, k, anchors + refs, modifier)
                return
            raise AssertionError(head.kind)

        for anchors, modifier, j in step(list(tpl.pattern), i, [], None):
            yield Constraint(
                kind=tpl.produces,
                anchors=anchors,
                modifier=modifier,
                frame=tpl.frame,
                direction=tpl.direction,
                term=tpl.canonical if tpl.intrinsic else None,
            ), j

    def _match_constraints(self, i: int, warnings: list[str]):
        """Yield (constraints, end) covering tokens[i:] completely."""
        j = i
        while j < len(self.tokens) and self.tokens[j].lower in _SEPARATORS:
            j += 1
        if j >= len(self.tokens):
            if j > i:  # trailing separator noise is fine
                yield [], j
            return
        qty_end = next((k for _, k in self._match_quantity(j)), None)
        matched_any = False
        for tpl in TEMPLATES:
            for constraint, k in self._match_template(tpl, j, warnings):
                matched_any = True
                if k >= len(self.tokens):
                    yield [constraint], k
                else:
                    for rest, end in self._match_constraints(k, warnings):
                        yield [constraint] + rest, end
        if not matched_any and qty_end is not None:
            self._fail(qty_end, "dangling quantity: no relation follows it")

    def parse(self, warnings: list[str]) -> SpatialExpression:
        if not self.tokens:
            raise ParseError("empty expression", 0)
        for constraints, _ in self._match_constraints(0, warnings):
            if constraints:
                return SpatialExpression(tuple(constraints))
        # subject-first form: "<anchor> [is|are] <constraints>"
        for subject, j in self._match_anchor(0, warnings):
            k = j
            while k < len(self.tokens) and self.tokens[k].lower in _COPULAS:
                k += 1
            for constraints, _ in self._match_constraints(k, warnings):
                if constraints:
                    return SpatialExpression(tuple(constraints), subject=subject)
        if self.anchor_fail is not None and self.anchor_fail[0] >= self.fail_pos:
            raise self._unknown_anchor(self.anchor_fail[1])
        raise ParseError(f"{self.fail_msg} at position {self.fail_pos}", self.fail_pos)

    def _unknown_anchor(self, i: int) -> UnknownAnchorError:
        """Best unresolvable name starting at token i, with nearby suggestions."""
        limit = min(self.index.max_tokens, len(self.tokens) - i)
        fallback = _norm_name(" ".join(t.text for t in self.tokens[i:i + max(limit, 1)]))
        for n in range(limit, 0, -1):
            cand = _norm_name(" ".join(t.text for t in self.tokens[i:i + n]))
            suggestions = sorted(name for name in self.index.exact.values()
                                 if _levenshtein(cand, name) <= 2)
            if suggestions:
                return UnknownAnchorError(cand, suggestions)
        return UnknownAnchorError(fallback, [])


def parse(text: str, gaz_names, warnings: list[str] | None = None) -> SpatialExpression:
    """Parse template-structured text into an expression AST.

    gaz_names is the full set of resolvable anchor surface names (primary
    names plus aliases). Case-insensitive anchor matches append to warnings.
    """
    sink = warnings if warnings is not None else []
    tokens = _scan(text)
    return _Parser(tokens, _NameIndex(gaz_names), text).parse(sink)


# ── canonical rendering ──────────────────────────────────

def _fmt_qty(m: QuantityModifier) -> str:
    v = m.value
    num = str(int(v)) if float(v).is_integer() else f"{v:g}"
    return f"{num} {m.unit.value}"


def render_constraint(c: Constraint) -> str:
    qty = f"{_fmt_qty(c.modifier)} " if c.modifier else ""
    names = [a.name for a in c.anchors]
    if c.frame is FrameOfReference.INTRINSIC:
        return f"{c.term or 'in front of'} {names[0]}"
    kind = c.kind
    if kind is RelationKind.BETWEEN:
        return f"between {names[0]} and {names[1]}"
    if kind is RelationKind.AMONG:
        return "among " + " and ".join(names)
    if kind is RelationKind.CARDINAL_OF:
        return f"{qty}{c.direction} of {names[0]}"
    if kind is RelationKind.PART_OF:
        return f"{DIRECTION_ADJECTIVES[c.direction]} {names[0]}"
    if kind is RelationKind.AWAY_FROM:
        return f"{qty}away_from {names[0]}"
    if kind is RelationKind.NEAR:
        return f"{qty}near {names[0]}"
    if kind is RelationKind.IN:
        return f"in {names[0]}"
    if kind is RelationKind.OUTSIDE:
        return f"outside {names[0]}"
    if kind is RelationKind.ALONG_ON:
        return f"along {names[0]}"
    if kind is RelationKind.WITH:
        return f"{names[0]} with {names[1]}"
    raise AssertionError(kind)


def render_canonical(expr: SpatialExpression) -> str:
    """Canonical text such that parse(render_canonical(e)) == e."""
    parts = [c and render_constraint(c) for c in expr.constraints]
    head = f"{expr.subject.name} " if expr.subject else ""
    return head + " ".join(parts)
