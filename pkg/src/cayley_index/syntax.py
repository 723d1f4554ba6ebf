"""Text formats shared by the CLI and the catalog.

Group specs::

    ab:4,2,2        Z4 x Z2 x Z2 (invariant factors)
    dih:8           dihedral group of order 8
    q8 | a4 | h1 | h2 | h3 | h4
    dic:ab:6@3      Dic(Z6, 3, x); the involution is a mixed-radix index ...
    dic:ab:4,2@(0,1)    ... or a coordinate tuple
    prod(q8,ab:2,2) direct product, left to right

Connection sets are comma-separated element expressions over the group's
named elements::

    z1, z1^-1, x, x*z1, pm(z1*x), (z1*x)^pm1, -i, (1 2 3)^-1, (1 2)(3 4)

``pm(e)`` and ``e^pm1`` (or ``e^±1``) stand for both ``e`` and ``e^-1``.  A
leading ``-`` multiplies by the element named ``-1``.  Juxtaposed names
(``iz``, ``z1z2``) are split into known names greedily.

Presentations::

    gens a b c; rel a^2; rel a*b*c = b*c*a; rel (a*c)^2

All parse errors raise :class:`ParseError` carrying a byte offset.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .groups import Group, GroupError

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<pm>±)|(?P<sym>[(),^*:@;=\-]))"
)


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


@dataclass
class Token:
    kind: str
    text: str
    offset: int


def tokenize(text: str) -> list[Token]:
    data = text.encode("utf-8")
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            j = pos
            while j < len(text) and text[j].isspace():
                j += 1
            raise ParseError(f"unexpected character {text[j]!r}",
                             len(text[:j].encode("utf-8")))
        kind = m.lastgroup
        start = m.start(kind)
        out.append(Token(kind, m.group(kind), len(text[:start].encode("utf-8"))))
        pos = m.end()
    out.append(Token("end", "", len(data)))
    return out


class _Stream:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.cur.text == text and self.cur.kind in ("sym", "name", "pm"):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if self.cur.text != text:
            raise ParseError(f"expected {text!r}, found {self.cur.text or 'end of input'!r}",
                             self.cur.offset)
        return self.take()

    def expect_int(self) -> int:
        if self.cur.kind != "int":
            raise ParseError(f"expected an integer, found {self.cur.text or 'end of input'!r}",
                             self.cur.offset)
        return int(self.take().text)

    def expect_end(self) -> None:
        if self.cur.kind != "end":
            raise ParseError(f"unexpected {self.cur.text!r}", self.cur.offset)


# -- group specs -------------------------------------------------------------

def parse_group(text: str) -> Group:
    s = _Stream(text)
    G = _group(s)
    s.expect_end()
    return G


def _int_list(s: _Stream) -> list[int]:
    vals = [s.expect_int()]
    while s.cur.text == "," and s.peek().kind == "int":
        s.take()
        vals.append(s.expect_int())
    return vals


def _group(s: _Stream) -> Group:
    from . import groups, presentation

    tok = s.cur
    if tok.kind != "name":
        raise ParseError(f"expected a group spec, found {tok.text or 'end of input'!r}", tok.offset)
    word = tok.text.lower()
    s.take()
    try:
        if word == "ab":
            s.expect(":")
            return groups.abelian(_int_list(s))
        if word == "cyc":
            s.expect(":")
            return groups.cyclic(s.expect_int())
        if word == "dih":
            s.expect(":")
            at = s.cur.offset
            order = s.expect_int()
            if order % 2:
                raise ParseError("dihedral order must be even", at)
            return groups.dihedral(order // 2)
        if word == "q8":
            return groups.quaternion8()
        if word == "a4":
            return groups.alternating4()
        if word in ("h1", "h2", "h3", "h4"):
            return presentation.builtin_exceptional(word.upper())
        if word == "dic":
            s.expect(":")
            A = _group(s)
            s.expect("@")
            y = _abelian_elem(s, A)
            return groups.generalized_dicyclic(A, y)
        if word == "prod":
            s.expect("(")
            parts = [_group(s)]
            while s.accept(","):
                parts.append(_group(s))
            s.expect(")")
            G = parts[0]
            for H in parts[1:]:
                G = groups.direct_product(G, H)
            return G
    except GroupError as exc:
        raise ParseError(str(exc), tok.offset) from None
    raise ParseError(f"unknown group constructor {tok.text!r}", tok.offset)


def _abelian_elem(s: _Stream, A: Group) -> int:
    from .groups import abelian_element

    at = s.cur.offset
    if s.accept("("):
        coord = [s.expect_int()]
        while s.accept(","):
            coord.append(s.expect_int())
        s.expect(")")
        try:
            return abelian_element(A, coord)
        except GroupError as exc:
            raise ParseError(str(exc), at) from None
    idx = s.expect_int()
    if idx >= A.order:
        raise ParseError(f"element index {idx} out of range for {A.label}", at)
    return idx


# -- element expressions -----------------------------------------------------

class _ElemParser:
    def __init__(self, G: Group, s: _Stream):
        self.G = G
        self.s = s

    def expr(self) -> int:
        G, s = self.G, self.s
        val = self.term()
        while True:
            if s.accept("*"):
                val = G.mul[val][self.term()]
            elif s.cur.kind == "name" or (s.cur.text == "(" and s.cur.kind == "sym"):
                val = G.mul[val][self.term()]
            else:
                return val

    def term(self) -> int:
        G, s = self.G, self.s
        neg_at = s.cur.offset
        neg = s.accept("-")
        val = self.factor()
        if s.cur.text == "^" and not self._pm_power_ahead():
            s.take()
            sign = -1 if s.accept("-") else 1
            val = G.power(val, sign * s.expect_int())
        if neg:
            if "-1" not in G.names:
                raise ParseError(f"{G.label} has no element named -1", neg_at)
            val = G.mul[G.names["-1"]][val]
        return val

    def _pm_power_ahead(self) -> bool:
        s = self.s
        nxt = s.peek()
        return nxt.kind == "pm" or (nxt.kind == "name" and nxt.text == "pm1")

    def factor(self) -> int:
        G, s = self.G, self.s
        tok = s.cur
        if tok.kind == "name":
            s.take()
            return self._name(tok)
        if tok.kind == "int":
            s.take()
            if tok.text == "1":
                return 0
            raise ParseError(f"unexpected integer {tok.text}", tok.offset)
        if tok.text == "(":
            if s.peek().kind == "int" and s.peek(2).kind == "int":
                return self._cycles()
            s.take()
            val = self.expr()
            s.expect(")")
            return val
        raise ParseError(f"expected an element, found {tok.text or 'end of input'!r}", tok.offset)

    def _cycles(self) -> int:
        from .groups import cycle_element

        s = self.s
        at = s.cur.offset
        cycles = []
        while s.cur.text == "(" and s.peek().kind == "int":
            s.take()
            cyc = []
            while s.cur.kind == "int":
                cyc.append(int(s.take().text))
            s.expect(")")
            cycles.append(cyc)
        try:
            return cycle_element(self.G, cycles)
        except GroupError as exc:
            raise ParseError(str(exc), at) from None

    def _name(self, tok: Token) -> int:
        G = self.G
        if tok.text in G.names:
            return G.names[tok.text]
        if tok.text == "e":
            return 0
        # greedy split of juxtaposed names, e.g. "kz1z2"
        text, val = tok.text, 0
        keys = sorted((k for k in G.names if k.isidentifier()), key=len, reverse=True)
        while text:
            for k in keys:
                if text.startswith(k):
                    val = G.mul[val][G.names[k]]
                    text = text[len(k):]
                    break
            else:
                raise ParseError(f"{G.label} has no element named {tok.text!r}", tok.offset)
        return val


def parse_element(G: Group, text: str) -> int:
    s = _Stream(text)
    val = _ElemParser(G, s).expr()
    s.expect_end()
    return val


def parse_connection_items(G: Group, text: str) -> list[tuple[int, int]]:
    """Elements named by a connection-set string, each with its byte offset."""
    s = _Stream(text)
    p = _ElemParser(G, s)
    out: list[tuple[int, int]] = []
    if s.cur.kind == "end":
        return out
    while True:
        at = s.cur.offset
        if s.cur.text == "pm" and s.peek().text == "(":
            s.take()
            s.take()
            g = p.expr()
            s.expect(")")
            out += [(g, at), (G.inv[g], at)]
        else:
            g = p.expr()
            if s.cur.text == "^" and p._pm_power_ahead():
                s.take()
                if s.take().kind == "pm":
                    tok = s.cur
                    if s.expect_int() != 1:
                        raise ParseError("only ±1 is supported", tok.offset)
                out += [(g, at), (G.inv[g], at)]
            else:
                out.append((g, at))
        if not s.accept(","):
            break
    s.expect_end()
    return out


# -- presentations -------------------------------------------------------------

def parse_word(text: str, gen_names: list[str], s: _Stream | None = None) -> list[int]:
    """Parse a word into signed 1-based generator indices."""
    own = s is None
    if own:
        s = _Stream(text)
    word = _word_expr(s, gen_names)
    if own:
        s.expect_end()
    return word


def _word_expr(s: _Stream, gens: list[str]) -> list[int]:
    word = _word_term(s, gens)
    while True:
        if s.accept("*"):
            word = word + _word_term(s, gens)
        elif s.cur.kind == "name" or (s.cur.text == "(" and s.cur.kind == "sym"):
            word = word + _word_term(s, gens)
        else:
            return word


def _word_term(s: _Stream, gens: list[str]) -> list[int]:
    tok = s.cur
    if tok.kind == "name":
        s.take()
        if tok.text in gens:
            base = [gens.index(tok.text) + 1]
        elif tok.text == "e":
            base = []
        else:
            raise ParseError(f"unknown generator {tok.text!r}", tok.offset)
    elif tok.kind == "int" and tok.text == "1":
        s.take()
        base = []
    elif tok.text == "(":
        s.take()
        base = _word_expr(s, gens)
        s.expect(")")
    else:
        raise ParseError(f"expected a word, found {tok.text or 'end of input'!r}", tok.offset)
    if s.accept("^"):
        sign = -1 if s.accept("-") else 1
        k = s.expect_int()
        if sign < 0:
            base = [-g for g in reversed(base)]
        base = base * k
    return base


def parse_presentation_text(text: str) -> tuple[list[str], list[list[int]]]:
    s = _Stream(text)
    gens: list[str] = []
    rels: list[list[int]] = []
    s.expect("gens")
    while s.cur.kind == "name":
        tok = s.take()
        if tok.text in gens:
            raise ParseError(f"duplicate generator {tok.text!r}", tok.offset)
        gens.append(tok.text)
    if not gens:
        raise ParseError("presentation needs at least one generator", s.cur.offset)
    while s.accept(";"):
        if s.cur.kind == "end":
            break
        s.expect("rel")
        at = s.cur.offset
        lhs = _word_expr(s, gens)
        if s.accept("="):
            rhs = _word_expr(s, gens)
            lhs = lhs + [-g for g in reversed(rhs)]
        if not lhs:
            raise ParseError("empty relator", at)
        rels.append(lhs)
    s.expect_end()
    return gens, rels
