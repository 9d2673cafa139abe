"""Parser for the line-oriented spec-file format.

Statements end at a newline or ``;`` (newlines inside braces or parentheses
do not end a statement); ``#`` starts a comment. See README.md for the grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import FiniteMvAlgebra, full_product, generate_subalgebra
from .core import Chain, ProductSignature
from .errors import MvError
from .stone_n import FiniteBooleanAlgebra
from .supernatural import Supernatural


class SpecError(MvError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<arrow>->)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_\-]*)
  | (?P<punct>[=(){},:;^*|])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[list[Token]]:
    """Split into statements of tokens."""
    stmts: list[list[Token]] = []
    cur: list[Token] = []
    depth = 0
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise SpecError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok_text = m.group()
        pos = m.end()
        if kind == "nl":
            line += 1
            line_start = pos
            if depth == 0 and cur:
                stmts.append(cur)
                cur = []
            continue
        if kind in ("ws", "comment"):
            continue
        if tok_text == ";" and depth == 0:
            if cur:
                stmts.append(cur)
                cur = []
            continue
        if tok_text in "({":
            depth += 1
        elif tok_text in ")}":
            depth -= 1
            if depth < 0:
                raise SpecError(f"unbalanced {tok_text!r}", line, col)
        cur.append(Token(kind, tok_text, line, col))
    if depth:
        raise SpecError("unclosed bracket at end of input", line, pos - line_start + 1)
    if cur:
        stmts.append(cur)
    return stmts


@dataclass
class Decl:
    kind: str
    name: str
    line: int
    col: int
    value: object


@dataclass
class TopologySource:
    """How a topology was declared; built when a check runs so bad families can FAIL there."""

    universe: tuple
    chain: Chain
    form: str
    tables: tuple = ()
    metric: str = ""
    radii: tuple = ()
    algebra: str = ""


@dataclass
class BooleNSource:
    algebra: FiniteBooleanAlgebra
    n: int
    ideals: tuple


@dataclass
class CheckStmt:
    command: str
    args: tuple
    line: int
    col: int


@dataclass
class SpecDocument:
    declarations: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    def get(self, name: str) -> Decl:
        return self.declarations[name]


# argument kinds per command; "int" is a literal natural number
COMMANDS = {
    "check-topology": ("topology",),
    "hausdorff": ("topology",),
    "compactness": ("topology",),
    "skeleton": ("topology",),
    "clopen": ("topology",),
    "dualize-algebra": ("algebra",),
    "dualize-space": ("topology",),
    "roundtrip-algebra": ("algebra",),
    "roundtrip-space": ("topology",),
    "square": ("algebra",),
    "cuts": ("algebra",),
    "lcc": ("algebra",),
    "factorize": ("algebra",),
    "maximal-ideals": ("algebra",),
    "multiset": ("algebra",),
    "isomorphic": ("algebra", "algebra"),
    "continuous": ("map", "topology", "topology"),
    "boolen-convert": ("boolen",),
    "boolen-roundtrip": ("boolen",),
    "stone-n-dualize": ("boolen",),
    "sn-leq": ("supernatural", "supernatural"),
    "sn-join": ("supernatural", "supernatural"),
    "sn-meet": ("supernatural", "supernatural"),
    "sn-basic-open": ("supernatural", "int"),
    "random-hausdorff": ("int",),
}


class _Stream:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.i = 0

    def peek(self) -> Token | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def _end(self) -> SpecError:
        last = self.toks[-1]
        return SpecError("unexpected end of statement", last.line, last.col + len(last.text))

    def next(self) -> Token:
        t = self.peek()
        if t is None:
            raise self._end()
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text:
            raise SpecError(f"expected {text!r}, found {t.text!r}", t.line, t.col)
        return t

    def name(self) -> Token:
        t = self.next()
        if t.kind != "name":
            raise SpecError(f"expected a name, found {t.text!r}", t.line, t.col)
        return t

    def number(self) -> Token:
        t = self.next()
        if t.kind != "num":
            raise SpecError(f"expected a number, found {t.text!r}", t.line, t.col)
        return t

    def accept(self, text: str) -> bool:
        t = self.peek()
        if t is not None and t.text == text:
            self.i += 1
            return True
        return False

    def done(self) -> None:
        t = self.peek()
        if t is not None:
            raise SpecError(f"unexpected {t.text!r}", t.line, t.col)

    def listed(self, item, open_="{", close="}") -> list:
        """``open item, item, ... close``; may be empty."""
        self.expect(open_)
        out = []
        if self.accept(close):
            return out
        while True:
            out.append(item())
            if self.accept(close):
                return out
            self.expect(",")


def _chain_order(tok: Token) -> int:
    m = re.fullmatch(r"L(\d+)", tok.text)
    if not m or int(m.group(1)) < 2:
        raise SpecError(f"{tok.text!r} is not a chain name (L2, L3, ...)", tok.line, tok.col)
    return int(m.group(1))


def _on_grid(tok: Token, order: int) -> int:
    q = Fraction(tok.text)
    k = q * (order - 1)
    if k.denominator != 1 or not 0 <= k <= order - 1:
        raise SpecError(f"value {tok.text} is not on the grid of L{order}", tok.line, tok.col)
    return int(k)


class Parser:
    def __init__(self):
        self.doc = SpecDocument()

    # -- references

    def _declare(self, tok: Token, kind: str, value) -> None:
        prev = self.doc.declarations.get(tok.text)
        if prev is not None:
            raise SpecError(f"duplicate name {tok.text!r} (first declared at {prev.line}:{prev.col})",
                            tok.line, tok.col)
        self.doc.declarations[tok.text] = Decl(kind, tok.text, tok.line, tok.col, value)

    def _ref(self, tok: Token, *kinds: str) -> Decl:
        d = self.doc.declarations.get(tok.text)
        if d is None:
            raise SpecError(f"unresolved reference {tok.text!r}", tok.line, tok.col)
        if d.kind not in kinds:
            raise SpecError(f"{tok.text!r} is a {d.kind}, expected {' or '.join(kinds)}", tok.line, tok.col)
        return d

    def _chain(self, s: _Stream) -> Chain:
        return self._ref(s.name(), "chain").value

    def _signature(self, s: _Stream) -> ProductSignature:
        d = self._ref(s.name(), "chain", "product")
        return ProductSignature((d.value.order,)) if d.kind == "chain" else d.value

    def _table(self, s: _Stream, orders: tuple, fuzzy_ok: tuple | None = None) -> tuple:
        """``(v, v, ...)``, a bare value for one coordinate, or a fuzzy name."""
        t = s.peek()
        if t is not None and t.kind == "name" and fuzzy_ok is not None:
            s.next()
            d = self._ref(t, "fuzzy")
            if d.value[0] != fuzzy_ok:
                raise SpecError(f"fuzzy subset {t.text!r} lives on another space", t.line, t.col)
            return d.value[1]
        if t is not None and t.kind == "num" and len(orders) == 1:
            return (_on_grid(s.next(), orders[0]),)
        start = s.expect("(")
        vals = []
        while True:
            vals.append(s.number())
            if s.accept(")"):
                break
            s.expect(",")
        if len(vals) != len(orders):
            raise SpecError(f"expected {len(orders)} coordinates, found {len(vals)}", start.line, start.col)
        return tuple(_on_grid(v, o) for v, o in zip(vals, orders))

    def _points(self, s: _Stream) -> tuple:
        return self._ref(s.name(), "points").value

    # -- statements

    def statement(self, toks: list[Token]) -> None:
        s = _Stream(toks)
        head = s.name()
        handler = getattr(self, "_st_" + head.text, None)
        if handler is None:
            raise SpecError(f"unknown statement {head.text!r}", head.line, head.col)
        handler(s)
        s.done()

    def _st_chain(self, s: _Stream) -> None:
        t = s.name()
        self._declare(t, "chain", Chain(_chain_order(t)))

    def _st_product(self, s: _Stream) -> None:
        t = s.name()
        s.expect("=")
        orders = [self._chain(s).order]
        while s.peek() is not None:
            x = s.name()
            if x.text != "x":
                raise SpecError(f"expected 'x', found {x.text!r}", x.line, x.col)
            orders.append(self._chain(s).order)
        self._declare(t, "product", ProductSignature(tuple(orders)))

    def _st_algebra(self, s: _Stream) -> None:
        t = s.name()
        s.expect("=")
        how = s.name()
        sig = self._signature(s)
        if how.text == "full":
            A: FiniteMvAlgebra = full_product(*sig.orders, name=t.text)
        elif how.text == "gen":
            gens = s.listed(lambda: self._table(s, sig.orders))
            A = generate_subalgebra(sig, gens, name=t.text)
        else:
            raise SpecError(f"expected 'full' or 'gen', found {how.text!r}", how.line, how.col)
        self._declare(t, "algebra", A)

    def _st_points(self, s: _Stream) -> None:
        t = s.name()
        s.expect("=")
        pts = s.listed(s.name)
        seen = set()
        for p in pts:
            if p.text in seen:
                raise SpecError(f"point {p.text!r} listed twice", p.line, p.col)
            seen.add(p.text)
        if not pts:
            raise SpecError("a point set needs at least one point", t.line, t.col)
        self._declare(t, "points", tuple(p.text for p in pts))

    def _st_fuzzy(self, s: _Stream) -> None:
        t = s.name()
        s.expect("on")
        pts = self._points(s)
        s.expect("over")
        chain = self._chain(s)
        s.expect("=")
        table = self._table(s, (chain.order,) * len(pts))
        self._declare(t, "fuzzy", ((pts, chain.order), table))

    def _st_metric(self, s: _Stream) -> None:
        t = s.name()
        s.expect("on")
        pts = self._points(s)
        s.expect("=")

        def entry():
            s.expect("(")
            x, y = s.name(), None
            s.expect(",")
            y = s.name()
            s.expect(")")
            for p in (x, y):
                if p.text not in pts:
                    raise SpecError(f"{p.text!r} is not a point of the metric space", p.line, p.col)
            s.expect(":")
            return (x.text, y.text), Fraction(s.number().text)

        self._declare(t, "metric", (pts, dict(s.listed(entry))))

    def _st_topology(self, s: _Stream) -> None:
        t = s.name()
        if s.accept("="):
            form = s.name()
            if form.text != "dual":
                raise SpecError(f"expected 'dual' or 'on', found {form.text!r}", form.line, form.col)
            a = s.name()
            self._ref(a, "algebra")
            self._declare(t, "topology", TopologySource((), Chain(2), "dual", algebra=a.text))
            return
        s.expect("on")
        pts = self._points(s)
        s.expect("over")
        chain = self._chain(s)
        s.expect("=")
        form = s.name()
        orders = (chain.order,) * len(pts)
        src = TopologySource(pts, chain, form.text)
        if form.text in ("opens", "base"):
            src.tables = tuple(s.listed(lambda: self._table(s, orders, (pts, chain.order))))
        elif form.text == "balls":
            m = s.name()
            d = self._ref(m, "metric")
            if d.value[0] != pts:
                raise SpecError(f"metric {m.text!r} is on another point set", m.line, m.col)
            src.metric = m.text
            s.expect("radii")
            src.radii = tuple(Fraction(r.text) for r in s.listed(s.number))
        elif form.text not in ("discrete", "indiscrete", "full"):
            raise SpecError(f"unknown topology form {form.text!r}", form.line, form.col)
        self._declare(t, "topology", src)

    def _st_map(self, s: _Stream) -> None:
        t = s.name()
        s.expect(":")
        src = self._points(s)
        s.expect("->")
        dst = self._points(s)
        s.expect("=")

        def entry():
            x = s.name()
            s.expect(":")
            y = s.name()
            if x.text not in src:
                raise SpecError(f"{x.text!r} is not a source point", x.line, x.col)
            if y.text not in dst:
                raise SpecError(f"{y.text!r} is not a target point", y.line, y.col)
            return x.text, y.text

        pairs = s.listed(entry)
        assign = dict(pairs)
        missing = [x for x in src if x not in assign]
        if missing or len(assign) != len(pairs):
            raise SpecError(f"map must assign each source point once (missing {missing})", t.line, t.col)
        self._declare(t, "map", (src, dst, assign))

    def _st_boolen(self, s: _Stream) -> None:
        t = s.name()
        s.expect("=")
        s.expect("atoms")
        k_tok = s.number()
        s.expect("n")
        n_tok = s.number()
        k, n = int(k_tok.text), int(n_tok.text)
        if not 1 <= k <= 26:
            raise SpecError("atom count must be between 1 and 26", k_tok.line, k_tok.col)
        if n < 2:
            raise SpecError("n must be at least 2", n_tok.line, n_tok.col)
        B = FiniteBooleanAlgebra(k)
        s.expect("ideals")

        def element():
            first = s.next()
            text = first.text
            while s.accept("|"):
                text += "|" + s.name().text
            try:
                return B.parse(text)
            except MvError as e:
                raise SpecError(str(e), first.line, first.col) from None

        ideals = []
        while s.peek() is not None:
            ideals.append(frozenset(s.listed(element)))
        if len(ideals) != n - 1:
            raise SpecError(f"expected {n - 1} ideals, found {len(ideals)}", t.line, t.col)
        self._declare(t, "boolen", BooleNSource(B, n, tuple(ideals)))

    def _st_supernatural(self, s: _Stream) -> None:
        t = s.name()
        s.expect("=")
        parts = []
        while True:
            p = s.number()
            text = p.text
            if s.accept("^"):
                e = s.next()
                text += "^" + e.text
            parts.append((p, text))
            if not s.accept("*"):
                break
        try:
            value = Supernatural.parse("*".join(x for _, x in parts))
        except (ValueError, ZeroDivisionError) as e:
            raise SpecError(str(e), parts[0][0].line, parts[0][0].col) from None
        self._declare(t, "supernatural", value)

    def _st_check(self, s: _Stream) -> None:
        cmd = s.name()
        kinds = COMMANDS.get(cmd.text)
        if kinds is None:
            raise SpecError(f"unknown command {cmd.text!r}", cmd.line, cmd.col)
        args = []
        for kind in kinds:
            if kind == "int":
                n = s.number()
                if "/" in n.text or int(n.text) < 1:
                    raise SpecError("expected a positive integer", n.line, n.col)
                args.append(int(n.text))
            else:
                a = s.name()
                self._ref(a, kind)
                args.append(a.text)
        self.doc.checks.append(CheckStmt(cmd.text, tuple(args), cmd.line, cmd.col))


def parse_spec(text: str) -> SpecDocument:
    p = Parser()
    for stmt in tokenize(text):
        p.statement(stmt)
    return p.doc
