"""Syntax tree, lexer and recursive-descent parser for ``.rl`` programs.

Grammar::

    program  := decl*
    decl     := "universe" NAME "=" "{" NAME ("," NAME)* "}"
              | "relation" NAME ":" NAME "->" NAME "=" "{" [pair ("," pair)*] "}"
              | "operator" NAME "on" NAME ["->" NAME] "=" opexpr
    pair     := "(" NAME "," NAME ")"
    opexpr   := primary ("." primary)*            # left-associative
    primary  := ("angel" | "demon" | "ortho") "(" relexpr ")"
              | "dual" "(" opexpr ")" | "id" | "(" opexpr ")"
              | ("interior_from" | "closure_from") family
              | "table" "{" [subset "->" subset ("," ...)*] "}"
    relexpr  := NAME | ("conv" | "not") "(" relexpr ")"
    family   := "{" [subset ("," subset)*] "}"
    subset   := "{" [NAME ("," NAME)*] "}"

``F . G`` applies ``G`` first.  ``#`` starts a comment.  Parsing also checks
names and universes, so a returned :class:`Program` is well formed.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from ..errors import PTError

KEYWORDS = frozenset(
    "universe relation operator on angel demon ortho dual id interior_from closure_from table conv not".split()
)


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


class DslError(PTError):
    def __init__(self, message: str, span: Span | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        return f"{self.span}: {self.message}" if self.span else self.message


class DslSyntaxError(DslError):
    def __init__(self, message: str, span: Span | None = None, expected: frozenset[str] = frozenset()) -> None:
        if expected:
            message = f"{message}; expected one of: {', '.join(sorted(expected))}"
        super().__init__(message, span)
        self.expected = expected


class DuplicateName(DslError):
    pass


class UnknownName(DslError):
    pass


class TypeMismatch(DslError):
    pass


# --- tree ------------------------------------------------------------------


def _nospan():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class RName:
    name: str
    span: Optional[Span] = _nospan()


@dataclass(frozen=True)
class RConv:
    arg: RelNode
    span: Optional[Span] = _nospan()


@dataclass(frozen=True)
class RNot:
    arg: RelNode
    span: Optional[Span] = _nospan()


RelNode = Union[RName, RConv, RNot]

Subset = tuple[str, ...]


@dataclass(frozen=True)
class ORel:
    kind: str
    rel: RelNode
    span: Optional[Span] = _nospan()


@dataclass(frozen=True)
class OCompose:
    outer: OpNode
    inner: OpNode
    span: Optional[Span] = _nospan()


@dataclass(frozen=True)
class ODual:
    arg: OpNode
    span: Optional[Span] = _nospan()


@dataclass(frozen=True)
class OId:
    span: Optional[Span] = _nospan()


@dataclass(frozen=True)
class OFamily:
    kind: str  # "interior" or "closure"
    members: tuple[Subset, ...]
    span: Optional[Span] = _nospan()
    member_spans: tuple[Span, ...] = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class OTable:
    entries: tuple[tuple[Subset, Subset], ...]
    span: Optional[Span] = _nospan()
    entry_spans: tuple[tuple[Span, Span], ...] = field(default=(), compare=False, repr=False)


OpNode = Union[ORel, OCompose, ODual, OId, OFamily, OTable]


@dataclass(frozen=True)
class UniverseDecl:
    name: str
    labels: tuple[str, ...]
    span: Optional[Span] = _nospan()


@dataclass(frozen=True)
class RelationDecl:
    name: str
    source: str
    target: str
    pairs: tuple[tuple[str, str], ...]
    span: Optional[Span] = _nospan()
    name_spans: tuple[Span, ...] = field(default=(), compare=False, repr=False)
    pair_spans: tuple[tuple[Span, Span], ...] = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class OperatorDecl:
    name: str
    domain: str
    codomain: str
    expr: OpNode
    span: Optional[Span] = _nospan()
    name_spans: tuple[Span, ...] = field(default=(), compare=False, repr=False)


Decl = Union[UniverseDecl, RelationDecl, OperatorDecl]


@dataclass(frozen=True)
class Program:
    decls: tuple[Decl, ...] = ()

    def find(self, name: str) -> Decl | None:
        for d in self.decls:
            if d.name == name:
                return d
        return None


# --- lexer -----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>\#[^\n]*)"
    r"|(?P<name>[A-Za-z0-9_]+)|(?P<arrow>->)|(?P<punct>[{}(),:=.])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "punct" (value is the symbol) or "eof"
    value: str
    span: Span


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", Span(line, col, line, col + 1))
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind == "name":
            tokens.append(Token("name", value, Span(line, col, line, col + len(value))))
        elif kind in ("arrow", "punct"):
            tokens.append(Token("punct", value, Span(line, col, line, col + len(value))))
        pos = m.end()
    col = pos - line_start + 1
    tokens.append(Token("eof", "", Span(line, col, line, col)))
    return tokens


# --- parser ----------------------------------------------------------------


def _join(a: Span, b: Span) -> Span:
    return Span(a.line, a.col, b.end_line, b.end_col)


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def _describe(self, tok: Token) -> str:
        return "end of input" if tok.kind == "eof" else repr(tok.value)

    def fail(self, expected: set[str] | frozenset[str]) -> DslSyntaxError:
        return DslSyntaxError(f"unexpected {self._describe(self.tok)}", self.tok.span, frozenset(expected))

    def at(self, value: str) -> bool:
        t = self.tok
        return t.kind != "eof" and t.value == value

    def expect(self, value: str) -> Token:
        if not self.at(value):
            raise self.fail({repr(value)})
        t = self.tok
        self.i += 1
        return t

    def name(self, what: str = "NAME", reserved_ok: bool = True) -> Token:
        t = self.tok
        if t.kind != "name":
            raise self.fail({what})
        if not reserved_ok and t.value in KEYWORDS:
            raise DslSyntaxError(f"{t.value!r} is a reserved word", t.span, frozenset({what}))
        self.i += 1
        return t

    def sep_list(self, item, close: str, allow_empty: bool = True) -> list:
        out = []
        if self.at(close) and allow_empty:
            return out
        out.append(item())
        while self.at(","):
            self.i += 1
            out.append(item())
        if not self.at(close):
            raise self.fail({"','", repr(close)})
        return out

    # declarations

    def program(self) -> Program:
        decls = []
        while self.tok.kind != "eof":
            if self.at("universe"):
                decls.append(self.universe())
            elif self.at("relation"):
                decls.append(self.relation())
            elif self.at("operator"):
                decls.append(self.operator())
            else:
                raise self.fail({"'universe'", "'relation'", "'operator'"})
        return Program(tuple(decls))

    def universe(self) -> UniverseDecl:
        start = self.expect("universe")
        name = self.name("universe name", reserved_ok=False)
        self.expect("=")
        self.expect("{")
        labels = self.sep_list(lambda: self.name("element name"), "}", allow_empty=False)
        end = self.expect("}")
        return UniverseDecl(name.value, tuple(t.value for t in labels), _join(start.span, end.span))

    def pair(self) -> tuple[Token, Token]:
        self.expect("(")
        a = self.name("element name")
        self.expect(",")
        b = self.name("element name")
        self.expect(")")
        return a, b

    def relation(self) -> RelationDecl:
        start = self.expect("relation")
        name = self.name("relation name", reserved_ok=False)
        self.expect(":")
        src = self.name("universe name")
        self.expect("->")
        dst = self.name("universe name")
        self.expect("=")
        self.expect("{")
        pairs = self.sep_list(self.pair, "}")
        end = self.expect("}")
        return RelationDecl(
            name.value, src.value, dst.value, tuple((a.value, b.value) for a, b in pairs),
            _join(start.span, end.span),
            name_spans=(src.span, dst.span),
            pair_spans=tuple((a.span, b.span) for a, b in pairs),
        )

    def operator(self) -> OperatorDecl:
        start = self.expect("operator")
        name = self.name("operator name", reserved_ok=False)
        self.expect("on")
        dom = self.name("universe name")
        cod = dom
        if self.at("->"):
            self.i += 1
            cod = self.name("universe name")
        self.expect("=")
        expr = self.opexpr()
        return OperatorDecl(name.value, dom.value, cod.value, expr, _join(start.span, expr.span),
                            name_spans=(dom.span, cod.span))

    # expressions

    _PRIMARY_START = frozenset(
        {"'angel'", "'demon'", "'ortho'", "'dual'", "'id'", "'interior_from'", "'closure_from'", "'table'", "'('"}
    )

    def opexpr(self) -> OpNode:
        left = self.primary()
        while self.at("."):
            self.i += 1
            right = self.primary()
            left = OCompose(left, right, _join(left.span, right.span))
        return left

    def primary(self) -> OpNode:
        t = self.tok
        if t.kind == "name" and t.value in ("angel", "demon", "ortho"):
            self.i += 1
            self.expect("(")
            rel = self.relexpr()
            end = self.expect(")")
            return ORel(t.value, rel, _join(t.span, end.span))
        if self.at("dual"):
            self.i += 1
            self.expect("(")
            arg = self.opexpr()
            end = self.expect(")")
            return ODual(arg, _join(t.span, end.span))
        if self.at("id"):
            self.i += 1
            return OId(t.span)
        if self.at("("):
            self.i += 1
            inner = self.opexpr()
            self.expect(")")
            return inner
        if t.kind == "name" and t.value in ("interior_from", "closure_from"):
            self.i += 1
            self.expect("{")
            members = self.sep_list(self.subset, "}")
            end = self.expect("}")
            kind = "interior" if t.value == "interior_from" else "closure"
            return OFamily(kind, tuple(m for m, _ in members), _join(t.span, end.span),
                           member_spans=tuple(sp for _, sp in members))
        if self.at("table"):
            self.i += 1
            self.expect("{")
            entries = self.sep_list(self.table_entry, "}")
            end = self.expect("}")
            return OTable(tuple((a[0], b[0]) for a, b in entries), _join(t.span, end.span),
                          entry_spans=tuple((a[1], b[1]) for a, b in entries))
        raise self.fail(self._PRIMARY_START)

    def table_entry(self):
        a = self.subset()
        self.expect("->")
        b = self.subset()
        return a, b

    def subset(self) -> tuple[Subset, Span]:
        start = self.expect("{")
        names = self.sep_list(lambda: self.name("element name"), "}")
        end = self.expect("}")
        return tuple(t.value for t in names), _join(start.span, end.span)

    def relexpr(self) -> RelNode:
        t = self.tok
        if t.kind == "name" and t.value in ("conv", "not") and self.tokens[self.i + 1].value == "(":
            self.i += 2
            arg = self.relexpr()
            end = self.expect(")")
            cls = RConv if t.value == "conv" else RNot
            return cls(arg, _join(t.span, end.span))
        name = self.name("relation name")
        return RName(name.value, name.span)


# --- well-formedness -------------------------------------------------------


class _Checker:
    """Names declared before use, unique per kind; universes agree."""

    def __init__(self) -> None:
        self.universes: dict[str, tuple[str, ...]] = {}
        self.relations: dict[str, tuple[str, str]] = {}
        self.operators: dict[str, tuple[str, str]] = {}

    def universe_ref(self, name: str, span: Span) -> None:
        if name not in self.universes:
            raise UnknownName(f"unknown universe {name!r}", span)

    def elements(self, labels: tuple[str, ...], uname: str, span: Span) -> None:
        known = self.universes[uname]
        for label in labels:
            if label not in known:
                raise UnknownName(f"unknown element {label!r} of universe {uname!r}", span)

    def decl(self, d: Decl) -> None:
        if isinstance(d, UniverseDecl):
            if d.name in self.universes:
                raise DuplicateName(f"universe {d.name!r} already declared", d.span)
            seen: set[str] = set()
            for label in d.labels:
                if label in seen:
                    raise DuplicateName(f"duplicate element {label!r} in universe {d.name!r}", d.span)
                seen.add(label)
            self.universes[d.name] = d.labels
        elif isinstance(d, RelationDecl):
            if d.name in self.relations:
                raise DuplicateName(f"relation {d.name!r} already declared", d.span)
            self.universe_ref(d.source, d.name_spans[0])
            self.universe_ref(d.target, d.name_spans[1])
            for (a, b), (sa, sb) in zip(d.pairs, d.pair_spans):
                self.elements((a,), d.source, sa)
                self.elements((b,), d.target, sb)
            self.relations[d.name] = (d.source, d.target)
        else:
            if d.name in self.operators:
                raise DuplicateName(f"operator {d.name!r} already declared", d.span)
            self.universe_ref(d.domain, d.name_spans[0])
            self.universe_ref(d.codomain, d.name_spans[1])
            got = self.infer(d.expr, d.domain, d.codomain)
            if got != d.codomain:
                raise TypeMismatch(
                    f"operator {d.name!r} is declared into {d.codomain!r} but its expression yields {got!r}",
                    d.expr.span,
                )
            self.operators[d.name] = (d.domain, d.codomain)

    def rel_type(self, r: RelNode) -> tuple[str, str]:
        if isinstance(r, RName):
            if r.name not in self.relations:
                raise UnknownName(f"unknown relation {r.name!r}", r.span)
            return self.relations[r.name]
        src, dst = self.rel_type(r.arg)
        return (dst, src) if isinstance(r, RConv) else (src, dst)

    def infer(self, e: OpNode, dom: str, want: str | None) -> str:
        """Codomain of ``e`` applied to subsets of ``dom``."""
        if isinstance(e, ORel):
            src, dst = self.rel_type(e.rel)
            if dst != dom:
                raise TypeMismatch(f"{e.kind}(...) takes subsets of {dst!r}, given subsets of {dom!r}", e.span)
            return src
        if isinstance(e, OCompose):
            mid = self.infer(e.inner, dom, None)
            return self.infer(e.outer, mid, want)
        if isinstance(e, ODual):
            cod = self.infer(e.arg, dom, dom)
            if cod != dom:
                raise TypeMismatch(f"dual needs an endo-operator, got {dom!r} -> {cod!r}", e.span)
            return dom
        if isinstance(e, OId):
            return dom
        if isinstance(e, OFamily):
            for members, span in zip(e.members, e.member_spans):
                self.elements(members, dom, span)
            return dom
        if isinstance(e, OTable):
            cod = want or dom
            for (a, b), (sa, sb) in zip(e.entries, e.entry_spans):
                self.elements(a, dom, sa)
                self.elements(b, cod, sb)
            n = len(self.universes[dom])
            keys = [frozenset(a) for a, _ in e.entries]
            if len(set(keys)) != len(keys):
                raise TypeMismatch("table lists an input twice", e.span)
            if len(keys) != 1 << n:
                raise TypeMismatch(f"table has {len(keys)} entries, needs all {1 << n} subsets of {dom!r}", e.span)
            return cod
        raise TypeError(f"not an operator node: {e!r}")


def parse(text: str) -> Program:
    """Parse and check a program; raises a :class:`DslError` subclass."""
    program = _Parser(text).program()
    checker = _Checker()
    for d in program.decls:
        checker.decl(d)
    return program


def iter_names(p: Program) -> Iterator[tuple[str, str]]:
    """``(kind, name)`` for every declaration."""
    for d in p.decls:
        kind = {UniverseDecl: "universe", RelationDecl: "relation", OperatorDecl: "operator"}[type(d)]
        yield kind, d.name
