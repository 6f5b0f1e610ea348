"""The constraint language: AST, concrete syntax, parser and renderer.

Formulas are immutable trees built from boolean connectives, three tree
modalities (``up``, ``down`` and the variable-arity ``bullet``), one
feature modality per feature name, the ``zoomin`` modality crossing from
the tree into the feature graph, and a path-equality construct that
relates a tree-walk-then-zoomin-then-feature-walk on its left to the
same kind of composite on its right.

Concrete syntax (EBNF; also in the README):

    formula   = iff ;
    iff       = implies , [ "<->" , iff ] ;
    implies   = or , [ "->" , implies ] ;
    or        = and , { "|" , and } ;
    and       = unary , { "&" , unary } ;
    unary     = "!" , unary
              | treewalk                    (* path equality or modal chain *)
              | "<" , FEAT , ">" , unary
              | primary ;
    treewalk  = { "up" | "down" } , "zoomin" , { FEAT } ,
                [ "~" , { "up" | "down" } , "zoomin" , { FEAT } ]
              | ( "up" | "down" ) , unary ;
    primary   = "true" | "false" | "cstruct" | "fstruct"
              | "bullet" , "(" , formula , { "," , formula } , ")"
              | "(" , formula , ")"
              | IDENT | QUOTED ;

A treewalk that reaches ``~`` is a path equality; otherwise the
collected steps are ordinary modalities (and in that case no bare
feature names may follow ``zoomin``).  Bare identifiers are resolved
against the signature: category first, then atom, then word form.
Quoted strings are always word forms.  ``<up>``, ``<down>`` and
``<zoomin>`` are accepted as alternate spellings of the bare keywords.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormulaSyntaxError, SignatureError
from .model import _IDENT_RE, RESERVED_WORDS, Signature


@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True)
class CStructConst(Formula):
    pass


@dataclass(frozen=True)
class FStructConst(Formula):
    pass


@dataclass(frozen=True)
class CatLit(Formula):
    name: str


@dataclass(frozen=True)
class AtomLit(Formula):
    name: str


@dataclass(frozen=True)
class WordLit(Formula):
    """Terminal word form used as a literal; true at leaves carrying it."""

    name: str


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Feat(Formula):
    feat: str
    sub: Formula


@dataclass(frozen=True)
class Up(Formula):
    sub: Formula


@dataclass(frozen=True)
class Down(Formula):
    sub: Formula


@dataclass(frozen=True)
class Zoomin(Formula):
    sub: Formula


@dataclass(frozen=True)
class Bullet(Formula):
    args: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) < 1:
            raise ValueError("bullet needs at least one argument")


@dataclass(frozen=True)
class PathEq(Formula):
    """``left_tree zoomin left_feats ~ right_tree zoomin right_feats``.

    Tree parts are sequences over {"up", "down"}; feature parts are
    feature-name sequences.  All four may be empty.
    """

    left_tree: tuple[str, ...] = ()
    left_feats: tuple[str, ...] = ()
    right_tree: tuple[str, ...] = ()
    right_feats: tuple[str, ...] = ()

    def __post_init__(self):
        for attr in ("left_tree", "left_feats", "right_tree", "right_feats"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        for step in self.left_tree + self.right_tree:
            if step not in ("up", "down"):
                raise ValueError("tree step must be 'up' or 'down', got %r" % step)


TRUE = TrueF()
FALSE = FalseF()
CSTRUCT = CStructConst()
FSTRUCT = FStructConst()


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_KEYWORDS = RESERVED_WORDS  # true false cstruct fstruct up down zoomin bullet


@dataclass(frozen=True)
class _Tok:
    kind: str  # KW OP IDENT STRING FEATMOD EOF
    value: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def err(msg, l=None, c=None):
        raise FormulaSyntaxError(msg, l if l is not None else line, c if c is not None else col)

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        start_line, start_col = line, col
        if ch == "<":
            if text.startswith("<->", i):
                toks.append(_Tok("OP", "<->", start_line, start_col))
                i += 3
                col += 3
                continue
            j = i + 1
            while j < n and text[j] not in ">\n":
                j += 1
            if j >= n or text[j] != ">":
                err("unterminated '<'")
            name = text[i + 1 : j].strip()
            if not _IDENT_RE.match(name):
                err("expected a feature name inside '<...>', got %r" % name)
            if name in ("up", "down", "zoomin"):
                toks.append(_Tok("KW", name, start_line, start_col))
            else:
                toks.append(_Tok("FEATMOD", name, start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if text.startswith("->", i):
            toks.append(_Tok("OP", "->", start_line, start_col))
            i += 2
            col += 2
            continue
        if ch in "!&|(),~":
            toks.append(_Tok("OP", ch, start_line, start_col))
            i += 1
            col += 1
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] not in '"\n':
                j += 1
            if j >= n or text[j] != '"':
                err("unterminated string literal")
            toks.append(_Tok("STRING", text[i + 1 : j], start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "KW" if word in _KEYWORDS else "IDENT"
            toks.append(_Tok(kind, word, start_line, start_col))
            col += j - i
            i = j
            continue
        err("unexpected character %r" % ch)
    toks.append(_Tok("EOF", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, toks: list[_Tok], sig: Signature):
        self.toks = toks
        self.pos = 0
        self.sig = sig

    @property
    def cur(self) -> _Tok:
        return self.toks[self.pos]

    def advance(self) -> _Tok:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def at(self, kind, value=None) -> bool:
        t = self.cur
        return t.kind == kind and (value is None or t.value == value)

    def expect(self, kind, value=None) -> _Tok:
        if not self.at(kind, value):
            raise FormulaSyntaxError(
                "expected %s, got %r" % (value or kind, self.cur.value or "end of input"),
                self.cur.line,
                self.cur.col,
            )
        return self.advance()

    def err(self, msg):
        raise FormulaSyntaxError(msg, self.cur.line, self.cur.col)

    # precedence climbing, loosest first
    def parse_formula(self) -> Formula:
        left = self.parse_implies()
        if self.at("OP", "<->"):
            self.advance()
            return Iff(left, self.parse_formula())
        return left

    def parse_implies(self) -> Formula:
        left = self.parse_or()
        if self.at("OP", "->"):
            self.advance()
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self) -> Formula:
        f = self.parse_and()
        while self.at("OP", "|"):
            self.advance()
            f = Or(f, self.parse_and())
        return f

    def parse_and(self) -> Formula:
        f = self.parse_unary()
        while self.at("OP", "&"):
            self.advance()
            f = And(f, self.parse_unary())
        return f

    def parse_unary(self) -> Formula:
        if self.at("OP", "!"):
            self.advance()
            return Not(self.parse_unary())
        if self.at("KW", "up") or self.at("KW", "down") or self.at("KW", "zoomin"):
            return self.parse_treewalk()
        if self.cur.kind == "FEATMOD":
            t = self.advance()
            if t.value not in self.sig.feats:
                raise SignatureError("unknown feature %r" % t.value, t.line, t.col)
            return Feat(t.value, self.parse_unary())
        return self.parse_primary()

    def parse_treewalk(self) -> Formula:
        steps: list[str] = []
        while self.at("KW", "up") or self.at("KW", "down"):
            steps.append(self.advance().value)
        if not self.at("KW", "zoomin"):
            # a plain modal chain like "up down phi"
            sub = self.parse_unary()
            for step in reversed(steps):
                sub = Up(sub) if step == "up" else Down(sub)
            return sub
        self.advance()  # zoomin
        feats: list[str] = []
        while self.cur.kind == "IDENT" and self.cur.value in self.sig.feats:
            feats.append(self.advance().value)
        if self.at("OP", "~"):
            self.advance()
            rtree: list[str] = []
            while self.at("KW", "up") or self.at("KW", "down"):
                rtree.append(self.advance().value)
            self.expect("KW", "zoomin")
            rfeats: list[str] = []
            while self.cur.kind == "IDENT" and self.cur.value in self.sig.feats:
                rfeats.append(self.advance().value)
            return PathEq(tuple(steps), tuple(feats), tuple(rtree), tuple(rfeats))
        if feats:
            self.err("expected '~' after the feature path of a path equality")
        # modal chain ending in a zoomin modality
        sub = Zoomin(self.parse_unary())
        for step in reversed(steps):
            sub = Up(sub) if step == "up" else Down(sub)
        return sub

    def parse_primary(self) -> Formula:
        t = self.cur
        if t.kind == "KW":
            if t.value == "true":
                self.advance()
                return TRUE
            if t.value == "false":
                self.advance()
                return FALSE
            if t.value == "cstruct":
                self.advance()
                return CSTRUCT
            if t.value == "fstruct":
                self.advance()
                return FSTRUCT
            if t.value == "bullet":
                self.advance()
                self.expect("OP", "(")
                args = [self.parse_formula()]
                while self.at("OP", ","):
                    self.advance()
                    args.append(self.parse_formula())
                self.expect("OP", ")")
                return Bullet(tuple(args))
            self.err("unexpected keyword %r" % t.value)
        if t.kind == "OP" and t.value == "(":
            self.advance()
            f = self.parse_formula()
            self.expect("OP", ")")
            return f
        if t.kind == "STRING":
            self.advance()
            if t.value not in self.sig.words:
                raise SignatureError("unknown word form %r" % t.value, t.line, t.col)
            return WordLit(t.value)
        if t.kind == "IDENT":
            self.advance()
            kind = self.sig.kind_of(t.value)
            if kind == "cat":
                return CatLit(t.value)
            if kind == "atom":
                return AtomLit(t.value)
            if kind == "word":
                return WordLit(t.value)
            if t.value in self.sig.feats:
                raise SignatureError(
                    "feature %r cannot stand alone; write <%s> phi or use it "
                    "inside a path equality" % (t.value, t.value),
                    t.line,
                    t.col,
                )
            raise SignatureError("unknown name %r" % t.value, t.line, t.col)
        self.err("expected a formula, got %r" % (t.value or "end of input"))


def parse_formula(text: str, sig: Signature) -> Formula:
    """Parse concrete syntax into an AST, resolving names against ``sig``."""
    parser = _Parser(_tokenize(text), sig)
    f = parser.parse_formula()
    if parser.cur.kind != "EOF":
        parser.err("trailing input after formula")
    return f


# ---------------------------------------------------------------------------
# Renderer
# ---------------------------------------------------------------------------

_LEAVES = (TrueF, FalseF, CStructConst, FStructConst, CatLit, AtomLit, WordLit)


def _leaf_text(f: Formula) -> str:
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, CStructConst):
        return "cstruct"
    if isinstance(f, FStructConst):
        return "fstruct"
    if isinstance(f, (CatLit, AtomLit)):
        return f.name
    if isinstance(f, WordLit):
        return '"%s"' % f.name  # quoting keeps words distinct from atom/cat names
    raise TypeError(f)


def _operand(f: Formula) -> str:
    if isinstance(f, _LEAVES):
        return _leaf_text(f)
    return "(%s)" % render_formula(f)


def render_formula(f: Formula) -> str:
    """Render to concrete syntax; the output re-parses to an equal AST."""
    if isinstance(f, _LEAVES):
        return _leaf_text(f)
    if isinstance(f, Not):
        return "!(%s)" % render_formula(f.sub)
    if isinstance(f, And):
        return "(%s & %s)" % (render_formula(f.left), render_formula(f.right))
    if isinstance(f, Or):
        return "(%s | %s)" % (render_formula(f.left), render_formula(f.right))
    if isinstance(f, Implies):
        return "(%s -> %s)" % (render_formula(f.left), render_formula(f.right))
    if isinstance(f, Iff):
        return "(%s <-> %s)" % (render_formula(f.left), render_formula(f.right))
    if isinstance(f, Up):
        return "up %s" % _operand(f.sub)
    if isinstance(f, Down):
        return "down %s" % _operand(f.sub)
    if isinstance(f, Zoomin):
        return "zoomin %s" % _operand(f.sub)
    if isinstance(f, Feat):
        return "<%s> %s" % (f.feat, _operand(f.sub))
    if isinstance(f, Bullet):
        return "bullet(%s)" % ", ".join(render_formula(a) for a in f.args)
    if isinstance(f, PathEq):
        left = " ".join(list(f.left_tree) + ["zoomin"] + list(f.left_feats))
        right = " ".join(list(f.right_tree) + ["zoomin"] + list(f.right_feats))
        return "(%s ~ %s)" % (left, right)
    raise TypeError("not a formula: %r" % (f,))


def validate_names(f: Formula, sig: Signature) -> None:
    """Raise :class:`SignatureError` unless every name in ``f`` is declared."""
    if isinstance(f, CatLit):
        if f.name not in sig.cats:
            raise SignatureError("unknown category %r" % f.name)
    elif isinstance(f, AtomLit):
        if f.name not in sig.atoms:
            raise SignatureError("unknown atom %r" % f.name)
    elif isinstance(f, WordLit):
        if f.name not in sig.words:
            raise SignatureError("unknown word form %r" % f.name)
    elif isinstance(f, Feat):
        if f.feat not in sig.feats:
            raise SignatureError("unknown feature %r" % f.feat)
        validate_names(f.sub, sig)
    elif isinstance(f, Not):
        validate_names(f.sub, sig)
    elif isinstance(f, (And, Or, Implies, Iff)):
        validate_names(f.left, sig)
        validate_names(f.right, sig)
    elif isinstance(f, (Up, Down, Zoomin)):
        validate_names(f.sub, sig)
    elif isinstance(f, Bullet):
        for a in f.args:
            validate_names(a, sig)
    elif isinstance(f, PathEq):
        for name in f.left_feats + f.right_feats:
            if name not in sig.feats:
                raise SignatureError("unknown feature %r" % name)
