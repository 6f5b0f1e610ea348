"""Parsing as bounded model finding.

``parse_sentence`` enumerates, up to explicit bounds, the models of a
compiled theory whose tree yield equals the input tokens and whose root
carries the start category.  The strategy is the classical two-phase
one:

1. enumerate candidate trees from the context-free skeleton of the
   rules (annotations ignored), each token sitting under a preterminal
   licensed by a lexical entry;
2. for each candidate, read the annotations off the chosen rules and
   entries as defining equations over f-structure variables, and close
   them under union-find-style identification with congruence.  A clash
   (two distinct atoms, or an atom on a node with outgoing transitions)
   kills the candidate; otherwise the closure *is* the least solution,
   i.e. the candidate f-structure contains nothing the equations do not
   force.

Semantic forms get one special reading, mirroring how argument lists
behave in LFG proper: ``walk(subj)`` makes the slot ``pred subj`` exist,
and when the local ``subj`` path is itself defined by the other
equations the slot is identified with it (re-entrancy).  The slot never
*creates* the local path; a missing governed function is left for the
completeness axiom to flag.

Every surviving candidate is validated structurally and checked against
the full theory; models that fail are reported as rejections with the
failing formula label and counterexample node.  Survivors are
canonicalized, deduplicated and returned in a deterministic order.
Minimality is a property of this search, not of the satisfaction
relation: ``valid`` itself happily accepts models with junk material.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GrammarError, SignatureError
from .grammar import (
    AnnotatedRule,
    AtomValueSchema,
    Grammar,
    LexEntry,
    PathEqSchema,
    PRED_FEAT,
    REL_FEAT,
    SemForm,
    Theory,
)
from .model import (
    CStructure,
    FStructure,
    Model,
    NodeId,
    canonicalize,
    model_to_text,
    validate_model,
)
from .semantics import valid


@dataclass(frozen=True)
class SearchBounds:
    max_tree_nodes: int = 40
    max_f_nodes: int = 80
    max_models: int = 10

    def __post_init__(self):
        for name in ("max_tree_nodes", "max_f_nodes", "max_models"):
            if getattr(self, name) < 1:
                raise ValueError("%s must be at least 1" % name)


@dataclass(frozen=True)
class Rejection:
    """Why a candidate structure was not returned."""

    reason: str  # "clash" | "structure" | "formula"
    detail: str  # description, or the failing formula label
    node: NodeId | None = None


@dataclass(frozen=True)
class ParseOutcome:
    models: tuple[Model, ...]
    bound_exceeded: bool
    rejections: tuple[Rejection, ...] = ()


# ---------------------------------------------------------------------------
# Context-free skeleton enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _DLex:
    entry: LexEntry


@dataclass(frozen=True)
class _DPhrase:
    rule: AnnotatedRule
    children: tuple


class _SkeletonEnumerator:
    def __init__(self, grammar: Grammar, tokens):
        self.grammar = grammar
        self.tokens = tokens
        self.bound_hit = False
        self.derivable = self._derivable_table()

    def _derivable_table(self):
        """Budget-free derivability of (cat, i, j), by fixpoint (unary
        rule cycles make a single bottom-up pass insufficient)."""
        n = len(self.tokens)
        table: set[tuple[str, int, int]] = set()
        for i, tok in enumerate(self.tokens):
            for entry in self.grammar.lexicon:
                if entry.word == tok:
                    table.add((entry.cat, i, i + 1))
        changed = True
        while changed:
            changed = False
            for rule in self.grammar.rules:
                k = len(rule.rhs)
                for i in range(n):
                    for j in range(i + 1, n + 1):
                        if (rule.lhs, i, j) in table:
                            continue
                        if self._splits_derivable(rule, i, j, table):
                            table.add((rule.lhs, i, j))
                            changed = True
        return table

    def _splits_derivable(self, rule, i, j, table) -> bool:
        def rec(idx, pos):
            if idx == len(rule.rhs):
                return pos == j
            remaining = len(rule.rhs) - idx - 1
            for end in range(pos + 1, j - remaining + 1):
                if (rule.rhs[idx].cat, pos, end) in table and rec(idx + 1, end):
                    return True
            return False

        return rec(0, i)

    def derive(self, cat: str, i: int, j: int, budget: int):
        """All derivations of ``cat`` over tokens[i:j] using at most
        ``budget`` tree nodes, as (derivation, node count) pairs."""
        out = []
        if j - i == 1:
            entries = [
                e
                for e in self.grammar.lexicon
                if e.word == self.tokens[i] and e.cat == cat
            ]
            if entries:
                if budget >= 2:
                    out.extend((_DLex(e), 2) for e in entries)
                else:
                    self.bound_hit = True
        for rule in self.grammar.rules:
            if rule.lhs != cat:
                continue
            if budget < 1 + 2 * (j - i):
                if (cat, i, j) in self.derivable:
                    self.bound_hit = True
                continue
            for children, used in self._sequences(rule, 0, i, j, budget - 1):
                out.append((_DPhrase(rule, children), 1 + used))
        return out

    def _sequences(self, rule, idx, pos, j, avail):
        if idx == len(rule.rhs):
            if pos == j:
                yield (), 0
            return
        remaining = len(rule.rhs) - idx - 1
        for end in range(pos + 1, j - remaining + 1):
            reserve = 2 * (j - end)  # least any continuation can cost
            for d, c in self.derive(rule.rhs[idx].cat, pos, end, avail - reserve):
                for rest, used in self._sequences(rule, idx + 1, end, j, avail - c):
                    yield (d,) + rest, c + used


def _build_tree(deriv):
    """Materialize a derivation as a CStructure with preorder node ids.

    Returns the structure plus the instantiation points: (node, rule,
    daughter ids) triples and (preterminal, entry) pairs.
    """
    labels: dict[NodeId, str] = {}
    daughters: dict[NodeId, tuple[NodeId, ...]] = {}
    phrases = []
    preterminals = []
    counter = [0]

    def walk(d) -> NodeId:
        nid = "n%d" % counter[0]
        counter[0] += 1
        if isinstance(d, _DLex):
            leaf = "n%d" % counter[0]
            counter[0] += 1
            labels[nid] = d.entry.cat
            labels[leaf] = d.entry.word
            daughters[nid] = (leaf,)
            daughters[leaf] = ()
            preterminals.append((nid, d.entry))
        else:
            labels[nid] = d.rule.lhs
            kids = tuple(walk(c) for c in d.children)
            daughters[nid] = kids
            phrases.append((nid, d.rule, kids))
        return nid

    root = walk(deriv)
    return CStructure.build(root, daughters, labels), phrases, preterminals


# ---------------------------------------------------------------------------
# Equation solving (union-find with congruence)
# ---------------------------------------------------------------------------


class _Clash(Exception):
    def __init__(self, detail):
        super().__init__(detail)
        self.detail = detail


class _UnionFind:
    """f-structure skeleton under construction: classes with functional
    transition tables and optional atoms, merged with congruence."""

    def __init__(self):
        self.parent: list[int] = []
        self.trans: list[dict[str, int]] = []
        self.atom: list[str | None] = []

    def make(self) -> int:
        self.parent.append(len(self.parent))
        self.trans.append({})
        self.atom.append(None)
        return len(self.parent) - 1

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int):
        queue = [(i, j)]
        while queue:
            a, b = queue.pop()
            ra, rb = self.find(a), self.find(b)
            if ra == rb:
                continue
            self.parent[rb] = ra
            if self.atom[rb] is not None:
                if self.atom[ra] is None:
                    self.atom[ra] = self.atom[rb]
                elif self.atom[ra] != self.atom[rb]:
                    raise _Clash(
                        "distinct atoms %r and %r forced onto one node"
                        % (self.atom[ra], self.atom[rb])
                    )
            for feat, tgt in self.trans[rb].items():
                if feat in self.trans[ra]:
                    queue.append((self.trans[ra][feat], tgt))
                else:
                    self.trans[ra][feat] = tgt

    def step(self, i: int, feat: str, create: bool):
        r = self.find(i)
        tgt = self.trans[r].get(feat)
        if tgt is not None:
            return self.find(tgt)
        if not create:
            return None
        w = self.make()
        self.trans[r][feat] = w
        return w

    def walk(self, i: int, path, create: bool):
        cur = i
        for feat in path:
            cur = self.step(cur, feat, create)
            if cur is None:
                return None
        return cur

    def set_atom(self, i: int, value: str):
        r = self.find(i)
        if self.atom[r] is None:
            self.atom[r] = value
        elif self.atom[r] != value:
            raise _Clash(
                "distinct atoms %r and %r forced onto one node"
                % (self.atom[r], value)
            )


def _solve(cstruct, phrases, preterminals):
    """Instantiate the defining equations for one derivation and return
    (union-find, zoom-variable map), or raise _Clash."""
    uf = _UnionFind()
    zvar: dict[NodeId, int] = {}

    def z(n: NodeId) -> int:
        if n not in zvar:
            zvar[n] = uf.make()
        return zvar[n]

    semform_args: list[tuple[int, tuple[str, ...]]] = []

    for n, rule, kids in phrases:
        for elem, kid in zip(rule.rhs, kids):
            for schema in elem.schemata:
                if isinstance(schema, PathEqSchema):
                    a = uf.walk(z(n), schema.up_path, create=True)
                    b = uf.walk(z(kid), schema.down_path, create=True)
                    uf.union(a, b)
                elif isinstance(schema, AtomValueSchema):
                    uf.set_atom(uf.walk(z(n), schema.path, create=True), schema.value)
                else:
                    raise GrammarError("semantic forms are only allowed in lexical entries")

    for p, entry in preterminals:
        if not entry.schemata:
            continue
        mo = cstruct.mother.get(p)
        if mo is None:
            raise _Clash("lexical schemata of %r need a node above the preterminal" % entry.word)
        base = z(mo)
        for schema in entry.schemata:
            if isinstance(schema, AtomValueSchema):
                uf.set_atom(uf.walk(base, schema.path, create=True), schema.value)
            elif isinstance(schema, SemForm):
                uf.set_atom(
                    uf.walk(base, (PRED_FEAT, REL_FEAT), create=True), schema.rel
                )
                for g in schema.args:
                    uf.walk(base, (PRED_FEAT,) + g, create=True)
                    semform_args.append((base, g))
            else:
                raise GrammarError("'down' cannot appear in a lexical schema")

    # argument slots link up with local paths that the other equations
    # define; iterate because one identification can define another path
    changed = True
    while changed:
        changed = False
        for base, g in semform_args:
            slot = uf.walk(base, (PRED_FEAT,) + g, create=False)
            local = uf.walk(base, g, create=False)
            if local is not None and uf.find(slot) != uf.find(local):
                uf.union(slot, local)
                changed = True

    # uniqueness: an atom may not share a node with outgoing transitions
    for i in range(len(uf.parent)):
        r = uf.find(i)
        if uf.atom[r] is not None and uf.trans[r]:
            raise _Clash(
                "atom %r forced onto a node with outgoing transitions" % uf.atom[r]
            )

    return uf, zvar


def _extract_model(sig, cstruct, uf: _UnionFind, zvar) -> tuple[Model | None, str | None]:
    """Build the least-solution model; (None, reason) when no sensible
    f-structure exists (entry point missing or not unique)."""
    roots: list[int] = []
    seen = set()
    for i in range(len(uf.parent)):
        r = uf.find(i)
        if r not in seen:
            seen.add(r)
            roots.append(r)

    if not roots:
        fstruct = FStructure(frozenset(["w0"]), "w0", {"w0": {}})
        return Model(sig, cstruct, fstruct, {}), None

    name = {r: "w%d" % k for k, r in enumerate(roots)}

    root_var = zvar.get(cstruct.root)
    if root_var is not None:
        initial = uf.find(root_var)
    else:
        incoming = set()
        for r in roots:
            for tgt in uf.trans[r].values():
                incoming.add(uf.find(tgt))
        sources = [r for r in roots if r not in incoming]
        if len(sources) != 1:
            return None, "no unique entry point into the f-structure"
        initial = sources[0]

    trans = {
        name[r]: {feat: name[uf.find(t)] for feat, t in sorted(uf.trans[r].items())}
        for r in roots
    }
    atomval = {name[r]: uf.atom[r] for r in roots if uf.atom[r] is not None}
    fstruct = FStructure(
        frozenset(name.values()), name[initial], trans, frozenset(atomval), atomval
    )
    zoomin = {n: name[uf.find(v)] for n, v in zvar.items()}
    return Model(sig, cstruct, fstruct, zoomin), None


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def parse_sentence(
    theory: Theory, grammar: Grammar, tokens, bounds: SearchBounds = SearchBounds()
) -> ParseOutcome:
    """All minimal models of ``theory`` with the given yield, root label
    equal to the grammar's start category, within ``bounds``."""
    tokens = list(tokens)
    if not tokens:
        raise GrammarError("no tokens to parse")
    for tok in tokens:
        if tok not in grammar.sig.words:
            raise SignatureError("unknown token %r" % tok)

    enum = _SkeletonEnumerator(grammar, tokens)
    derivations = enum.derive(grammar.start, 0, len(tokens), bounds.max_tree_nodes)
    bound_exceeded = enum.bound_hit

    rejections: list[Rejection] = []
    found: dict[str, Model] = {}
    for deriv, _count in derivations:
        cstruct, phrases, preterminals = _build_tree(deriv)
        try:
            uf, zvar = _solve(cstruct, phrases, preterminals)
        except _Clash as clash:
            rejections.append(Rejection("clash", clash.detail))
            continue
        model, why = _extract_model(grammar.sig, cstruct, uf, zvar)
        if model is None:
            rejections.append(Rejection("structure", why))
            continue
        if len(model.fstruct.nodes) > bounds.max_f_nodes:
            bound_exceeded = True
            continue
        report = validate_model(model)
        if not report.ok:
            rejections.append(
                Rejection("structure", "; ".join(sorted(report.codes())))
            )
            continue
        bad = None
        for label, f in theory.labeled():
            node = valid(model, f)
            if node is not None:
                bad = Rejection("formula", label, node)
                break
        if bad is not None:
            rejections.append(bad)
            continue
        cm = canonicalize(model)
        found.setdefault(model_to_text(cm), cm)

    models = [found[k] for k in sorted(found)]
    if len(models) > bounds.max_models:
        models = models[: bounds.max_models]
        bound_exceeded = True
    return ParseOutcome(tuple(models), bound_exceeded, tuple(rejections))


@dataclass(frozen=True)
class CheckEntry:
    label: str
    counterexample: NodeId | None

    @property
    def ok(self) -> bool:
        return self.counterexample is None


@dataclass(frozen=True)
class CheckReport:
    entries: tuple[CheckEntry, ...]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def __iter__(self):
        return iter(self.entries)


def check_parse(theory: Theory, model: Model) -> CheckReport:
    """Re-verify a model against every theory formula."""
    return CheckReport(
        tuple(CheckEntry(label, valid(model, f)) for label, f in theory.labeled())
    )
