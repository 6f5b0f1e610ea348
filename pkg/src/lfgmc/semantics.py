"""Satisfaction and validity of formulas over tripartite models.

``satisfies(m, n, phi)`` is the three-place truth relation.  The clauses
are sorted: category and word literals only ever hold at tree nodes,
atoms only at final feature nodes, feature modalities only move inside
the feature graph, ``up``/``down``/``bullet``/``zoomin`` only act at
tree nodes, and a path equality holds at a tree node exactly when some
feature node is reachable through both of its composite relation paths.
Everything else is classical propositional logic.

``valid(m, phi)`` quantifies over every node of both domains and, when
the formula fails somewhere, returns the least failing node in the
deterministic model order so counterexamples are stable.
"""

from __future__ import annotations

from .errors import UnknownNodeError
from .formula import (
    And,
    AtomLit,
    Bullet,
    CatLit,
    CStructConst,
    Down,
    FalseF,
    Feat,
    Formula,
    FStructConst,
    Iff,
    Implies,
    Not,
    Or,
    PathEq,
    TrueF,
    Up,
    WordLit,
    Zoomin,
    validate_names,
)
from .model import Model, NodeId


def _patheq_image(m: Model, n: NodeId, tree_steps, feat_steps) -> set[NodeId]:
    """Feature nodes reachable from tree node ``n`` via the composite
    relation: tree steps, then zoomin, then feature steps."""
    cur = {n}
    for step in tree_steps:
        nxt: set[NodeId] = set()
        for t in cur:
            if step == "up":
                mo = m.cstruct.mother.get(t)
                if mo is not None:
                    nxt.add(mo)
            else:  # down is existential over daughters
                nxt.update(m.cstruct.daughters.get(t, ()))
        cur = nxt
    cur = {m.zoomin[t] for t in cur if t in m.zoomin}
    for feat in feat_steps:
        cur = {
            m.fstruct.trans[w][feat]
            for w in cur
            if feat in m.fstruct.trans.get(w, {})
        }
    return cur


def eval_patheq(m: Model, n: NodeId, spec: PathEq) -> bool:
    """Path equality at ``n``: both composite images share a feature node.

    False (not an error) at feature nodes, in line with the other sorted
    clauses.
    """
    if n not in m.cstruct.nodes:
        if n not in m.fstruct.nodes:
            raise UnknownNodeError("node %r is not in the model" % n)
        return False
    left = _patheq_image(m, n, spec.left_tree, spec.left_feats)
    if not left:
        return False
    right = _patheq_image(m, n, spec.right_tree, spec.right_feats)
    return bool(left & right)


def _sat(m: Model, n: NodeId, f: Formula) -> bool:
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, CStructConst):
        return n in m.cstruct.nodes
    if isinstance(f, FStructConst):
        return n in m.fstruct.nodes
    if isinstance(f, CatLit):
        return n in m.cstruct.nodes and m.cstruct.label.get(n) == f.name
    if isinstance(f, WordLit):
        return n in m.cstruct.nodes and m.cstruct.label.get(n) == f.name
    if isinstance(f, AtomLit):
        return (
            n in m.fstruct.nodes
            and n in m.fstruct.final
            and m.fstruct.atomval.get(n) == f.name
        )
    if isinstance(f, Not):
        return not _sat(m, n, f.sub)
    if isinstance(f, And):
        return _sat(m, n, f.left) and _sat(m, n, f.right)
    if isinstance(f, Or):
        return _sat(m, n, f.left) or _sat(m, n, f.right)
    if isinstance(f, Implies):
        return (not _sat(m, n, f.left)) or _sat(m, n, f.right)
    if isinstance(f, Iff):
        return _sat(m, n, f.left) == _sat(m, n, f.right)
    if isinstance(f, Feat):
        if n not in m.fstruct.nodes:
            return False
        w = m.fstruct.trans.get(n, {}).get(f.feat)
        return w is not None and _sat(m, w, f.sub)
    if isinstance(f, Up):
        if n not in m.cstruct.nodes:
            return False
        mo = m.cstruct.mother.get(n)
        return mo is not None and _sat(m, mo, f.sub)
    if isinstance(f, Down):
        if n not in m.cstruct.nodes:
            return False
        return any(_sat(m, d, f.sub) for d in m.cstruct.daughters.get(n, ()))
    if isinstance(f, Zoomin):
        if n not in m.cstruct.nodes:
            return False
        w = m.zoomin.get(n)
        return w is not None and _sat(m, w, f.sub)
    if isinstance(f, Bullet):
        if n not in m.cstruct.nodes:
            return False
        ds = m.cstruct.daughters.get(n, ())
        if len(ds) != len(f.args):
            return False
        return all(_sat(m, d, sub) for d, sub in zip(ds, f.args))
    if isinstance(f, PathEq):
        if n not in m.cstruct.nodes:
            return False
        return eval_patheq(m, n, f)
    raise TypeError("not a formula: %r" % (f,))


def satisfies(m: Model, n: NodeId, phi: Formula) -> bool:
    """Truth of ``phi`` at node ``n`` (tree or feature node) of ``m``."""
    if n not in m.cstruct.nodes and n not in m.fstruct.nodes:
        raise UnknownNodeError("node %r is not in the model" % n)
    validate_names(phi, m.sig)
    return _sat(m, n, phi)


def valid(m: Model, phi: Formula) -> NodeId | None:
    """None when ``phi`` holds at every node of both domains; otherwise
    the least falsifying node in model order."""
    validate_names(phi, m.sig)
    for n in m.all_nodes():
        if not _sat(m, n, phi):
            return n
    return None
