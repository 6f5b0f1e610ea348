import random

import pytest

from lfgmc import (
    Bullet,
    CatLit,
    Down,
    Feat,
    PathEq,
    SignatureError,
    TRUE,
    UnknownNodeError,
    Up,
    Zoomin,
    eval_patheq,
    parse_formula,
    satisfies,
    valid,
)

from generators import RAND_SIG, rand_formula, rand_model
from oracles import denotation, oracle_valid


def test_s_node_has_np_vp_daughters(fig_model):
    assert satisfies(fig_model, "n0", Bullet((CatLit("NP"), CatLit("VP"))))


def test_true_everywhere(fig_model):
    for n in fig_model.all_nodes():
        assert satisfies(fig_model, n, TRUE)


def test_np_subject_path_equality(fig_model, fig_sig):
    phi = parse_formula("up zoomin subj ~ zoomin", fig_sig)
    assert satisfies(fig_model, "n1", phi)


def test_feature_modality_false_at_tree_nodes(fig_model, fig_sig):
    phi = parse_formula("<subj> true", fig_sig)
    assert not satisfies(fig_model, "n6", phi)


def test_patheq_vp_shares_mother_image(fig_model):
    assert eval_patheq(fig_model, "n6", PathEq(("up",), (), (), ()))


def test_patheq_trivial_on_defined_zoomin(fig_model):
    spec = PathEq((), (), (), ())
    for n in ("n0", "n1", "n6", "n7"):
        assert eval_patheq(fig_model, n, spec)


def test_patheq_false_at_det(fig_model):
    # Det has no zoomin image of its own, so the right image is empty
    assert "n2" not in fig_model.zoomin
    assert not eval_patheq(fig_model, "n2", PathEq(("up",), (), (), ()))


def test_patheq_false_at_f_nodes(fig_model):
    assert not eval_patheq(fig_model, "f0", PathEq((), (), (), ()))


def test_valid_true(fig_model):
    assert valid(fig_model, TRUE) is None


def test_valid_licensing_axiom(fig_model, fig_theory):
    assert valid(fig_model, fig_theory.licensing) is None


def test_valid_counterexample_after_relabel(fig_model, fig_theory):
    # relabel the V node to N: the VP node loses its licenser
    c = fig_model.cstruct
    label = dict(c.label)
    label["n7"] = "N"
    from lfgmc import CStructure, Model

    broken = Model(
        fig_model.sig,
        CStructure(c.nodes, c.root, c.mother, c.daughters, label),
        fig_model.fstruct,
        fig_model.zoomin,
    )
    assert valid(broken, fig_theory.licensing) == "n6"


def test_licensing_with_only_np_rule_fails_at_s(fig_model, fig_sig):
    from lfgmc import AnnotatedRule, Implies, RuleElement, compile_rule

    rule = AnnotatedRule("NP", (RuleElement("Det"), RuleElement("N")))
    axiom = Implies(
        parse_formula("cstruct & down down true", fig_sig),
        compile_rule(rule, fig_sig),
    )
    assert valid(fig_model, axiom) == "n0"


def test_unknown_node_and_names(fig_model, fig_sig):
    with pytest.raises(UnknownNodeError):
        satisfies(fig_model, "nowhere", TRUE)
    with pytest.raises(SignatureError):
        satisfies(fig_model, "n0", CatLit("Nope"))
    with pytest.raises(SignatureError):
        valid(fig_model, Feat("nope", TRUE))


# --- sort separation and structural properties ---------------------------


def test_sort_separation():
    rng = random.Random(11)
    feats = sorted(RAND_SIG.feats)
    for _ in range(60):
        m = rand_model(rng)
        for t in m.cstruct.nodes:
            for feat in feats:
                assert not satisfies(m, t, Feat(feat, TRUE))
        for w in m.fstruct.nodes:
            assert not satisfies(m, w, Up(TRUE))
            assert not satisfies(m, w, Down(TRUE))
            assert not satisfies(m, w, Zoomin(TRUE))
            assert not satisfies(m, w, Bullet((TRUE,)))
            for cat in sorted(RAND_SIG.cats):
                assert not satisfies(m, w, CatLit(cat))


def test_atom_literals_false_off_final(fig_model):
    from lfgmc import AtomLit

    for n in fig_model.cstruct.nodes:
        assert not satisfies(fig_model, n, AtomLit("sing"))
    assert not satisfies(fig_model, "f0", AtomLit("sing"))  # non-final
    assert satisfies(fig_model, "f5", AtomLit("sing"))


def test_patheq_symmetry():
    rng = random.Random(13)
    for _ in range(200):
        m = rand_model(rng)
        f = rand_formula(rng, RAND_SIG, depth=1)
        if not isinstance(f, PathEq):
            continue
        flipped = PathEq(f.right_tree, f.right_feats, f.left_tree, f.left_feats)
        for n in m.all_nodes():
            assert satisfies(m, n, f) == satisfies(m, n, flipped)


def test_bullet_down_consistency():
    rng = random.Random(17)
    for _ in range(100):
        m = rand_model(rng)
        for k in (1, 2, 3):
            phi = Bullet((TRUE,) * k)
            for t in m.cstruct.nodes:
                if satisfies(m, t, phi):
                    assert satisfies(m, t, Down(TRUE))


# --- agreement with the denotation oracle --------------------------------


def test_oracle_agreement_sample():
    rng = random.Random(1234)
    for _ in range(400):
        m = rand_model(rng)
        phi = rand_formula(rng, RAND_SIG, depth=5)
        den = denotation(m, phi)
        for n in m.all_nodes():
            assert satisfies(m, n, phi) == (n in den), (phi, n)


def test_valid_matches_oracle():
    rng = random.Random(4321)
    for _ in range(300):
        m = rand_model(rng)
        phi = rand_formula(rng, RAND_SIG, depth=4)
        assert valid(m, phi) == oracle_valid(m, phi)


def test_valid_none_iff_denotation_full():
    rng = random.Random(99)
    for _ in range(200):
        m = rand_model(rng)
        phi = rand_formula(rng, RAND_SIG, depth=4)
        full = set(m.all_nodes())
        assert (valid(m, phi) is None) == (set(denotation(m, phi)) == full)


def test_licensing_antecedent_vacuous_off_phrase_nodes(fig_model, fig_theory):
    # the antecedent fires only at tree nodes with a grandchild: never at
    # preterminals, word leaves, or feature nodes
    antecedent = fig_theory.licensing.left
    firing = {n for n in fig_model.all_nodes() if satisfies(fig_model, n, antecedent)}
    assert firing == {"n0", "n1", "n6"}


def test_patheq_strictly_existential_when_zoomin_undefined(fig_model):
    # even the identity equality needs a witness: with no zoomin image
    # at the node, both sides denote the empty set and the equality fails
    assert not eval_patheq(fig_model, "n2", PathEq((), (), (), ()))
    assert not eval_patheq(fig_model, "n3", PathEq((), (), (), ()))
