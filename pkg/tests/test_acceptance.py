"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import itertools
import json
import random
import time

from lfgmc import (
    And,
    Bullet,
    CatLit,
    CStructure,
    FStructure,
    Model,
    Or,
    PathEq,
    SearchBounds,
    canonicalize,
    check_parse,
    model_from_text,
    model_to_text,
    parse_formula,
    parse_sentence,
    render_formula,
    satisfies,
    validate_model,
)

from conftest import build_fig_model, build_tiny_model
from generators import CORRUPTORS, RAND_SIG, rand_formula, rand_model
from oracles import denotation, oracle_parse
from test_cli import run_cli


def _report(num, text, fn):
    try:
        fn()
    except BaseException:
        print("FAIL  criterion %d: %s" % (num, text))
        raise
    print("PASS  criterion %d: %s" % (num, text))


def test_criterion_1_end_to_end(fig_theory, fig_grammar):
    def body():
        start = time.monotonic()
        out = parse_sentence(fig_theory, fig_grammar, ["a", "girl", "walks"])
        elapsed = time.monotonic() - start
        assert elapsed < 5.0, "took %.2fs" % elapsed
        assert not out.bound_exceeded
        assert len(out.models) == 1
        m = out.models[0]

        # tree is S(NP(Det(a), N(girl)), VP(V(walks)))
        c = m.cstruct
        lab, ds = c.label, c.daughters
        assert lab[c.root] == "S"
        np, vp = ds[c.root]
        assert (lab[np], lab[vp]) == ("NP", "VP")
        det, nn = ds[np]
        assert (lab[det], lab[nn]) == ("Det", "N")
        assert [lab[x] for x in ds[det]] == ["a"]
        assert [lab[x] for x in ds[nn]] == ["girl"]
        (v,) = ds[vp]
        assert lab[v] == "V"
        assert [lab[x] for x in ds[v]] == ["walks"]

        # f-structure content
        f = m.fstruct
        init = f.initial
        assert f.atomval[f.trans[init]["tense"]] == "pst"
        pred = f.trans[init]["pred"]
        assert f.atomval[f.trans[pred]["rel"]] == "walk"
        subj = f.trans[init]["subj"]
        assert f.trans[pred]["subj"] == subj  # re-entrant
        assert f.atomval[f.trans[subj]["spec"]] == "a"
        assert f.atomval[f.trans[subj]["num"]] == "sing"
        assert f.atomval[f.trans[f.trans[subj]["pred"]]["rel"]] == "girl"

        # and it is exactly the hand-built analysis
        assert m == canonicalize(build_fig_model())

    _report(1, "end-to-end parse of 'a girl walks' (< 5 s, exact model)", body)


def test_criterion_2_rule_formula(tmp_path, fig_grammar):
    def body():
        grammar_file = tmp_path / "fig.lfg"
        from conftest import FIG_GRAMMAR_TEXT

        grammar_file.write_text(FIG_GRAMMAR_TEXT)
        proc = run_cli("compile", str(grammar_file), "--format", "json")
        assert proc.returncode == 0
        licensing = parse_formula(
            json.loads(proc.stdout)["licensing"], fig_grammar.sig
        )
        disjuncts = []
        f = licensing.right
        while isinstance(f, Or):
            disjuncts.append(f.right)
            f = f.left
        disjuncts.append(f)
        want = And(
            CatLit("S"),
            Bullet(
                (
                    And(CatLit("NP"), PathEq(("up",), ("subj",), (), ())),
                    And(CatLit("VP"), PathEq(("up",), (), (), ())),
                )
            ),
        )
        assert want in disjuncts

    _report(2, "compiled S-rule disjunct matches the target AST exactly", body)


def test_criterion_3_wellformedness_axioms(fig_theory, fig_grammar, devour_theory, devour_grammar):
    def body():
        sig = fig_grammar.sig
        [comp] = fig_theory.completeness
        [coh] = fig_theory.coherence
        assert comp == parse_formula("<pred> <subj> true -> <subj> true", sig)
        assert coh == parse_formula(
            "(<subj> true & <pred> true) -> <pred> <subj> true", sig
        )

        out = parse_sentence(devour_theory, devour_grammar, ["a", "girl", "devours"])
        assert out.models == ()
        assert "completeness[obj]" in [
            r.detail for r in out.rejections if r.reason == "formula"
        ]

        # hand-built offending model: pred.obj exists, obj does not
        base = build_fig_model()
        c = base.cstruct
        label = dict(c.label)
        label["n8"] = "devours"
        cstruct = CStructure(c.nodes, c.root, c.mother, c.daughters, label)
        f = base.fstruct
        trans = {w: dict(t) for w, t in f.trans.items()}
        trans["f1"]["obj"] = "f9"
        trans["f9"] = {}
        atomval = dict(f.atomval)
        atomval["f4"] = "devour"
        model = Model(
            devour_grammar.sig,
            cstruct,
            FStructure(f.nodes | {"f9"}, f.initial, trans, f.final, atomval),
            base.zoomin,
        )
        assert validate_model(model).ok
        report = check_parse(devour_theory, model)
        failing = {e.label: e.counterexample for e in report if not e.ok}
        assert failing == {"completeness[obj]": "f0"}
        assert failing["completeness[obj]"] in model.fstruct.nodes

    _report(3, "completeness and coherence axioms, transitive-verb failure", body)


def test_criterion_4_semantics_oracle():
    def body():
        rng = random.Random(20260809)
        start = time.monotonic()
        cases = 0
        disagreements = 0
        models = [rand_model(rng, RAND_SIG, 8, 8) for _ in range(500)]
        for m in models:
            nodes = m.all_nodes()
            for _ in range(20):
                phi = rand_formula(rng, RAND_SIG, depth=5)
                cases += 1
                den = denotation(m, phi)
                for n in nodes:
                    if satisfies(m, n, phi) != (n in den):
                        disagreements += 1
        elapsed = time.monotonic() - start
        assert cases >= 10000, cases
        assert disagreements == 0
        assert elapsed < 60.0, "took %.2fs" % elapsed

    _report(4, "satisfaction agrees with the denotation oracle on 10,000 cases (< 60 s)", body)


def test_criterion_5_search_oracle(fig_theory, fig_grammar):
    def body():
        start = time.monotonic()
        words = sorted(fig_grammar.sig.words)
        bounds = SearchBounds(12, 12, 10)
        strings = 0
        with_parses = 0
        for k in (1, 2, 3, 4):
            for tokens in itertools.product(words, repeat=k):
                strings += 1
                primary = parse_sentence(fig_theory, fig_grammar, list(tokens), bounds)
                got = sorted(model_to_text(m) for m in primary.models)
                want = oracle_parse(
                    fig_theory,
                    fig_grammar.sig,
                    fig_grammar.start,
                    list(tokens),
                    max_tree=12,
                    max_f=12,
                )
                assert got == want, tokens
                if got:
                    with_parses += 1
        elapsed = time.monotonic() - start
        assert strings == 120
        assert with_parses == 1  # only "a girl walks"
        assert elapsed < 600.0, "took %.2fs" % elapsed

    _report(5, "bounded search agrees with the enumerate-and-filter oracle on 120 strings (< 10 min)", body)


def test_criterion_6_corrupted_models():
    def body():
        rng = random.Random(77)
        rejected = 0
        false_accepts = 0
        wrong_class = 0
        while rejected < 1000:
            expected, corrupt = CORRUPTORS[rejected % len(CORRUPTORS)]
            base = build_fig_model() if rng.random() < 0.4 else rand_model(rng)
            mutated = corrupt(rng, base)
            if mutated is None:
                continue
            report = validate_model(mutated)
            if report.ok:
                false_accepts += 1
            elif expected not in report.codes():
                wrong_class += 1
            rejected += 1
        assert false_accepts == 0
        assert wrong_class == 0

    _report(6, "1,000 corrupted models rejected with the right violation class", body)


def test_criterion_7_round_trips():
    def body():
        rng = random.Random(555)
        for _ in range(10000):
            f = rand_formula(rng, RAND_SIG, depth=5)
            assert parse_formula(render_formula(f), RAND_SIG) == f
        for m in (build_fig_model(), build_tiny_model()):
            assert model_from_text(model_to_text(m)) == m
        for _ in range(300):
            m = rand_model(rng)
            assert validate_model(m).ok
            assert model_from_text(model_to_text(m)) == m

    _report(7, "formula and model round trips (10,000 formulas, fixtures and random models)", body)
