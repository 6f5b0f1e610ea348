import pytest

from lfgmc import (
    CStructure,
    FStructure,
    Model,
    Signature,
    compile_grammar,
    parse_grammar,
)

# The running example: a three-rule grammar accepting "a girl walks".
FIG_GRAMMAR_TEXT = """
# demo grammar
signature {
  cat: S NP VP Det N V;
  atom: a sing pst girl walk;
  feat: subj spec num pred tense rel;
  gf: subj;
}
start S;
rule S -> NP {(up subj)=down} VP {up=down};
rule NP -> Det N;
rule VP -> V {up=down};
lex "a" Det {(up spec)=a; (up num)=sing};
lex "girl" N {(up pred)=girl(); (up num)=sing};
lex "walks" V {(up pred)=walk(subj); (up tense)=pst};
"""

# Same grammar with a transitive verb whose object can never be supplied,
# for exercising the completeness axiom.
DEVOUR_GRAMMAR_TEXT = """
signature {
  cat: S NP VP Det N V;
  atom: a sing pst girl walk devour;
  feat: subj obj spec num pred tense rel;
  gf: subj obj;
}
start S;
rule S -> NP {(up subj)=down} VP {up=down};
rule NP -> Det N;
rule VP -> V {up=down};
lex "a" Det {(up spec)=a; (up num)=sing};
lex "girl" N {(up pred)=girl(); (up num)=sing};
lex "walks" V {(up pred)=walk(subj); (up tense)=pst};
lex "devours" V {(up pred)=devour(subj, obj); (up tense)=pst};
"""

# A two-category grammar small enough for blind whole-space enumeration.
MICRO_GRAMMAR_TEXT = """
signature {
  cat: S A;
  atom: x;
  feat: f;
  gf: ;
}
start S;
rule S -> A {(up f)=x};
rule S -> A {up=down} A {(up f)=down};
lex "b" A;
"""


def build_fig_sig() -> Signature:
    return Signature(
        cats={"S", "NP", "VP", "Det", "N", "V"},
        atoms={"a", "sing", "pst", "girl", "walk"},
        feats={"subj", "spec", "num", "pred", "tense", "rel"},
        gf=(("subj",),),
        words={"a", "girl", "walks"},
    )


def build_fig_model() -> Model:
    """The analysis of "a girl walks", written out by hand.

    Tree: S(NP(Det(a), N(girl)), VP(V(walks))).  The S, VP and V nodes
    share the outer f-structure f0; the NP node maps to f2, which is
    both f0's subj and the subj inside f0's pred.  Det and N have no
    zoomin image of their own.
    """
    sig = build_fig_sig()
    cstruct = CStructure.build(
        root="n0",
        daughters={
            "n0": ("n1", "n6"),
            "n1": ("n2", "n4"),
            "n2": ("n3",),
            "n4": ("n5",),
            "n6": ("n7",),
            "n7": ("n8",),
        },
        label={
            "n0": "S",
            "n1": "NP",
            "n2": "Det",
            "n3": "a",
            "n4": "N",
            "n5": "girl",
            "n6": "VP",
            "n7": "V",
            "n8": "walks",
        },
    )
    fstruct = FStructure(
        nodes=frozenset(["f0", "f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8"]),
        initial="f0",
        trans={
            "f0": {"pred": "f1", "subj": "f2", "tense": "f3"},
            "f1": {"rel": "f4", "subj": "f2"},
            "f2": {"num": "f5", "pred": "f6", "spec": "f7"},
            "f3": {},
            "f4": {},
            "f5": {},
            "f6": {"rel": "f8"},
            "f7": {},
            "f8": {},
        },
        final=frozenset(["f3", "f4", "f5", "f7", "f8"]),
        atomval={"f3": "pst", "f4": "walk", "f5": "sing", "f7": "a", "f8": "girl"},
    )
    zoomin = {"n0": "f0", "n1": "f2", "n6": "f0", "n7": "f0"}
    return Model(sig, cstruct, fstruct, zoomin)


def build_tiny_model() -> Model:
    """One tree node, one (final) f-node, empty zoomin."""
    sig = Signature(cats={"S"}, atoms={"sg"}, feats={"num"})
    cstruct = CStructure.build(root="n0", daughters={"n0": ()}, label={"n0": "S"})
    fstruct = FStructure(
        nodes=frozenset(["f0"]),
        initial="f0",
        trans={"f0": {}},
        final=frozenset(["f0"]),
        atomval={"f0": "sg"},
    )
    return Model(sig, cstruct, fstruct, {})


@pytest.fixture(scope="session")
def fig_grammar():
    return parse_grammar(FIG_GRAMMAR_TEXT)


@pytest.fixture(scope="session")
def fig_theory(fig_grammar):
    return compile_grammar(fig_grammar)


@pytest.fixture(scope="session")
def fig_sig():
    return build_fig_sig()


@pytest.fixture()
def fig_model():
    return build_fig_model()


@pytest.fixture()
def tiny_model():
    return build_tiny_model()


@pytest.fixture(scope="session")
def devour_grammar():
    return parse_grammar(DEVOUR_GRAMMAR_TEXT)


@pytest.fixture(scope="session")
def devour_theory(devour_grammar):
    return compile_grammar(devour_grammar)


@pytest.fixture(scope="session")
def micro_grammar():
    return parse_grammar(MICRO_GRAMMAR_TEXT)


@pytest.fixture(scope="session")
def micro_theory(micro_grammar):
    return compile_grammar(micro_grammar)
