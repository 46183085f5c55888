import pytest
from hypothesis import given

from conftest import forests
from totalrep import CycleDetected, LabelOutOfRange, LabeledPoset, ParseError, principal_ideal
from totalrep.forest import canonical_forest
from totalrep.textio import (
    export_dot,
    format_forest,
    format_poset,
    format_transducer,
    parse_families,
    parse_forest,
    parse_poset,
    parse_transducer,
    parse_word,
)


class TestForestText:
    def test_four_nodes(self):
        G = parse_forest("(0 (1) (2)) | (1)")
        assert G.n == 4 and G.k == 3 and len(G.roots) == 2

    def test_unclosed(self):
        with pytest.raises(SyntaxError) as info:
            parse_forest("(0 (1)")
        assert info.value.pos == 6

    def test_bad_character(self):
        with pytest.raises(ParseError) as info:
            parse_forest("(0 x)")
        assert info.value.pos == 3

    def test_trailing_bar(self):
        with pytest.raises(ParseError):
            parse_forest("(0) |")

    def test_label_range(self):
        with pytest.raises(LabelOutOfRange):
            parse_forest("(7)", 2)

    @given(forests(8, max_k=4))
    def test_round_trip(self, G):
        text = format_forest(G)
        H = parse_forest(text, G.k)
        assert H == canonical_forest(G)
        assert format_forest(H) == text


CHAIN = """k=2
elem 0 label 0
elem 1 label 1
order 0 < 1
"""


class TestPosetText:
    def test_chain(self):
        P = parse_poset(CHAIN)
        assert P == LabeledPoset.from_relation(2, (0, 1), [(0, 1)])

    def test_named_elements_and_comments(self):
        P = parse_poset("# a vee\nk=3\nelem a label 0\nelem b label 1\nelem c label 2\norder a < c\norder b < c\n")
        assert P.covers == {(0, 2), (1, 2)}

    def test_cycle(self):
        with pytest.raises(CycleDetected):
            parse_poset(CHAIN + "order 1 < 0\n")

    def test_missing_label(self):
        with pytest.raises(SyntaxError):
            parse_poset("k=2\nelem 0 label 0\nelem 1\norder 0 < 1\n")

    def test_unknown_element(self):
        with pytest.raises(ParseError):
            parse_poset(CHAIN + "order 0 < 9\n")

    def test_missing_header(self):
        with pytest.raises(ParseError):
            parse_poset("elem 0 label 0\n")

    def test_round_trip(self):
        P = parse_poset(CHAIN)
        assert parse_poset(format_poset(P)) == P


class TestFamilies:
    def test_read(self):
        U, sets, fams = parse_families("universe 4\nset A = {0,1}\nset B = {}\nfamily F = [A, B, A]\n")
        assert U.size == 4 and sets == {"A": 3, "B": 0}
        assert fams["F"].sets == (3, 0, 3)

    @pytest.mark.parametrize(
        "text",
        ["set A = {0}\n", "universe 2\nset A = {0,x}\n", "universe 2\nfamily F = [Z]\n", "universe 2\nbogus\n"],
    )
    def test_errors(self, text):
        with pytest.raises(ParseError):
            parse_families(text)


class TestTransducerText:
    def test_round_trip(self):
        text = "initial a\nburst 5 7\na 3 -> b : 9\na %2=1 -> a :\nb * -> a : 1 0\n"
        t = parse_transducer(text)
        assert format_transducer(t) == "initial a\nburst 5 7\na 3 -> b : 9\na %2=1 -> a :\nb * -> a : 1 0\n"
        assert parse_transducer(format_transducer(t)) == t

    @pytest.mark.parametrize("text", ["a * -> b : 1\n", "initial a\na ?? -> b\n", "initial a\na * b\n"])
    def test_errors(self, text):
        with pytest.raises(ParseError):
            parse_transducer(text)


class TestWords:
    def test_parse(self):
        assert parse_word("1 2  3,4") == (1, 2, 3, 4)
        assert parse_word("") == ()
        with pytest.raises(ParseError):
            parse_word("1 -2")


class TestDot:
    def test_single_node(self):
        dot = export_dot(principal_ideal(parse_forest("(0)")))
        assert dot.count("[label=") == 1 and "->" not in dot

    def test_two_leaves(self):
        dot = export_dot(principal_ideal(parse_forest("(0) | (1)")))
        assert dot.count("[label=") == 3 and dot.count("->") == 2
        assert dot.endswith("}\n")

    def test_stable(self):
        a = export_dot(principal_ideal(parse_forest("(0 (1 (2)))")))
        b = export_dot(principal_ideal(parse_forest("(0 (1 (2)))")))
        assert a == b

    def test_covering_edges_only(self):
        L = principal_ideal(parse_forest("(0 (1))"))
        dot = export_dot(L)
        # (0) < (0)|(1) < (0 (1)): the transitive edge (0) -> (0 (1)) is omitted
        assert dot.count("->") == int(L.covers.sum()) == 3
