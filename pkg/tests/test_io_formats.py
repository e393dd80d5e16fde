"""
Тесты форматов: Newick, eNewick, орграфы, результаты
"""
import random

import pytest

from hybridization.corpus import random_digraph
from hybridization.errors import (
    DigraphFormatError,
    DuplicateLabelError,
    InvalidInputError,
    NewickSyntaxError,
    NonBinaryTreeError,
    ReservedLabelError,
)
from hybridization.io_formats import (
    RESULT_KEYS,
    networks_isomorphic,
    parse_digraph,
    parse_forest,
    parse_network,
    parse_result,
    parse_tree,
    write_digraph,
    write_forest,
    write_network,
    write_result,
    write_tree,
)
from hybridization.network import hybridization_count, network_from_forest
from hybridization.phylo_core import is_isomorphic
from models.network_models import HybridNetwork
from models.tree_models import RHO
from tests.fixtures import FIG1_NETWORK, H1_T1, H1_T2, forest, pair

ROUND_TRIP_DIGRAPHS = 100


class TestNewick:
    """Чтение и каноническая запись деревьев"""

    def test_parse_cherry_with_rho(self):
        """Дерево получает ρ на конце корневого ребра"""
        tree = parse_tree("((a,b),c);")
        assert tree.taxa == frozenset({"a", "b", "c"})
        assert tree.leaf_labels == frozenset({"a", "b", "c", RHO})
        assert tree.labels[0] == RHO
        assert len(tree.children[0]) == 1, "у ρ ровно один ребёнок"
        assert tree.sibling(tree.vertex("a")) == tree.vertex("b")
        print("✅ Вишня {a,b} и присоединённый ρ")

    def test_single_leaf(self):
        tree = parse_tree("a;")
        assert tree.taxa == frozenset({"a"})
        assert write_tree(tree) == "a;"
        print("✅ Дерево из одного листа")

    def test_lengths_and_internal_labels_discarded(self):
        plain = parse_tree("((a,b),c);")
        decorated = parse_tree("((a:1.5,b)x,c);")
        assert is_isomorphic(plain, decorated)
        assert write_tree(decorated) == "((a,b),c);"
        print("✅ Длины рёбер и внутренние метки отброшены")

    def test_canonical_order(self):
        assert write_tree(parse_tree("((b,a),c);")) == "((a,b),c);"
        assert write_tree(parse_tree("(c,(b,a));")) == "((a,b),c);"
        assert write_tree(parse_tree("((d,c),(b,a));")) == "((a,b),(c,d));"
        print("✅ Дети упорядочены по наименьшей метке")

    def test_write_is_deterministic(self):
        first = write_tree(parse_tree("((x,(z,y)),w);"))
        second = write_tree(parse_tree("(w,((y,z),x));"))
        assert first == second == "(w,(x,(y,z)));"
        print(f"✅ Одинаковые деревья - одинаковый текст: {first}")

    @pytest.mark.parametrize("text", [
        "((a,b),c)",
        "((a,b),c;",
        "((a,b),,c);",
        "((a,b),c);x",
        "",
    ])
    def test_syntax_errors(self, text):
        with pytest.raises(NewickSyntaxError) as info:
            parse_tree(text)
        assert info.value.position >= 0
        print(f"✅ Синтаксическая ошибка в '{text}' на позиции {info.value.position}")

    def test_non_binary_rejected(self):
        with pytest.raises(NonBinaryTreeError):
            parse_tree("(a,b,c);")

    def test_duplicate_label_rejected(self):
        with pytest.raises(DuplicateLabelError) as info:
            parse_tree("((a,b),a);")
        assert info.value.label == "a"

    def test_reserved_label_rejected(self):
        with pytest.raises(ReservedLabelError):
            parse_tree(f"((a,b),{RHO});")


class TestNetworks:
    """eNewick и изоморфизм сетей"""

    def test_tree_network_has_no_tags(self):
        tree = parse_tree(H1_T1)
        text = write_network(HybridNetwork.from_tree(tree))
        assert "#" not in text
        assert text == write_tree(tree)
        print("✅ Сеть-дерево пишется обычным Newick")

    def test_single_reticulation_tag(self):
        t1, t2 = pair(H1_T1, H1_T2)
        network = network_from_forest(forest({"b", "c"}, {"a"}), t1, t2)
        text = write_network(network)
        assert text.count("#H1") == 2, f"тег должен встретиться дважды: {text}"
        assert "#H2" not in text
        print(f"✅ Одна ретикуляция: {text}")

    def test_parse_fig1(self):
        network = parse_network(FIG1_NETWORK)
        assert hybridization_count(network) == 2
        assert network.taxa == frozenset({"a", "b", "c", "d"})
        print("✅ Сеть с двумя ретикуляциями прочитана")

    def test_round_trip(self):
        network = parse_network(FIG1_NETWORK)
        text = write_network(network)
        again = parse_network(text)
        assert networks_isomorphic(network, again)
        assert write_network(again) == text, "повторная запись должна совпадать побайтно"
        print(f"✅ eNewick туда-обратно: {text}")

    def test_undefined_reference_rejected(self):
        with pytest.raises(InvalidInputError):
            parse_network("((a,#H1),b);")

    def test_double_reference_rejected(self):
        with pytest.raises(InvalidInputError):
            parse_network("((a,(b)#H1),(#H1,#H1));")


class TestDigraphs:
    """Формат орграфов"""

    def test_two_cycle(self):
        g = parse_digraph("v u\nv v\ne u v\ne v u")
        assert g.vertices == ("u", "v")
        assert g.weights == {"u": 1, "v": 1}
        assert g.edges == (("u", "v"), ("v", "u"))

    def test_weighted_self_loop(self):
        g = parse_digraph("# петля\nv a 3\ne a a\n")
        assert g.weights == {"a": 3}
        assert g.edges == (("a", "a"),)
        assert write_digraph(g) == "v a 3\ne a a\n"
        print("✅ Петля с весом 3")

    @pytest.mark.parametrize("text", [
        "v a\ne a b\n",
        "v a 0\n",
        "v a -2\n",
        "v a x\n",
        "v a\nv a\n",
        "x a\n",
    ])
    def test_format_errors(self, text):
        with pytest.raises(DigraphFormatError) as info:
            parse_digraph(text)
        assert info.value.line_number >= 1

    def test_round_trip_random(self):
        rng = random.Random(7)
        for _ in range(ROUND_TRIP_DIGRAPHS):
            g = random_digraph(rng.randint(1, 8), 0.3, 4, rng)
            text = write_digraph(g)
            again = parse_digraph(text)
            assert again == g
            assert write_digraph(again) == text
        print(f"✅ {ROUND_TRIP_DIGRAPHS} орграфов туда-обратно")


class TestResults:
    """Текст ключ-значение"""

    def test_result_keys(self):
        f = forest({"b", "c"}, {"a"})
        text = write_result({
            "hybridization_number": 1,
            "forest_size": f.size,
            "fvs_weight": 1,
            "components": f,
        })
        values = parse_result(text)
        assert tuple(values) == RESULT_KEYS
        assert values["hybridization_number"] == "1"
        assert values["components"] == f"b,c,{RHO};a"
        print(f"✅ Результат:\n{text}")

    def test_forest_round_trip(self):
        f = forest({"a", "b"}, {"c"}, {"d"})
        assert parse_forest(write_forest(f)) == f

    def test_duplicate_key_rejected(self):
        with pytest.raises(InvalidInputError):
            parse_result("a 1\na 2\n")


if __name__ == "__main__":
    pytest.main([__file__, "-v", "-s"])
