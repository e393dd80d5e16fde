"""
Чтение и запись форматов: Newick (деревья), расширенный Newick (сети),
список вершин/рёбер (орграфы), текст ключ-значение (результаты).

Разбор Newick - посимвольный сканер со стеком открытых скобок, без рекурсии.
"""
import hashlib
import re
from typing import Dict, List, Mapping, Optional, Tuple

import networkx as nx
from networkx.algorithms.isomorphism import categorical_node_match

from config.logging import get_logger
from hybridization.errors import (
    DigraphFormatError,
    DuplicateLabelError,
    InvalidInputError,
    NewickSyntaxError,
    NonBinaryTreeError,
    ReservedLabelError,
)
from hybridization.phylo_core import TreeBuilder, canonical_newick
from models.forest_models import AgreementForest
from models.graph_models import WeightedDigraph
from models.network_models import HybridNetwork
from models.tree_models import RHO, PhyloTree

logger = get_logger("hybridization.io_formats")

_LABEL_CHARS = frozenset("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_.-")
_NUMBER_CHARS = frozenset("0123456789.eE+-")
_LABEL_RE = re.compile(r"^[A-Za-z0-9_.-]+$")

RESULT_KEYS = ("hybridization_number", "forest_size", "fvs_weight", "components")


class _RawNode:
    __slots__ = ("label", "children", "position", "tag")

    def __init__(self, position: int, label: Optional[str] = None):
        self.label = label
        self.children: List["_RawNode"] = []
        self.position = position
        self.tag: Optional[str] = None


class _NewickScanner:
    """Сканер одной Newick-строки; allow_tags разрешает '#Hk' (eNewick)"""

    def __init__(self, text: str, allow_tags: bool = False):
        self.text = text
        self.pos = 0
        self.allow_tags = allow_tags

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> Optional[str]:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def _read_token(self) -> str:
        self._skip_ws()
        start = self.pos
        allowed = _LABEL_CHARS | ({"#"} if self.allow_tags else set())
        while self.pos < len(self.text) and self.text[self.pos] in allowed:
            self.pos += 1
        return self.text[start:self.pos]

    def _read_lengths(self) -> None:
        # ':число' отбрасывается; в eNewick бывает несколько полей подряд
        while self._peek() == ":":
            self.pos += 1
            self._skip_ws()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos] in _NUMBER_CHARS:
                self.pos += 1
            number = self.text[start:self.pos]
            if number:
                try:
                    float(number)
                except ValueError:
                    raise NewickSyntaxError(f"Invalid branch length '{number}'", start)
            elif not self.allow_tags:
                raise NewickSyntaxError("Empty branch length", start)

    def _apply_token(self, node: _RawNode, token: str, position: int) -> None:
        if "#" in token:
            name, _, tag = token.partition("#")
            if not tag or "#" in tag:
                raise NewickSyntaxError(f"Malformed reticulation tag '{token}'", position)
            node.tag = tag
            token = name
        if token:
            node.label = token

    def parse(self) -> _RawNode:
        stack: List[_RawNode] = []
        root: Optional[_RawNode] = None
        expect_subtree = True
        while True:
            c = self._peek()
            if c is None:
                raise NewickSyntaxError("Missing terminating ';'", self.pos)
            if expect_subtree:
                if c == "(":
                    node = _RawNode(self.pos)
                    self.pos += 1
                    if stack:
                        stack[-1].children.append(node)
                    elif root is not None:
                        raise NewickSyntaxError("More than one tree", node.position)
                    else:
                        root = node
                    stack.append(node)
                    continue
                position = self.pos
                token = self._read_token()
                if not token:
                    raise NewickSyntaxError(f"Expected label or '(' but found '{c}'", position)
                node = _RawNode(position)
                self._apply_token(node, token, position)
                if node.label is None and node.tag is None:
                    raise NewickSyntaxError("Empty leaf", position)
                self._read_lengths()
                if stack:
                    stack[-1].children.append(node)
                elif root is not None:
                    raise NewickSyntaxError("More than one tree", position)
                else:
                    root = node
                expect_subtree = False
                continue
            if c == ",":
                if not stack:
                    raise NewickSyntaxError("Comma outside parentheses", self.pos)
                self.pos += 1
                expect_subtree = True
            elif c == ")":
                if not stack:
                    raise NewickSyntaxError("Unbalanced ')'", self.pos)
                node = stack.pop()
                node.position = self.pos
                self.pos += 1
                position = self.pos
                token = self._read_token()
                if token:
                    # внутренние метки отбрасываются, теги сетей сохраняются
                    if "#" in token:
                        self._apply_token(node, token, position)
                        node.label = None
                self._read_lengths()
            elif c == ";":
                if stack:
                    raise NewickSyntaxError("Unbalanced '('", self.pos)
                self.pos += 1
                if self._peek() is not None:
                    raise NewickSyntaxError("Trailing characters after ';'", self.pos)
                assert root is not None
                return root
            else:
                raise NewickSyntaxError(f"Unexpected character '{c}'", self.pos)


def _check_leaf_label(label: str, seen: set) -> None:
    if label == RHO:
        raise ReservedLabelError(label)
    if label in seen:
        raise DuplicateLabelError(label)
    seen.add(label)


# ----------------------------------------------------------------------
# Деревья
# ----------------------------------------------------------------------

def parse_tree(text: str) -> PhyloTree:
    """Newick -> корневое бинарное дерево с присоединённым ρ"""
    root = _NewickScanner(text).parse()
    builder = TreeBuilder()
    seen: set = set()
    stack: List[Tuple[_RawNode, Optional[int]]] = [(root, None)]
    top: Optional[int] = None
    while stack:
        node, parent = stack.pop()
        if node.children:
            if len(node.children) != 2:
                raise NonBinaryTreeError(node.position, len(node.children))
            v = builder.add_vertex()
        else:
            _check_leaf_label(node.label, seen)
            v = builder.add_leaf(node.label)
        if parent is None:
            top = v
        else:
            builder.attach(parent, v)
        for child in reversed(node.children):
            stack.append((child, v))
    tree = builder.build(top)
    logger.debug(f"Parsed tree with {len(tree.taxa)} taxa")
    return tree


def write_tree(tree: PhyloTree) -> str:
    """Канонический Newick: ρ опущен, дети по наименьшей метке"""
    return canonical_newick(tree)


# ----------------------------------------------------------------------
# Сети
# ----------------------------------------------------------------------

def parse_network(text: str) -> HybridNetwork:
    """
    eNewick -> сеть. Ретикуляция записана дважды под общим тегом:
    один раз с поддеревом или меткой, один раз голой ссылкой '#Hk'.
    """
    root = _NewickScanner(text, allow_tags=True).parse()

    definitions: Dict[str, _RawNode] = {}
    references: Dict[str, int] = {}
    order: List[_RawNode] = []
    stack = [root]
    while stack:
        node = stack.pop()
        order.append(node)
        if node.tag is not None:
            bare = not node.children and node.label is None
            if bare:
                references[node.tag] = references.get(node.tag, 0) + 1
            elif node.tag in definitions:
                raise NewickSyntaxError(f"Reticulation '#{node.tag}' defined twice", node.position)
            else:
                definitions[node.tag] = node
        stack.extend(reversed(node.children))
    for tag in set(definitions) | set(references):
        if tag not in definitions:
            raise InvalidInputError(f"Reticulation '#{tag}' has no definition")
        if references.get(tag, 0) != 1:
            raise InvalidInputError(f"Reticulation '#{tag}' must be referenced exactly once")

    ids: Dict[int, int] = {}
    for node in order:
        if node.tag is not None and not node.children and node.label is None:
            continue
        ids[id(node)] = len(ids) + 1

    def resolve(node: _RawNode) -> int:
        if node.tag is not None and not node.children and node.label is None:
            return ids[id(definitions[node.tag])]
        return ids[id(node)]

    children: List[List[int]] = [[] for _ in range(len(ids) + 1)]
    labels: Dict[int, str] = {0: RHO}
    seen: set = set()
    children[0].append(resolve(root))
    for node in order:
        if id(node) not in ids:
            continue
        v = ids[id(node)]
        if node.children:
            if len(node.children) > 2:
                raise NonBinaryTreeError(node.position, len(node.children))
            children[v] = [resolve(child) for child in node.children]
        else:
            _check_leaf_label(node.label, seen)
            labels[v] = node.label
    try:
        return HybridNetwork(children=tuple(tuple(c) for c in children), labels=labels)
    except ValueError as e:
        raise InvalidInputError(f"Invalid network: {e}") from e


def _network_keys(h: HybridNetwork) -> Tuple[Dict[int, str], Dict[int, str]]:
    """Наименьший достижимый лист и хэш-сигнатура развёртки для каждой вершины"""
    min_leaf: Dict[int, str] = {}
    signature: Dict[int, str] = {}
    for v in reversed(h.topological_order()):
        kids = h.children[v]
        label = h.labels.get(v, "")
        if not kids:
            min_leaf[v] = label if v != 0 else ""
            body = label
        else:
            min_leaf[v] = min(min_leaf[c] for c in kids)
            body = label + "(" + ",".join(sorted(signature[c] for c in kids)) + ")"
        marker = "r" if len(h.parents(v)) == 2 else "t"
        signature[v] = hashlib.sha1((marker + body).encode("utf-8")).hexdigest()
    return min_leaf, signature


def write_network(h: HybridNetwork) -> str:
    """
    eNewick: первая встреча ретикуляции пишется с поддеревом и тегом '#Hk',
    вторая - голым '#Hk'. Теги нумеруются в порядке обхода.
    """
    if not h.children[0]:
        return ";"
    min_leaf, signature = _network_keys(h)
    reticulations = set(h.reticulations())
    tags: Dict[int, str] = {}
    out: List[str] = []
    stack: List[Tuple[str, object]] = [("node", h.children[0][0])]
    while stack:
        kind, item = stack.pop()
        if kind == "text":
            out.append(item)  # type: ignore[arg-type]
            continue
        v = item  # type: ignore[assignment]
        if v in tags:
            out.append(f"#{tags[v]}")
            continue
        suffix = ""
        if v in reticulations:
            tags[v] = f"H{len(tags) + 1}"
            suffix = f"#{tags[v]}"
        kids = sorted(h.children[v], key=lambda c: (min_leaf[c], signature[c]))
        if not kids:
            out.append(h.labels[v] + suffix)
            continue
        items: List[Tuple[str, object]] = [("text", "(")]
        for i, c in enumerate(kids):
            if i:
                items.append(("text", ","))
            items.append(("node", c))
        items.append(("text", ")" + suffix))
        stack.extend(reversed(items))
    return "".join(out) + ";"


def networks_isomorphic(h1: HybridNetwork, h2: HybridNetwork) -> bool:
    """Изоморфизм орграфов с сохранением меток"""
    return nx.is_isomorphic(
        h1.to_networkx(), h2.to_networkx(), node_match=categorical_node_match("label", None)
    )


# ----------------------------------------------------------------------
# Орграфы
# ----------------------------------------------------------------------

def parse_digraph(text: str) -> WeightedDigraph:
    """Записи 'v <имя> [<вес>]' и 'e <из> <в>', '#' - комментарий"""
    vertices: List[str] = []
    weights: Dict[str, int] = {}
    edges: List[Tuple[str, str]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        record = fields[0]
        if record == "v":
            if len(fields) not in (2, 3):
                raise DigraphFormatError("vertex record needs a name and an optional weight", number)
            name = fields[1]
            if not _LABEL_RE.match(name):
                raise DigraphFormatError(f"invalid vertex name '{name}'", number)
            if name in weights:
                raise DigraphFormatError(f"vertex '{name}' declared twice", number)
            weight = 1
            if len(fields) == 3:
                try:
                    weight = int(fields[2])
                except ValueError:
                    raise DigraphFormatError(f"weight '{fields[2]}' is not an integer", number)
                if weight < 1:
                    raise DigraphFormatError(f"weight {weight} is not positive", number)
            vertices.append(name)
            weights[name] = weight
        elif record == "e":
            if len(fields) != 3:
                raise DigraphFormatError("edge record needs two endpoints", number)
            for endpoint in fields[1:]:
                if endpoint not in weights:
                    raise DigraphFormatError(f"undeclared endpoint '{endpoint}'", number)
            edges.append((fields[1], fields[2]))
        else:
            raise DigraphFormatError(f"unknown record type '{record}'", number)
    return WeightedDigraph(vertices=tuple(vertices), weights=weights, edges=tuple(edges))


def write_digraph(g: WeightedDigraph) -> str:
    lines = []
    for v in g.vertices:
        weight = g.weights[v]
        lines.append(f"v {v}" if weight == 1 else f"v {v} {weight}")
    lines.extend(f"e {u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# Результаты
# ----------------------------------------------------------------------

def write_forest(forest: AgreementForest) -> str:
    """Компоненты через ';', метки внутри через ','"""
    return ";".join(",".join(sorted(c)) for c in forest.components)


def parse_forest(text: str) -> AgreementForest:
    parts = [p.strip() for p in text.strip().split(";") if p.strip()]
    if not parts:
        raise InvalidInputError("Empty forest")
    try:
        return AgreementForest.create(
            [label.strip() for label in part.split(",") if label.strip()] for part in parts
        )
    except ValueError as e:
        raise InvalidInputError(f"Invalid forest: {e}") from e


def write_result(values: Mapping[str, object]) -> str:
    """Строки 'ключ значение' в порядке вставки"""
    lines = []
    for key, value in values.items():
        if " " in key or not key:
            raise ValueError(f"Invalid result key '{key}'")
        if isinstance(value, AgreementForest):
            value = write_forest(value)
        lines.append(f"{key} {value}")
    return "\n".join(lines) + "\n"


def parse_result(text: str) -> Dict[str, str]:
    values: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        key, _, value = line.partition(" ")
        if key in values:
            raise InvalidInputError(f"Line {number}: duplicate result key '{key}'")
        values[key] = value.strip()
    return values
