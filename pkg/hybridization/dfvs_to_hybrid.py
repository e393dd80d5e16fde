"""
Обратная редукция: орграф D -> D' (расщепление вершин) -> пара деревьев
из цепочек x-, y- и z-типа. Используется как генератор экземпляров
с известным ответом.
"""
import math
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple, Union

from config.logging import get_logger
from config.settings import DEFAULT_APPROXIMATION_FACTOR
from hybridization.errors import InvalidParamsError, PreconditionError
from hybridization.phylo_core import TreeBuilder
from models.generation_models import ChainKind, ChainProvenance, GenerationResult, GeneratorParams
from models.graph_models import WeightedDigraph
from utils.monitoring import measure_latency

logger = get_logger("hybridization.dfvs_to_hybrid")

Number = Union[int, Fraction, str]


class _SplitNames:
    """Имена вершин D' для каждой вершины D, в порядке рёбер входного файла"""

    def __init__(self, d: WeightedDigraph):
        self.ins: Dict[str, List[str]] = {v: [] for v in d.vertices}
        self.outs: Dict[str, List[str]] = {v: [] for v in d.vertices}
        self.arcs: List[Tuple[str, str]] = []
        for k, (u, v) in enumerate(d.edges):
            out_name, in_name = f"{u}.out{k}", f"{v}.in{k}"
            self.outs[u].append(out_name)
            self.ins[v].append(in_name)
            self.arcs.append((out_name, in_name))

    @staticmethod
    def minus(v: str) -> str:
        return f"{v}.minus"

    @staticmethod
    def plus(v: str) -> str:
        return f"{v}.plus"

    def origin(self) -> Dict[str, str]:
        result: Dict[str, str] = {}
        for v in self.ins:
            for name in self.ins[v] + [self.minus(v), self.plus(v)] + self.outs[v]:
                result[name] = v
        return result


def split_vertices(d: WeightedDigraph) -> WeightedDigraph:
    """
    v -> v.in<k>..., v.minus, v.plus, v.out<k>...; рёбра входы -> v.minus -> v.plus -> выходы,
    ребро k = (u, v) из D -> (u.out<k>, v.in<k>). Веса игнорируются.
    """
    names = _SplitNames(d)
    vertices: List[str] = []
    edges: List[Tuple[str, str]] = []
    for v in d.vertices:
        minus, plus = names.minus(v), names.plus(v)
        vertices.extend(names.ins[v] + [minus, plus] + names.outs[v])
        edges.extend((x, minus) for x in names.ins[v])
        edges.append((minus, plus))
        edges.extend((plus, y) for y in names.outs[v])
    edges.extend(names.arcs)
    return WeightedDigraph.create(vertices, edges=edges)


def project_fvs(d: WeightedDigraph, d_prime_fvs: Iterable[str]) -> frozenset:
    """Вершина D выбрана, если выбрана хотя бы одна её вершина в D'"""
    origin = _SplitNames(d).origin()
    return frozenset(origin[name] for name in d_prime_fvs)


def _size_terms(d: WeightedDigraph) -> int:
    """|A| + |V|"""
    return len(d.edges) + len(d.vertices)


def default_params(d: WeightedDigraph, c: Number) -> GeneratorParams:
    """ℓ = 2(c-1)(|A|+|V|) + 1, L = c(2(|A|+|V|) + (ℓ-1)|V|) + 2; дробные значения округляются вверх"""
    try:
        c = Fraction(c)
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidParamsError(f"c is not a number: {c}") from e
    if c <= 1:
        raise InvalidParamsError(f"c must be greater than 1, got {c}")
    size = _size_terms(d)
    ell = math.ceil(2 * (c - 1) * size + 1)
    if ell < 2:
        raise InvalidParamsError(f"c={c} gives x-chain length {ell} < 2")
    big_l = math.ceil(c * (2 * size + (ell - 1) * len(d.vertices)) + 2)
    return GeneratorParams(ell=ell, big_l=big_l, c=c)


def expected_maaf_size(d: WeightedDigraph, p: GeneratorParams, f: int) -> int:
    """1 + 2(|A|+|V|) + (ℓ-1)f"""
    return 1 + 2 * _size_terms(d) + (p.ell - 1) * f


def recover_fvs_size(d: WeightedDigraph, p: GeneratorParams, m: int) -> Fraction:
    """Обратная формула: (m - 1 - 2(|A|+|V|)) / (ℓ - 1)"""
    return Fraction(m - 1 - 2 * _size_terms(d), p.ell - 1)


class TreePairGenerator:
    """
    Цепочки: x - по одной на v.minus и v.plus (длина ℓ), y - на остальные
    вершины D' (длина L), z - на каждую вершину и ребро D (длина L).
    Листья цепочки '<имя>_<j>' нумеруются снизу вверх.
    """

    def __init__(self, d: WeightedDigraph, params: GeneratorParams):
        if not d.vertices:
            raise PreconditionError("digraph must have at least one vertex")
        self.d = d
        self.params = params
        self.names = _SplitNames(d)
        self.chains: Dict[str, ChainProvenance] = {}
        self.by_source: Dict[str, str] = {}
        self.logger = get_logger("hybridization.dfvs_to_hybrid")
        self._counters = {kind: 0 for kind in ChainKind}

    def _chain(self, kind: ChainKind, source: str) -> str:
        self._counters[kind] += 1
        name = f"{kind.value}{self._counters[kind]}"
        length = self.params.ell if kind == ChainKind.X else self.params.big_l
        labels = tuple(f"{name}_{j}" for j in range(1, length + 1))
        self.chains[name] = ChainProvenance(name=name, kind=kind, labels=labels, source=source)
        self.by_source[source] = name
        return name

    def _register_chains(self) -> Tuple[List[str], List[str]]:
        for v in self.d.vertices:
            self._chain(ChainKind.X, self.names.minus(v))
            self._chain(ChainKind.X, self.names.plus(v))
        for out_name, in_name in self.names.arcs:
            self._chain(ChainKind.Y, out_name)
            self._chain(ChainKind.Y, in_name)
        vertex_z = [self._chain(ChainKind.Z, v) for v in self.d.vertices]
        edge_z = [
            self._chain(ChainKind.Z, f"{u}->{v}#{k}") for k, (u, v) in enumerate(self.d.edges)
        ]
        return vertex_z, edge_z

    @staticmethod
    def _caterpillar(builder: TreeBuilder, parts: List[int]) -> int:
        """Гусеница над списком поддеревьев снизу вверх"""
        root = parts[0]
        for part in parts[1:]:
            root = builder.add_vertex((root, part))
        return root

    def _chain_caterpillar(self, builder: TreeBuilder, labels: Iterable[str]) -> Tuple[int, int]:
        """(корень гусеницы, нижний лист)"""
        leaves = [builder.add_leaf(label) for label in labels]
        return self._caterpillar(builder, leaves), leaves[0]

    def _labels(self, source: str) -> Tuple[str, ...]:
        return self.chains[self.by_source[source]].labels

    def _build_t0(self, builder: TreeBuilder, vertex_z: List[str], edge_z: List[str]) -> Tuple[int, Dict[str, int]]:
        """T0: левая гусеница из z-цепочек; возвращает корень и нижний лист каждой z-цепочки"""
        roots = []
        lowest: Dict[str, int] = {}
        for name in vertex_z + edge_z:
            root, bottom = self._chain_caterpillar(builder, self.chains[name].labels)
            roots.append(root)
            lowest[name] = bottom
        return self._caterpillar(builder, roots), lowest

    def _hang(self, builder: TreeBuilder, below_leaf: int, source: str) -> int:
        """Подвесить цепочку под лист; вернуть нижний лист подвешенной цепочки"""
        root, bottom = self._chain_caterpillar(builder, self._labels(source))
        builder.hang_below(below_leaf, root)
        return bottom

    def build_first(self, vertex_z: List[str], edge_z: List[str]):
        builder = TreeBuilder()
        top, lowest = self._build_t0(builder, vertex_z, edge_z)
        for k, (out_name, in_name) in enumerate(self.names.arcs):
            below = self._hang(builder, lowest[edge_z[k]], out_name)
            self._hang(builder, below, in_name)
        for v, z in zip(self.d.vertices, vertex_z):
            below = self._hang(builder, lowest[z], self.names.minus(v))
            self._hang(builder, below, self.names.plus(v))
        return builder.build(top)

    def build_second(self, vertex_z: List[str], edge_z: List[str]):
        builder = TreeBuilder()
        columns = []
        for v in self.d.vertices:
            # Сверху вниз: y(in_1..in_k), x(v-); снизу вверх - наоборот
            minus_column = list(self._labels(self.names.minus(v)))
            for name in reversed(self.names.ins[v]):
                minus_column.extend(self._labels(name))
            # Сверху вниз: x(v+), y(out_1..out_k)
            plus_column: List[str] = []
            for name in reversed(self.names.outs[v]):
                plus_column.extend(self._labels(name))
            plus_column.extend(self._labels(self.names.plus(v)))
            columns.append(self._chain_caterpillar(builder, minus_column)[0])
            columns.append(self._chain_caterpillar(builder, plus_column)[0])
        base = self._caterpillar(builder, columns)
        t0_copy, _ = self._build_t0(builder, vertex_z, edge_z)
        top = builder.add_vertex((base, t0_copy))
        return builder.build(top)

    def generate(self) -> GenerationResult:
        vertex_z, edge_z = self._register_chains()
        t1 = self.build_first(vertex_z, edge_z)
        t2 = self.build_second(vertex_z, edge_z)
        result = GenerationResult(
            t1=t1, t2=t2, params=self.params, chains=tuple(self.chains.values())
        )
        self.logger.info(
            f"Generated tree pair with {result.leaf_count} leaves and {len(self.chains)} chains "
            f"(ell={self.params.ell}, L={self.params.big_l})"
        )
        return result


@measure_latency
def generate_trees(d: WeightedDigraph, p: GeneratorParams) -> GenerationResult:
    """Пара (T, T'); число листьев 2|V|ℓ + (|V| + 3|A|)L"""
    return TreePairGenerator(d, p).generate()


def make_params(
    d: WeightedDigraph,
    c: Optional[Number] = None,
    ell: Optional[int] = None,
    big_l: Optional[int] = None,
) -> Tuple[GeneratorParams, Optional[GeneratorParams]]:
    """
    Явные ℓ/L поверх формул. Возвращает (параметры, значения формул или None,
    если c не задан и оба значения явные).
    """
    formula: Optional[GeneratorParams] = None
    if c is not None or ell is None or big_l is None:
        formula = default_params(d, c if c is not None else DEFAULT_APPROXIMATION_FACTOR)
    try:
        params = GeneratorParams(
            ell=ell if ell is not None else formula.ell,
            big_l=big_l if big_l is not None else formula.big_l,
            c=formula.c if formula is not None else None,
        )
    except ValueError as e:
        raise InvalidParamsError(str(e)) from e
    return params, formula
