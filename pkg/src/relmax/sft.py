"""Subshifts of finite type, locally constant functions, higher-block graphs.

Words are tuples of symbol indices ``0 .. alphabet_size - 1``.  A function of
depth ``k`` reads the first ``k + 1`` coordinates of a point.  The graph
presentation used everywhere else has the allowed words of length
``max(1, k)`` as vertices and the allowed words of length ``max(1, k) + 1``
as edges, so a depth-``k`` function becomes a weight on edges.
"""
from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational, Real
from typing import Any, Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

Word = tuple[int, ...]


class SftError(ValueError):
    """Base class for structural errors of a shift or its graph."""


class NoCycleError(SftError):
    pass


class NotTransitiveError(SftError):
    pass


class SpecError(SftError):
    """Malformed input; ``problems`` lists every violation found."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


def format_word(word: Iterable[int]) -> str:
    return ",".join(str(s) for s in word)


def parse_word(text: str) -> Word:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(part) for part in text.split(","))


def format_rational(x: Fraction | int) -> str:
    return str(Fraction(x))


_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+\s*(/\s*\d+\s*)?$")
_DECIMAL_RE = re.compile(r"^\s*[+-]?(\d+\.\d*|\.\d+|\d+)\s*$")


def parse_rational(value: Any) -> Fraction:
    """Parse ``"p/q"``, an integer, or a decimal string into an exact Fraction.

    Binary floats are refused: they are not bit-exact representations of the
    intended rational.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise ValueError(f"binary float {value!r} is not exact; quote it as 'p/q'")
    if isinstance(value, str):
        if _RATIONAL_RE.match(value):
            num, _, den = value.partition("/")
            den_i = int(den) if den else 1
            if den_i == 0:
                raise ValueError(f"zero denominator in {value!r}")
            return Fraction(int(num), den_i)
        if _DECIMAL_RE.match(value):
            return Fraction(value.strip())
    raise ValueError(f"not a rational with integer denominator: {value!r}")


@dataclass(frozen=True)
class SftSpec:
    """Alphabet plus allowed transitions (``transitions[i][j]``: j may follow i).

    ``transitions=None`` means the full shift.  Construction rejects systems
    without a cycle and systems whose recurrent part is not strongly connected.
    """

    alphabet_size: int
    transitions: tuple[tuple[bool, ...], ...] | None = None

    def __post_init__(self) -> None:
        if self.alphabet_size < 1:
            raise SpecError(["alphabet_size must be positive"])
        n = self.alphabet_size
        if self.transitions is None:
            matrix = tuple(tuple(True for _ in range(n)) for _ in range(n))
        else:
            matrix = tuple(tuple(bool(x) for x in row) for row in self.transitions)
            bad = [i for i, row in enumerate(matrix) if len(row) != n]
            if len(matrix) != n or bad:
                raise SpecError([f"transition matrix must be {n}x{n}"])
        object.__setattr__(self, "transitions", matrix)
        essential = _recurrent_symbols(matrix)
        object.__setattr__(self, "_essential", essential)

    @property
    def essential_symbols(self) -> tuple[int, ...]:
        """Symbols lying on a cycle of the transition graph."""
        return self._essential  # type: ignore[attr-defined]

    def allows(self, a: int, b: int) -> bool:
        return self.transitions[a][b]

    def is_allowed(self, word: Sequence[int]) -> bool:
        if any(not 0 <= s < self.alphabet_size for s in word):
            return False
        return all(self.transitions[a][b] for a, b in zip(word, word[1:]))

    def allowed_words(self, length: int, essential_only: bool = True) -> list[Word]:
        """Allowed words of ``length`` in lexicographic order."""
        symbols = self.essential_symbols if essential_only else range(self.alphabet_size)
        words: list[Word] = [()]
        for _ in range(length):
            words = [
                w + (s,) for w in words for s in symbols if not w or self.transitions[w[-1]][s]
            ]
        return words

    def to_json(self) -> dict:
        return {
            "alphabet": self.alphabet_size,
            "transitions": [[int(x) for x in row] for row in self.transitions],
        }


def _recurrent_symbols(matrix: tuple[tuple[bool, ...], ...]) -> tuple[int, ...]:
    g = nx.DiGraph()
    n = len(matrix)
    g.add_nodes_from(range(n))
    g.add_edges_from((i, j) for i in range(n) for j in range(n) if matrix[i][j])
    classes = [
        c for c in nx.strongly_connected_components(g)
        if len(c) > 1 or any(matrix[v][v] for v in c)
    ]
    if not classes:
        raise NoCycleError("transition graph has no cycle, so no invariant measure exists")
    if len(classes) > 1:
        raise NotTransitiveError(
            f"recurrent part splits into {len(classes)} strongly connected classes"
        )
    return tuple(sorted(classes[0]))


def _is_exact(x: Any) -> bool:
    return isinstance(x, Rational)


@dataclass(frozen=True)
class LocallyConstantFn:
    """A function of the first ``depth + 1`` coordinates with values in R^dim.

    ``values`` maps words of length ``depth + 1`` to value tuples; words not
    listed take ``default``.  Potentials use floats, constraints use Fractions.
    """

    alphabet_size: int
    depth: int
    dim: int
    values: Mapping[Word, tuple] = field(default_factory=dict)
    default: tuple = ()

    def __post_init__(self) -> None:
        if self.depth < 0 or self.dim < 0:
            raise ValueError("depth and dim must be nonnegative")
        default = tuple(self.default) if self.default else tuple(0 for _ in range(self.dim))
        if len(default) != self.dim:
            raise ValueError(f"default has length {len(default)}, expected {self.dim}")
        vals: dict[Word, tuple] = {}
        for word, value in self.values.items():
            word = tuple(int(s) for s in word)
            value = tuple(value)
            if len(word) != self.depth + 1:
                raise ValueError(f"word {format_word(word)} has length {len(word)}, expected {self.depth + 1}")
            if any(not 0 <= s < self.alphabet_size for s in word):
                raise ValueError(f"word {format_word(word)} uses a symbol outside the alphabet")
            if len(value) != self.dim:
                raise ValueError(f"value at {format_word(word)} has length {len(value)}, expected {self.dim}")
            vals[word] = value
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "default", default)

    @classmethod
    def potential(
        cls, alphabet_size: int, depth: int, words: Mapping[Word, float] | None = None, default: float = 0.0
    ) -> "LocallyConstantFn":
        words = words or {}
        return cls(alphabet_size, depth, 1, {w: (v,) for w, v in words.items()}, (default,))

    @classmethod
    def constraint(
        cls,
        alphabet_size: int,
        depth: int,
        words: Mapping[Word, Sequence] | None = None,
        default: Sequence | None = None,
        dim: int = 1,
    ) -> "LocallyConstantFn":
        words = words or {}
        vals = {}
        for w, v in words.items():
            v = (v,) if not isinstance(v, (tuple, list)) else v
            vals[w] = tuple(parse_rational(x) if not isinstance(x, Fraction) else x for x in v)
        if default is None:
            default = tuple(Fraction(0) for _ in range(dim))
        elif not isinstance(default, (tuple, list)):
            default = (default,)
        default = tuple(parse_rational(x) if not isinstance(x, Fraction) else x for x in default)
        return cls(alphabet_size, depth, dim, vals, default)

    @classmethod
    def cylinder_indicator(cls, alphabet_size: int, word: Sequence[int]) -> "LocallyConstantFn":
        """Exact scalar indicator of the cylinder ``[word]``."""
        word = tuple(word)
        return cls.constraint(alphabet_size, len(word) - 1, {word: (Fraction(1),)}, (Fraction(0),))

    def __call__(self, word: Sequence[int]) -> tuple:
        key = tuple(word[: self.depth + 1])
        if len(key) != self.depth + 1:
            raise ValueError(f"need {self.depth + 1} coordinates, got {len(key)}")
        return self.values.get(key, self.default)

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(x) for x in self.default) and all(
            _is_exact(x) for v in self.values.values() for x in v
        )

    def table(self, depth: int | None = None) -> dict[Word, tuple]:
        """Values on every word of length ``depth + 1`` (default: own depth)."""
        depth = self.depth if depth is None else depth
        if depth < self.depth:
            raise ValueError("cannot tabulate below the function's own depth")
        return {
            w: self(w) for w in itertools.product(range(self.alphabet_size), repeat=depth + 1)
        }

    def lift(self, depth: int) -> "LocallyConstantFn":
        """The same function written as a depth-``depth`` table."""
        return LocallyConstantFn(self.alphabet_size, depth, self.dim, self.table(depth), self.default)

    def restrict(self, spec: "SftSpec") -> "LocallyConstantFn":
        """Drop table entries on words the shift forbids (they are never evaluated)."""
        vals = {w: v for w, v in self.values.items() if spec.is_allowed(w)}
        return LocallyConstantFn(self.alphabet_size, self.depth, self.dim, vals, self.default)

    def common_denominator(self) -> int:
        """Least common multiple of all value denominators (exact functions only)."""
        if not self.is_exact:
            raise TypeError("function has non-rational values")
        q = 1
        for v in itertools.chain([self.default], self.values.values()):
            for x in v:
                q = math.lcm(q, Fraction(x).denominator)
        return q

    def map(self, fn, other: "LocallyConstantFn | None" = None) -> "LocallyConstantFn":
        """Pointwise combination ``fn(self(x))`` or ``fn(self(x), other(x))``."""
        if other is None:
            vals = {w: tuple(fn(x) for x in v) for w, v in self.table().items()}
            return LocallyConstantFn(
                self.alphabet_size, self.depth, self.dim, vals, tuple(fn(x) for x in self.default)
            )
        if other.dim != self.dim or other.alphabet_size != self.alphabet_size:
            raise ValueError("dimension or alphabet mismatch")
        depth = max(self.depth, other.depth)
        vals = {
            w: tuple(fn(x, y) for x, y in zip(self(w), other(w)))
            for w in itertools.product(range(self.alphabet_size), repeat=depth + 1)
        }
        default = tuple(fn(x, y) for x, y in zip(self.default, other.default))
        return LocallyConstantFn(self.alphabet_size, depth, self.dim, vals, default)

    def to_json(self, exact: bool | None = None) -> dict:
        """Spec-file encoding; ``exact`` picks "p/q" strings over floats (default: auto)."""
        exact = self.is_exact if exact is None else exact

        def enc(v: tuple):
            if exact:
                return [format_rational(x) for x in v]
            return float(v[0]) if self.dim == 1 else [float(x) for x in v]

        doc: dict[str, Any] = {
            "depth": self.depth,
            "default": enc(self.default),
            "words": {format_word(w): enc(v) for w, v in sorted(self.values.items())},
        }
        if exact:
            doc["dim"] = self.dim
        return doc


def add_coboundary(
    f: LocallyConstantFn, g: LocallyConstantFn, a: Any = 0, spec: "SftSpec | None" = None
) -> LocallyConstantFn:
    """Return ``f + g∘σ - g + a`` as a function of depth ``max(depth_f, depth_g + 1)``.

    ``a`` is a scalar (broadcast) or a vector of length ``f.dim``.  The result
    is exact when all three inputs are rational.  With ``spec`` only allowed
    words are tabulated, so the result can be used on that shift.
    """
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: f has dim {f.dim}, g has dim {g.dim}")
    if f.alphabet_size != g.alphabet_size:
        raise ValueError("alphabet mismatch")
    shift = tuple(a) if isinstance(a, (tuple, list, np.ndarray)) else tuple(a for _ in range(f.dim))
    if len(shift) != f.dim:
        raise ValueError(f"constant has length {len(shift)}, expected {f.dim}")
    depth = max(f.depth, g.depth + 1)
    vals = {}
    if spec is None:
        words = itertools.product(range(f.alphabet_size), repeat=depth + 1)
    else:
        words = spec.allowed_words(depth + 1, essential_only=False)
    for w in words:
        fw, g0, g1 = f(w), g(w), g(w[1:])
        vals[w] = tuple(x + y1 - y0 + b for x, y0, y1, b in zip(fw, g0, g1, shift))
    default = tuple(x + b for x, b in zip(f.default, shift))
    return LocallyConstantFn(f.alphabet_size, depth, f.dim, vals, default)


def sup_distance(f: LocallyConstantFn, g: LocallyConstantFn, spec: SftSpec | None = None) -> float:
    """Sup over allowed points of the Euclidean norm of ``f - g``."""
    depth = max(f.depth, g.depth)
    words = (
        spec.allowed_words(depth + 1)
        if spec is not None
        else list(itertools.product(range(f.alphabet_size), repeat=depth + 1))
    )
    return max(
        (math.sqrt(sum(float(x - y) ** 2 for x, y in zip(f(w), g(w)))) for w in words),
        default=0.0,
    )


class WeightedDigraph:
    """Higher-block presentation with edge weights ``a`` (float) and ``phi`` (exact).

    Attributes are read-only after construction.  ``src``, ``dst``, ``a`` and
    ``phi_float`` are numpy arrays; ``phi`` holds exact Fraction tuples and
    ``phi_num`` their integer numerators over the common denominator ``Q``.
    """

    def __init__(
        self,
        spec: SftSpec,
        block: int,
        vertices: Sequence[Word],
        edge_words: Sequence[Word],
        a: Sequence[float],
        phi: Sequence[tuple[Fraction, ...]],
        dim: int,
    ):
        self.spec = spec
        self.block = block
        self.vertices: tuple[Word, ...] = tuple(vertices)
        self.edge_words: tuple[Word, ...] = tuple(edge_words)
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self.dim = dim
        src = np.array([self.vertex_index[w[:-1]] for w in self.edge_words], dtype=np.int64)
        dst = np.array([self.vertex_index[w[1:]] for w in self.edge_words], dtype=np.int64)
        self.src, self.dst = src, dst
        self.a = np.asarray(a, dtype=np.float64)
        self.phi: tuple[tuple[Fraction, ...], ...] = tuple(tuple(p) for p in phi)
        q = 1
        for p in self.phi:
            for x in p:
                q = math.lcm(q, x.denominator)
        self.Q = q
        self.phi_num = np.array(
            [[int(x * q) for x in p] for p in self.phi], dtype=np.int64
        ).reshape(len(self.phi), dim)
        self.phi_float = np.array(
            [[float(x) for x in p] for p in self.phi], dtype=np.float64
        ).reshape(len(self.phi), dim)
        self.edge_index = {(int(s), int(t)): e for e, (s, t) in enumerate(zip(src, dst))}
        self.symbols_arr = np.array([w[0] for w in self.edge_words], dtype=np.int64)
        n = len(self.vertices)
        self.out_edges = tuple(np.flatnonzero(src == v) for v in range(n))
        self.in_edges = tuple(np.flatnonzero(dst == v) for v in range(n))
        for arr in (self.src, self.dst, self.a, self.symbols_arr, self.phi_num, self.phi_float, *self.out_edges, *self.in_edges):
            arr.setflags(write=False)
        self.strongly_connected = _strongly_connected(n, src, dst)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edge_words)

    @property
    def a_norm(self) -> float:
        """Sup norm of the potential."""
        return float(np.max(np.abs(self.a))) if self.n_edges else 0.0

    @property
    def phi_norm(self) -> float:
        """Sup over edges of the Euclidean norm of the constraint."""
        if not self.n_edges or not self.dim:
            return 0.0
        return float(np.max(np.linalg.norm(self.phi_float, axis=1)))

    def with_weights(self, a: Sequence[float] | None = None, phi: Sequence[tuple] | None = None) -> "WeightedDigraph":
        """Same vertices and edges, new potential and/or constraint values."""
        a = self.a if a is None else a
        if phi is None:
            phi, dim = self.phi, self.dim
        else:
            phi = [tuple(Fraction(x) for x in p) for p in phi]
            dim = len(phi[0]) if phi else self.dim
        return WeightedDigraph(self.spec, self.block, self.vertices, self.edge_words, a, phi, dim)

    def lift_periodic_word(self, word: Sequence[int]) -> list[int]:
        """Edge indices traversed by the periodic point ``word word word ...``."""
        m = len(word)
        k = self.block
        edges = []
        for j in range(m):
            w = tuple(word[(j + i) % m] for i in range(k + 1))
            if w[:-1] not in self.vertex_index:
                raise ValueError(f"periodic word {format_word(word)} leaves the graph")
            e = self.edge_index.get((self.vertex_index[w[:-1]], self.vertex_index[w[1:]]))
            if e is None:
                raise ValueError(f"periodic word {format_word(word)} is not allowed")
            edges.append(e)
        return edges

    def symbols_of(self, edges: Sequence[int]) -> Word:
        """First symbol of each edge word: the symbolic itinerary of a walk."""
        return tuple(self.edge_words[e][0] for e in edges)

    def __repr__(self) -> str:
        return f"WeightedDigraph(|V|={self.n_vertices}, |E|={self.n_edges}, dim={self.dim}, block={self.block})"


def _strongly_connected(n: int, src: np.ndarray, dst: np.ndarray) -> bool:
    if n == 0:
        return False
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from(zip(src.tolist(), dst.tolist()))
    return nx.is_strongly_connected(g)


def build_graph(
    spec: SftSpec, potential: LocallyConstantFn, constraint: LocallyConstantFn | None = None
) -> WeightedDigraph:
    """Higher-block graph carrying ``potential`` and ``constraint`` on its edges.

    The block length is ``max(1, depth)``; shallower functions ignore trailing
    coordinates.  Vertices without an incoming or outgoing edge are pruned
    until none remain.
    """
    if potential.dim != 1:
        raise ValueError("potential must be scalar")
    if constraint is None:
        constraint = LocallyConstantFn(spec.alphabet_size, 0, 0)
    for fn, name in ((potential, "potential"), (constraint, "constraint")):
        if fn.alphabet_size != spec.alphabet_size:
            raise ValueError(f"{name} alphabet differs from the shift's")
        bad = [w for w in fn.values if not spec.is_allowed(w)]
        if bad:
            raise SpecError([f"{name} word {format_word(w)} is not allowed" for w in bad])
    if not constraint.is_exact:
        raise TypeError("constraint values must be rational")
    block = max(1, potential.depth, constraint.depth)
    edge_words = spec.allowed_words(block + 1)
    vertices = set(spec.allowed_words(block))
    # iterative pruning of vertices that cannot lie on a bi-infinite path
    while True:
        edge_words = [w for w in edge_words if w[:-1] in vertices and w[1:] in vertices]
        has_out = {w[:-1] for w in edge_words}
        has_in = {w[1:] for w in edge_words}
        keep = vertices & has_out & has_in
        if keep == vertices:
            break
        vertices = keep
    if not edge_words:
        raise NoCycleError("higher-block graph is empty after pruning")
    a = [float(potential(w)[0]) for w in edge_words]
    phi = [tuple(Fraction(x) for x in constraint(w)) for w in edge_words]
    graph = WeightedDigraph(spec, block, sorted(vertices), edge_words, a, phi, constraint.dim)
    if not graph.strongly_connected:
        raise NotTransitiveError("higher-block graph is not strongly connected")
    return graph


def validate_spec(raw: Any) -> SftSpec:
    """Check the shift part of a parsed spec document; report every violation."""
    problems: list[str] = []
    if not isinstance(raw, Mapping):
        raise SpecError(["spec document must be a JSON object"])
    n = raw.get("alphabet")
    if isinstance(n, bool) or not isinstance(n, int):
        problems.append("'alphabet' must be an integer")
        n = None
    elif n < 1:
        problems.append("'alphabet' must be positive (got %d)" % n)
        n = None
    matrix = raw.get("transitions")
    if matrix is not None:
        if not isinstance(matrix, list):
            problems.append("'transitions' must be a list of rows")
        else:
            if n is not None and len(matrix) != n:
                problems.append(f"'transitions' has {len(matrix)} rows, expected {n}")
            for i, row in enumerate(matrix):
                if not isinstance(row, list):
                    problems.append(f"transitions row {i} is not a list")
                    continue
                if n is not None and len(row) != n:
                    problems.append(f"transitions row {i} has length {len(row)}, expected {n}")
                for j, x in enumerate(row):
                    if x not in (0, 1) or isinstance(x, float):
                        problems.append(f"transitions[{i}][{j}] must be 0 or 1 (got {x!r})")
    if problems:
        raise SpecError(problems)
    return SftSpec(n, None if matrix is None else tuple(tuple(bool(x) for x in row) for row in matrix))


@dataclass(frozen=True)
class Problem:
    """A shift with its potential and constraint, as read from a spec file."""

    spec: SftSpec
    potential: LocallyConstantFn
    constraint: LocallyConstantFn

    def graph(self) -> WeightedDigraph:
        return build_graph(self.spec, self.potential, self.constraint)

    def to_json(self) -> dict:
        doc = self.spec.to_json()
        doc["potential"] = self.potential.to_json(exact=False)
        doc["constraint"] = self.constraint.to_json()
        return doc


def _parse_word_key(key: str, depth: int, spec: SftSpec | None, where: str, problems: list[str]) -> Word | None:
    try:
        word = parse_word(key)
    except ValueError:
        problems.append(f"{where}: word key {key!r} is not a comma-separated symbol list")
        return None
    if len(word) != depth + 1:
        problems.append(f"{where}: word {key!r} has length {len(word)}, expected {depth + 1}")
        return None
    if spec is not None and not spec.is_allowed(word):
        problems.append(f"{where}: word {key!r} is not allowed by the transitions")
        return None
    return word


def load_problem(raw: Any) -> Problem:
    """Validate and build a full problem (shift, potential, constraint) from JSON data."""
    spec_problems: list[str] = []
    spec: SftSpec | None = None
    try:
        spec = validate_spec(raw)
    except SpecError as exc:
        spec_problems.extend(exc.problems)
    problems = list(spec_problems)
    n = raw.get("alphabet") if isinstance(raw, Mapping) else None
    n = n if isinstance(n, int) and not isinstance(n, bool) and n > 0 else None

    pot_raw = raw.get("potential", {}) if isinstance(raw, Mapping) else {}
    potential = None
    if not isinstance(pot_raw, Mapping):
        problems.append("'potential' must be an object")
    else:
        depth = pot_raw.get("depth", 0)
        if isinstance(depth, bool) or not isinstance(depth, int) or depth < 0:
            problems.append("potential.depth must be a nonnegative integer")
            depth = None
        default = pot_raw.get("default", 0.0)
        if isinstance(default, bool) or not isinstance(default, (int, float)):
            problems.append("potential.default must be a number")
            default = 0.0
        words = {}
        for key, value in (pot_raw.get("words") or {}).items():
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                problems.append(f"potential word {key!r}: value must be a finite number")
                continue
            if depth is not None:
                w = _parse_word_key(key, depth, spec, "potential", problems)
                if w is not None:
                    words[w] = float(value)
        if depth is not None and n is not None:
            potential = LocallyConstantFn.potential(n, depth, words, float(default))

    con_raw = raw.get("constraint") if isinstance(raw, Mapping) else None
    constraint = None
    if con_raw is None:
        if n is not None:
            constraint = LocallyConstantFn.constraint(n, 0, {}, (Fraction(0),), dim=1)
    elif not isinstance(con_raw, Mapping):
        problems.append("'constraint' must be an object")
    else:
        depth = con_raw.get("depth", 0)
        if isinstance(depth, bool) or not isinstance(depth, int) or depth < 0:
            problems.append("constraint.depth must be a nonnegative integer")
            depth = None
        dim = con_raw.get("dim", 1)
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
            problems.append("constraint.dim must be a positive integer")
            dim = None

        def vec(value, where):
            if not isinstance(value, list):
                value = [value]
            if dim is not None and len(value) != dim:
                problems.append(f"{where}: expected {dim} components, got {len(value)}")
                return None
            out = []
            for x in value:
                try:
                    out.append(parse_rational(x))
                except ValueError as exc:
                    problems.append(f"{where}: {exc}")
                    return None
            return tuple(out)

        default = vec(con_raw.get("default", ["0"] * (dim or 1)), "constraint.default")
        words = {}
        for key, value in (con_raw.get("words") or {}).items():
            v = vec(value, f"constraint word {key!r}")
            if depth is not None and v is not None:
                w = _parse_word_key(key, depth, spec, "constraint", problems)
                if w is not None:
                    words[w] = v
        if depth is not None and dim is not None and default is not None and n is not None:
            constraint = LocallyConstantFn(n, depth, dim, words, default)

    if problems:
        raise SpecError(problems)
    assert spec is not None and potential is not None and constraint is not None
    return Problem(spec, potential, constraint)


def read_problem(path: str) -> Problem:
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError([f"invalid JSON: {exc}"]) from exc
    return load_problem(raw)
