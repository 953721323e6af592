"""Boolean predicates and their compilation into oracle gates.

A predicate is a total function on n-bit strings.  Oracle gates mark the
satisfying strings by flipping a dedicated oracle qubit, the same black
box interface used by search-style quantum algorithms; the predicate is
evaluated semantically during gate application rather than compiled to
elementary gates.

Built-ins cover everything the algorithm suite needs: independent-set
tests on graphs, CNF evaluation, the "value < z" comparator together
with its disjunctive expression construction, exact-size independent-set
predicates, and the switched combination of two predicates whose
satisfying count is the sum of the parts.

Bit convention: input variable x1 is the most significant bit of the
string, matching the wire-0-is-MSB layout convention.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError
from .gates import Gate, GateKind

#: Exhaustive enumeration cap for counting and truth tables.
MAX_COUNT_WIDTH = 24


@dataclass(frozen=True)
class Graph:
    """Undirected graph on vertices 0..n-1 with no self-loops."""

    n: int
    edges: frozenset[tuple[int, int]]

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) outside vertex range 0..{n - 1}")
            norm.add((min(u, v), max(u, v)))
        return cls(n, frozenset(norm))

    @property
    def m(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class CnfFormula:
    """CNF over variables 1..n_vars; clauses are tuples of signed literals."""

    n_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for clause in self.clauses:
            if not clause:
                raise ValueError("empty clause")
            for lit in clause:
                if lit == 0 or abs(lit) > self.n_vars:
                    raise ValueError(f"literal {lit} out of range")

    def evaluate(self, x: int) -> bool:
        """Evaluate at assignment ``x`` (variable 1 = most significant bit)."""
        for clause in self.clauses:
            for lit in clause:
                bit = (x >> (self.n_vars - abs(lit))) & 1
                if (bit == 1) == (lit > 0):
                    break
            else:
                return False
        return True


class Predicate:
    """Width-tagged boolean function over n-bit strings.

    ``table_fn`` builds the full truth table vectorized over all 2^n
    inputs; it is evaluated lazily and cached, and is what oracle gate
    application and exhaustive counting consume.
    """

    def __init__(self, n: int, table_fn, description: str):
        if n < 0:
            raise ValueError("predicate width must be >= 0")
        self.n = n
        self.description = description
        self._table_fn = table_fn
        self._table: np.ndarray | None = None

    def truth_table(self) -> np.ndarray:
        if self._table is None:
            if self.n > MAX_COUNT_WIDTH:
                raise ValueError(
                    f"width {self.n} exceeds enumeration cap {MAX_COUNT_WIDTH}"
                )
            table = np.asarray(self._table_fn(), dtype=bool)
            if table.shape != (1 << self.n,):
                raise ValueError("truth table has wrong length")
            self._table = table
        return self._table

    def __call__(self, x: int | str) -> bool:
        if isinstance(x, str):
            if len(x) != self.n:
                raise ValueError(f"input width {len(x)} != predicate width {self.n}")
            x = int(x, 2) if self.n else 0
        return bool(self.truth_table()[x])

    def __repr__(self) -> str:
        return f"Predicate({self.description!r}, n={self.n})"


def _bit_columns(n: int) -> np.ndarray:
    """All 2^n inputs as column-indexable bit values; column i is x_{i+1}."""
    idx = np.arange(1 << n, dtype=np.int64)
    return np.stack([(idx >> (n - 1 - i)) & 1 for i in range(n)]) if n else idx


# ---------------------------------------------------------------------------
# built-in predicates


def is_independent_set(g: Graph, x: str) -> bool:
    """True iff no edge has both endpoints selected (empty set counts)."""
    if len(x) != g.n:
        raise ValueError(f"subset width {len(x)} != vertex count {g.n}")
    return bool(independent_set_predicate(g)(x))


def independent_set_predicate(g: Graph) -> Predicate:
    def table():
        idx = np.arange(1 << g.n, dtype=np.int64)
        ok = np.ones(1 << g.n, dtype=bool)
        for u, v in g.edges:
            bu = (idx >> (g.n - 1 - u)) & 1
            bv = (idx >> (g.n - 1 - v)) & 1
            ok &= ~((bu & bv).astype(bool))
        return ok

    return Predicate(g.n, table, f"independent-set({g.n} vertices, {g.m} edges)")


def k_is_predicate(g: Graph, k: int) -> Predicate:
    """Independent sets of exactly ``k`` vertices."""
    if not 0 <= k <= g.n:
        raise ValueError(f"k={k} outside 0..{g.n}")
    base = independent_set_predicate(g)

    def table():
        idx = np.arange(1 << g.n, dtype=np.int64)
        return base.truth_table() & (np.bitwise_count(idx) == k)

    return Predicate(g.n, table, f"{k}-independent-set")


def cnf_predicate(f: CnfFormula) -> Predicate:
    n = f.n_vars

    def table():
        idx = np.arange(1 << n, dtype=np.int64)
        ok = np.ones(1 << n, dtype=bool)
        for clause in f.clauses:
            clause_ok = np.zeros(1 << n, dtype=bool)
            for lit in clause:
                bit = (idx >> (n - abs(lit))) & 1
                clause_ok |= (bit == 1) if lit > 0 else (bit == 0)
            ok &= clause_ok
        return ok

    return Predicate(n, table, f"cnf({n} vars, {len(f.clauses)} clauses)")


def constant_predicate(n: int, value: bool) -> Predicate:
    return Predicate(
        n, lambda: np.full(1 << n, value, dtype=bool), f"const-{int(value)}"
    )


# ---------------------------------------------------------------------------
# the "value < z" comparator and its expression construction


def g_z(z: int, x: str) -> bool:
    """True iff the string, read as a binary number, is less than z."""
    n = len(x)
    if not 0 <= z <= (1 << n):
        raise ValueError(f"z={z} outside 0..2^{n}")
    return int(x, 2) < z


def less_than_predicate(z: int, n: int) -> Predicate:
    if not 0 <= z <= (1 << n):
        raise ValueError(f"z={z} outside 0..2^{n}")
    return Predicate(
        n,
        lambda: np.arange(1 << n, dtype=np.int64) < z,
        f"value<{z}",
    )


@dataclass(frozen=True)
class GzExpression:
    """Disjunction of conjunctions of negated variables.

    Each term lists 1-based variable indices that must all be 0; the
    expression is the OR of its terms.  ``constant`` short-circuits the
    degenerate z values (0: never true; 2^n: always true).
    """

    n: int
    terms: tuple[tuple[int, ...], ...]
    constant: bool | None = None

    def evaluate(self, x: str) -> bool:
        if len(x) != self.n:
            raise ValueError(f"input width {len(x)} != {self.n}")
        if self.constant is not None:
            return self.constant
        return any(all(x[j - 1] == "0" for j in term) for term in self.terms)

    def size(self) -> int:
        """Total literal count."""
        return sum(len(term) for term in self.terms)

    def to_string(self) -> str:
        if self.constant is not None:
            return "1" if self.constant else "0"
        parts = []
        for term in self.terms:
            lits = " & ".join(f"~x{j}" for j in term)
            parts.append(f"({lits})" if len(term) > 1 else lits)
        return " | ".join(parts)


def build_gz_expression(z: int, n: int) -> GzExpression:
    """Comparator expression: one term per set bit of z.

    The term for bit position i (1-based, MSB first, z_i = 1) requires
    x_i = 0 together with x_j = 0 at every earlier position where z has a
    0.  Total literal count stays below n^2.
    """
    if not 0 <= z <= (1 << n):
        raise ValueError(f"z={z} outside 0..2^{n}")
    if z == 0:
        return GzExpression(n, (), constant=False)
    if z == (1 << n):
        return GzExpression(n, (), constant=True)
    bits = [(z >> (n - i)) & 1 for i in range(1, n + 1)]  # bits[i-1] = z_i
    terms = []
    zero_prefix: list[int] = []
    for i in range(1, n + 1):
        if bits[i - 1] == 1:
            terms.append(tuple(zero_prefix + [i]))
        else:
            zero_prefix.append(i)
    return GzExpression(n, tuple(terms))


# ---------------------------------------------------------------------------
# composition and counting


def build_F(f_k: Predicate, g: Predicate) -> Predicate:
    """Switched disjunction over n+1 bits: x0 picks f_k (1) or g (0).

    The extra switch variable is the most significant bit, so the
    satisfying count is exactly count(f_k) + count(g).
    """
    if f_k.n != g.n:
        raise ValueError(f"width mismatch: {f_k.n} != {g.n}")

    def table():
        return np.concatenate([g.truth_table(), f_k.truth_table()])

    return Predicate(
        f_k.n + 1, table, f"switch({f_k.description}, {g.description})"
    )


def count_satisfying(p: Predicate) -> int:
    """Exact satisfying count by exhaustive enumeration (width-capped)."""
    if p.n > MAX_COUNT_WIDTH:
        raise ValueError(f"width {p.n} exceeds enumeration cap {MAX_COUNT_WIDTH}")
    return int(np.count_nonzero(p.truth_table()))


def oracle_gate(
    p: Predicate, work_wires: tuple[int, ...], oracle_wire: int
) -> Gate:
    """Flip the oracle qubit on basis states whose work bits satisfy ``p``."""
    if len(work_wires) != p.n:
        raise ValueError(
            f"{len(work_wires)} work wires for width-{p.n} predicate"
        )
    return Gate(
        GateKind.ORACLE_FLIP, tuple(work_wires) + (oracle_wire,), predicate=p
    )


# ---------------------------------------------------------------------------
# DIMACS ingestion


def parse_dimacs_graph(text: str) -> Graph:
    """Parse DIMACS edge format: 'p edge n m' header, 'e u v' lines (1-based)."""
    n = None
    declared_m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise FormatError("duplicate problem line", f"line {lineno}")
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise FormatError(
                    f"expected 'p edge <n> <m>', got {line!r}", f"line {lineno}"
                )
            try:
                n, declared_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise FormatError("non-integer header fields", f"line {lineno}")
            if n < 0 or declared_m < 0:
                raise FormatError("negative header fields", f"line {lineno}")
        elif parts[0] == "e":
            if n is None:
                raise FormatError("edge before problem line", f"line {lineno}")
            if len(parts) != 3:
                raise FormatError(f"expected 'e <u> <v>', got {line!r}", f"line {lineno}")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise FormatError("non-integer edge endpoints", f"line {lineno}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise FormatError(
                    f"edge ({u},{v}) outside vertex range 1..{n}", f"line {lineno}"
                )
            if u == v:
                raise FormatError(f"self-loop at vertex {u}", f"line {lineno}")
            edges.append((u - 1, v - 1))
        else:
            raise FormatError(f"unrecognized line {line!r}", f"line {lineno}")
    if n is None:
        raise FormatError("missing 'p edge' problem line")
    graph = Graph.from_edges(n, edges)
    if declared_m != len(edges):
        raise FormatError(
            f"header declares {declared_m} edges, file has {len(edges)}"
        )
    return graph


def parse_dimacs_cnf(text: str) -> CnfFormula:
    """Parse DIMACS CNF: 'p cnf n m' header, clauses terminated by 0."""
    n_vars = None
    declared_m = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if n_vars is not None:
                raise FormatError("duplicate problem line", f"line {lineno}")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(
                    f"expected 'p cnf <n> <m>', got {line!r}", f"line {lineno}"
                )
            try:
                n_vars, declared_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise FormatError("non-integer header fields", f"line {lineno}")
            continue
        if n_vars is None:
            raise FormatError("clause before problem line", f"line {lineno}")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise FormatError(f"non-integer literal {tok!r}", f"line {lineno}")
            if lit == 0:
                if not current:
                    raise FormatError("empty clause", f"line {lineno}")
                clauses.append(tuple(current))
                current = []
            else:
                if abs(lit) > n_vars:
                    raise FormatError(
                        f"literal {lit} exceeds variable count {n_vars}",
                        f"line {lineno}",
                    )
                current.append(lit)
    if n_vars is None:
        raise FormatError("missing 'p cnf' problem line")
    if current:
        raise FormatError("unterminated clause at end of file")
    formula = CnfFormula(n_vars, tuple(clauses))
    if declared_m != len(clauses):
        raise FormatError(
            f"header declares {declared_m} clauses, file has {len(clauses)}"
        )
    return formula
