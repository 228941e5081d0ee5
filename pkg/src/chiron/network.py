"""Discrete Bayesian network data model, file format, validation, and sampling.

A network is a DAG of categorical nodes. Each node carries a conditional
probability table (CPT) with one row per combination of parent states and
one column per own state. Rows are addressed in mixed-radix order with the
LAST parent varying fastest; this convention is part of the on-disk format
and must not change.

The file format is UTF-8 JSON: a top-level object with ``name``, ``version``
and ``nodes`` (in declaration order); each node has ``name``, ``states``,
``parents`` and ``cpt`` (array of rows). The canonical form uses 2-space
indentation, keys in exactly that order, and probabilities rendered with up
to 12 significant digits. ``parse_network(serialize_network(spec))`` is the
identity; serializing a freshly-parsed file canonicalizes it.

Specs are treated as immutable once validated; the inference layer caches
derived tables on them, so never mutate a spec in place.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

ROW_SUM_TOLERANCE = 1e-9

Assignment = dict[str, int]
"""Map from node name to state index. Full = covers every node."""


class ModelFormatError(ValueError):
    """The network file is malformed (syntax or structural error)."""


class ModelValidationError(ValueError):
    """A structurally well-formed network violates a semantic invariant."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class Cpt:
    """Conditional probability table: one row per parent-state combination."""

    def __init__(self, rows: Iterable[Iterable[float]]):
        self.rows = np.asarray(rows, dtype=np.float64)
        if self.rows.ndim == 1:
            self.rows = self.rows.reshape(1, -1)

    @property
    def row_count(self) -> int:
        return self.rows.shape[0]

    @property
    def column_count(self) -> int:
        return self.rows.shape[1] if self.rows.ndim == 2 else 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cpt):
            return NotImplemented
        return self.rows.shape == other.rows.shape and bool(
            np.array_equal(self.rows, other.rows)
        )

    def __repr__(self) -> str:
        return f"Cpt({self.rows.tolist()!r})"


@dataclass
class NodeSpec:
    """A single categorical variable: states, parent links and CPT."""

    name: str
    states: tuple[str, ...]
    parents: tuple[str, ...]
    cpt: Cpt

    def __post_init__(self) -> None:
        self.states = tuple(self.states)
        self.parents = tuple(self.parents)

    @property
    def card(self) -> int:
        return len(self.states)

    def state_index(self, label: str) -> int:
        try:
            return self.states.index(label)
        except ValueError:
            raise KeyError(f"node {self.name!r} has no state {label!r}") from None


@dataclass
class NetworkSpec:
    """An ordered collection of nodes forming (when valid) a DAG."""

    name: str
    version: str
    nodes: tuple[NodeSpec, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.nodes = tuple(self.nodes)

    @property
    def node_names(self) -> tuple[str, ...]:
        return tuple(n.name for n in self.nodes)

    def node(self, name: str) -> NodeSpec:
        by_name = self._cache.get("by_name")
        if by_name is None:
            by_name = {n.name: n for n in self.nodes}
            self._cache["by_name"] = by_name
        try:
            return by_name[name]
        except KeyError:
            raise KeyError(f"unknown node {name!r}") from None

    def __contains__(self, name: str) -> bool:
        try:
            self.node(name)
            return True
        except KeyError:
            return False

    def cards(self) -> dict[str, int]:
        return {n.name: n.card for n in self.nodes}

    def topological_order(self) -> tuple[str, ...]:
        """Node names with every parent before its children.

        Raises ModelValidationError if the parent relation is cyclic.
        """
        order = self._cache.get("topo")
        if order is None:
            order = _topological_sort(self)
            self._cache["topo"] = order
        return order


def _topological_sort(spec: NetworkSpec) -> tuple[str, ...]:
    # Kahn's algorithm; deterministic because the ready queue follows
    # declaration order.
    names = [n.name for n in spec.nodes]
    indegree = {name: 0 for name in names}
    children: dict[str, list[str]] = {name: [] for name in names}
    for node in spec.nodes:
        for parent in node.parents:
            if parent not in indegree:
                raise ModelValidationError(
                    [f"node {node.name!r}: unknown parent {parent!r}"]
                )
            indegree[node.name] += 1
            children[parent].append(node.name)

    ready = [name for name in names if indegree[name] == 0]
    out: list[str] = []
    while ready:
        name = ready.pop(0)
        out.append(name)
        for child in children[name]:
            indegree[child] -= 1
            if indegree[child] == 0:
                ready.append(child)
    if len(out) != len(names):
        cycle = _find_cycle(spec)
        raise ModelValidationError([f"cycle: {' -> '.join(cycle)}"])
    return tuple(out)


def _find_cycle(spec: NetworkSpec) -> list[str]:
    """Return one directed cycle as a node-name path (last repeats first)."""
    parents = {n.name: list(n.parents) for n in spec.nodes}
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {name: WHITE for name in parents}
    stack: list[str] = []

    def visit(name: str) -> list[str] | None:
        color[name] = GRAY
        stack.append(name)
        for parent in parents[name]:
            if parent not in color:
                continue
            if color[parent] == GRAY:
                i = stack.index(parent)
                return stack[i:] + [parent]
            if color[parent] == WHITE:
                found = visit(parent)
                if found:
                    return found
        stack.pop()
        color[name] = BLACK
        return None

    for name in parents:
        if color[name] == WHITE:
            found = visit(name)
            if found:
                return found
    return []


def cpt_row_index(
    spec: NetworkSpec, node: NodeSpec | str, parent_states: Sequence[int]
) -> int:
    """Row index for a parent-state combination.

    Mixed-radix encoding with the last parent varying fastest:
    ``index = ((s_0 * c_1 + s_1) * c_2 + s_2) ...``. Root nodes map to 0.
    """
    if isinstance(node, str):
        node = spec.node(node)
    if len(parent_states) != len(node.parents):
        raise ValueError(
            f"node {node.name!r} has {len(node.parents)} parents, "
            f"got {len(parent_states)} states"
        )
    index = 0
    for parent_name, state in zip(node.parents, parent_states):
        card = spec.node(parent_name).card
        if not 0 <= state < card:
            raise ValueError(
                f"state index {state} out of range for parent {parent_name!r}"
            )
        index = index * card + state
    return index


def validate_network(spec: NetworkSpec) -> list[str]:
    """Check every structural invariant; returns violations (empty = valid).

    Violations are data, not exceptions: each is a human-readable string
    keyed by a stable prefix (``duplicate-node:``, ``cycle:``, ``row-sum:``,
    ...) naming the offending node and, where relevant, the row index.
    """
    violations: list[str] = []
    seen: set[str] = set()
    for node in spec.nodes:
        if node.name in seen:
            violations.append(f"duplicate-node: {node.name!r} declared twice")
        seen.add(node.name)

    declared = {n.name for n in spec.nodes}
    for node in spec.nodes:
        if len(node.states) < 2:
            violations.append(
                f"state-count: node {node.name!r} needs at least 2 states"
            )
        if len(set(node.states)) != len(node.states):
            violations.append(f"duplicate-state: node {node.name!r}")
        if node.name in node.parents:
            violations.append(f"self-parent: node {node.name!r}")
        if len(set(node.parents)) != len(node.parents):
            violations.append(f"duplicate-parent: node {node.name!r}")
        for parent in node.parents:
            if parent not in declared:
                violations.append(
                    f"unknown-parent: node {node.name!r} references {parent!r}"
                )

    # Cycle check only over resolvable edges.
    if not any(v.startswith(("unknown-parent", "duplicate-node")) for v in violations):
        try:
            _topological_sort(spec)
        except ModelValidationError as exc:
            violations.extend(exc.violations)

    for node in spec.nodes:
        rows = node.cpt.rows
        if rows.ndim != 2:
            violations.append(f"cpt-shape: node {node.name!r} is not a matrix")
            continue
        if rows.shape[1] != node.card:
            violations.append(
                f"cpt-shape: node {node.name!r} has {rows.shape[1]} columns, "
                f"expected {node.card}"
            )
        if all(p in declared for p in node.parents):
            expected_rows = 1
            for parent in node.parents:
                expected_rows *= spec.node(parent).card
            if rows.shape[0] != expected_rows:
                violations.append(
                    f"cpt-shape: node {node.name!r} has {rows.shape[0]} rows, "
                    f"expected {expected_rows}"
                )
        for i, row in enumerate(rows):
            if np.any(row < 0.0) or np.any(row > 1.0):
                violations.append(
                    f"prob-range: node {node.name!r} row {i} has an entry "
                    "outside [0, 1]"
                )
            total = float(row.sum())
            if not math.isclose(total, 1.0, rel_tol=0.0, abs_tol=ROW_SUM_TOLERANCE):
                violations.append(
                    f"row-sum: node {node.name!r} row {i} sums to {total!r}, "
                    "expected 1"
                )
    return violations


def joint_probability(spec: NetworkSpec, full: Mapping[str, int]) -> float:
    """Joint probability of a full assignment: the product of one CPT entry
    per node, each row selected by the assignment's parent states."""
    missing = [n.name for n in spec.nodes if n.name not in full]
    if missing:
        raise ValueError(f"assignment missing nodes: {missing}")
    p = 1.0
    for node in spec.nodes:
        state = full[node.name]
        if not 0 <= state < node.card:
            raise ValueError(
                f"state index {state} out of range for node {node.name!r}"
            )
        row = cpt_row_index(spec, node, [full[parent] for parent in node.parents])
        p *= float(node.cpt.rows[row, state])
    return p


def forward_sample(spec: NetworkSpec, seed: int) -> Assignment:
    """Draw one full assignment by ancestral sampling in topological order.

    Bit-reproducible for a fixed seed.
    """
    rng = np.random.default_rng(seed)
    return sample_with_rng(spec, rng)


def sample_with_rng(spec: NetworkSpec, rng: np.random.Generator) -> Assignment:
    """Ancestral sampling against a caller-managed generator stream."""
    assignment: Assignment = {}
    for name in spec.topological_order():
        node = spec.node(name)
        row = cpt_row_index(spec, node, [assignment[p] for p in node.parents])
        cum = np.cumsum(node.cpt.rows[row])
        u = rng.random()
        state = int(np.searchsorted(cum, u, side="right"))
        assignment[name] = min(state, node.card - 1)
    return assignment


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------


def parse_network(text: str) -> NetworkSpec:
    """Parse and fully validate a network file.

    Raises ModelFormatError (with line/column) for malformed documents and
    ModelValidationError carrying every violated invariant otherwise.
    """
    spec = build_network(text)
    violations = validate_network(spec)
    if violations:
        raise ModelValidationError(violations)
    return spec


def build_network(text: str) -> NetworkSpec:
    """Parse without semantic validation (shape checks only).

    Used by tooling that wants to report all violations instead of failing
    on the first; ``parse_network`` is the strict entry point.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(
            f"line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    return _network_from_obj(obj)


def _expect(obj, key: str, kind, path: str):
    if not isinstance(obj, dict):
        raise ModelFormatError(f"{path}: expected an object")
    if key not in obj:
        raise ModelFormatError(f"{path}: missing key {key!r}")
    value = obj[key]
    if not isinstance(value, kind):
        raise ModelFormatError(f"{path}.{key}: wrong type")
    return value


def _network_from_obj(obj) -> NetworkSpec:
    name = _expect(obj, "name", str, "$")
    version = _expect(obj, "version", str, "$")
    raw_nodes = _expect(obj, "nodes", list, "$")
    nodes = []
    for i, raw in enumerate(raw_nodes):
        path = f"$.nodes[{i}]"
        node_name = _expect(raw, "name", str, path)
        states = _expect(raw, "states", list, path)
        parents = _expect(raw, "parents", list, path)
        cpt_rows = _expect(raw, "cpt", list, path)
        if not all(isinstance(s, str) for s in states):
            raise ModelFormatError(f"{path}.states: entries must be strings")
        if not all(isinstance(p, str) for p in parents):
            raise ModelFormatError(f"{path}.parents: entries must be strings")
        rows: list[list[float]] = []
        for j, raw_row in enumerate(cpt_rows):
            if not isinstance(raw_row, list) or not all(
                isinstance(x, (int, float)) and not isinstance(x, bool)
                for x in raw_row
            ):
                raise ModelFormatError(
                    f"{path}.cpt[{j}]: expected an array of numbers"
                )
            rows.append([float(x) for x in raw_row])
        if not rows:
            raise ModelFormatError(f"{path}.cpt: must have at least one row")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ModelFormatError(f"{path}.cpt: ragged rows")
        nodes.append(
            NodeSpec(
                name=node_name,
                states=tuple(states),
                parents=tuple(parents),
                cpt=Cpt(rows),
            )
        )
    return NetworkSpec(name=name, version=version, nodes=tuple(nodes))


def _format_probability(x: float) -> str:
    # Up to 12 significant digits; %g keeps short decimals short ("0.7").
    return f"{x:.12g}"


def serialize_network(spec: NetworkSpec) -> str:
    """Render the canonical file form (stable bytes for stable specs)."""
    out: list[str] = ["{"]
    out.append(f'  "name": {json.dumps(spec.name)},')
    out.append(f'  "version": {json.dumps(spec.version)},')
    out.append('  "nodes": [')
    for i, node in enumerate(spec.nodes):
        out.append("    {")
        out.append(f'      "name": {json.dumps(node.name)},')
        states = ", ".join(json.dumps(s) for s in node.states)
        out.append(f'      "states": [{states}],')
        parents = ", ".join(json.dumps(p) for p in node.parents)
        out.append(f'      "parents": [{parents}],')
        out.append('      "cpt": [')
        for j, row in enumerate(node.cpt.rows):
            cells = ", ".join(_format_probability(float(x)) for x in row)
            comma = "," if j < node.cpt.row_count - 1 else ""
            out.append(f"        [{cells}]{comma}")
        out.append("      ]")
        comma = "," if i < len(spec.nodes) - 1 else ""
        out.append(f"    }}{comma}")
    out.append("  ]")
    out.append("}")
    return "\n".join(out) + "\n"


def state_indices(spec: NetworkSpec, labels: Mapping[str, str]) -> Assignment:
    """Translate a label-keyed assignment to state indices."""
    return {name: spec.node(name).state_index(label) for name, label in labels.items()}


def state_labels(spec: NetworkSpec, assignment: Mapping[str, int]) -> dict[str, str]:
    """Translate a state-index assignment back to labels."""
    return {name: spec.node(name).states[idx] for name, idx in assignment.items()}


def all_assignments(spec: NetworkSpec) -> Iterable[Assignment]:
    """Iterate every full assignment (desk-scale networks only)."""
    names = spec.node_names
    ranges = [range(spec.node(n).card) for n in names]
    for combo in itertools.product(*ranges):
        yield dict(zip(names, combo))
