"""Multiplex network backbone: generation, validation and neighbour queries."""

from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple
import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import sparse

from .errors import IndexDomainError
from .random_streams import NETWORK_STREAM, derive_rng


logger = logging.getLogger(__name__)

Edge = Tuple[int, int, int]


class GenParams(BaseModel):
    """Parameters of an Erdős–Rényi multiplex with identical node sets."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1, description="node count")
    l: int = Field(ge=1, description="layer count")
    p: float = Field(ge=0.0, le=1.0, description="edge probability, shared by all layers")
    rng_seed: int = Field(default=0, ge=0, le=(1 << 64) - 1)


@dataclass(frozen=True)
class Violation:
    """A single broken network invariant."""

    kind: str
    layer: int
    u: Optional[int] = None
    v: Optional[int] = None
    detail: str = ""

    def describe(self) -> str:
        where = f"layer {self.layer}"
        if self.u is not None:
            where += f", node {self.u}"
        if self.v is not None:
            where += f", neighbour {self.v}"
        suffix = f" ({self.detail})" if self.detail else ""
        return f"{self.kind} at {where}{suffix}"


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :meth:`MultiplexNetwork.validate`; violations are data, not errors."""

    violations: Tuple[Violation, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def of_kind(self, kind: str) -> List[Violation]:
        return [v for v in self.violations if v.kind == kind]

    def issues(self) -> List[str]:
        return [v.describe() for v in self.violations]


def _layer_from_pairs(n: int, src: np.ndarray, dst: np.ndarray) -> sparse.csr_matrix:
    """CSR layer with rows sorted by neighbour index; duplicates are kept as given."""
    order = np.lexsort((dst, src))
    indices = dst[order].astype(np.int64, copy=False)
    counts = np.bincount(src, minlength=n) if src.size else np.zeros(n, dtype=np.int64)
    indptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
    data = np.ones(indices.size, dtype=np.int32)
    return sparse.csr_matrix((data, indices, indptr), shape=(n, n))


class MultiplexNetwork:
    """Layers over a shared node set ``0..n-1``, one undirected adjacency per layer.

    The network is read-only after construction; all queries are safe to share
    across threads.
    """

    def __init__(self, n: int, layers: Sequence[sparse.csr_matrix]):
        self.n = int(n)
        self._layers: Tuple[sparse.csr_matrix, ...] = tuple(layers)
        self._degrees: Optional[np.ndarray] = None

    @property
    def l(self) -> int:
        return len(self._layers)

    @classmethod
    def from_neighbor_lists(cls, n: int, lists: Sequence[Sequence[Iterable[int]]]) -> 'MultiplexNetwork':
        """Build a network from raw per-layer neighbour lists without checking invariants."""
        layers = []
        for i, layer_lists in enumerate(lists):
            rows = [np.asarray(list(nbrs), dtype=np.int64) for nbrs in layer_lists]
            for u, row in enumerate(rows):
                if row.size and (row.min() < 0 or row.max() >= n):
                    raise IndexDomainError(f"Layer {i}, node {u}: neighbour index outside 0..{n - 1}")
            lengths = np.array([row.size for row in rows], dtype=np.int64)
            indptr = np.concatenate(([0], np.cumsum(lengths))).astype(np.int64)
            indices = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
            data = np.ones(indices.size, dtype=np.int32)
            layers.append(sparse.csr_matrix((data, indices, indptr), shape=(len(rows), n)))
        return cls(n, layers)

    @classmethod
    def from_edges(cls, n: int, l: int, edges: Iterable[Edge]) -> 'MultiplexNetwork':
        """Build a network from ``(layer, u, v)`` triples; each edge is stored in both directions."""
        triples = np.asarray(list(edges), dtype=np.int64).reshape(-1, 3)
        if triples.size:
            if triples[:, 0].min() < 0 or triples[:, 0].max() >= l:
                raise IndexDomainError(f"Layer index outside 0..{l - 1}")
            if triples[:, 1:].min() < 0 or triples[:, 1:].max() >= n:
                raise IndexDomainError(f"Node index outside 0..{n - 1}")
        layers = []
        for i in range(l):
            chosen = triples[triples[:, 0] == i]
            u, v = chosen[:, 1], chosen[:, 2]
            layers.append(_layer_from_pairs(n, np.concatenate((u, v)), np.concatenate((v, u))))
        return cls(n, layers)

    def _check_layer(self, i: int) -> None:
        if not 0 <= i < self.l:
            raise IndexDomainError(f"Layer {i} not in 0..{self.l - 1}")

    def _check_node(self, u: int) -> None:
        if not 0 <= u < self.n:
            raise IndexDomainError(f"Node {u} not in 0..{self.n - 1}")

    def neighbors(self, u: int, i: int) -> List[int]:
        """Sorted neighbours of node ``u`` in layer ``i``."""
        self._check_layer(i)
        self._check_node(u)
        layer = self._layers[i]
        if u >= layer.shape[0]:
            return []
        return layer.indices[layer.indptr[u]:layer.indptr[u + 1]].tolist()

    def adjacency(self, i: int) -> sparse.csr_matrix:
        """CSR adjacency of layer ``i``; callers must not mutate it."""
        self._check_layer(i)
        return self._layers[i]

    def degrees(self, i: int) -> np.ndarray:
        self._check_layer(i)
        return np.diff(self._layers[i].indptr)

    def degree_matrix(self) -> np.ndarray:
        """``l x n`` matrix of per-layer degrees."""
        if self._degrees is None:
            self._degrees = np.vstack([np.diff(layer.indptr) for layer in self._layers]) \
                if self._layers else np.zeros((0, self.n), dtype=np.int64)
        return self._degrees

    def edge_count(self, i: int) -> int:
        self._check_layer(i)
        return int(self._layers[i].nnz // 2)

    def mean_degree(self, i: int) -> float:
        return float(self.degrees(i).mean()) if self.n else 0.0

    def neighbor_counts(self, mask: np.ndarray) -> np.ndarray:
        """``l x n`` counts of neighbours for which ``mask`` is true."""
        weights = np.asarray(mask, dtype=np.int32)
        return np.vstack([layer @ weights for layer in self._layers])

    def edges(self) -> Iterator[Edge]:
        """Undirected edges as ``(layer, u, v)`` with ``u < v``, ordered by layer, u, v."""
        for i, layer in enumerate(self._layers):
            for u in range(layer.shape[0]):
                for v in layer.indices[layer.indptr[u]:layer.indptr[u + 1]]:
                    if u < v:
                        yield (i, u, int(v))

    def validate(self) -> ValidationReport:
        """Check slot count, self-loops, duplicates, ordering and symmetry of every layer."""
        violations: List[Violation] = []
        for i, layer in enumerate(self._layers):
            slots = layer.shape[0]
            if slots != self.n:
                violations.append(Violation("node_slots", i, detail=f"{slots} slots, expected {self.n}"))
                continue

            rows = np.repeat(np.arange(slots), np.diff(layer.indptr))
            cols = layer.indices.astype(np.int64)

            for u in np.unique(rows[rows == cols]):
                violations.append(Violation("self_loop", i, int(u), int(u)))

            same_row = rows[1:] == rows[:-1]
            for pos in np.flatnonzero(same_row & (np.diff(cols) < 0)):
                violations.append(Violation("unsorted", i, int(rows[pos])))

            keys = rows * self.n + cols
            sorted_keys = np.sort(keys)
            for key in np.unique(sorted_keys[1:][sorted_keys[1:] == sorted_keys[:-1]]):
                violations.append(Violation("duplicate", i, int(key // self.n), int(key % self.n)))

            mirrored = cols * self.n + rows
            for key in np.unique(keys[~np.isin(mirrored, keys)]):
                u, v = int(key // self.n), int(key % self.n)
                violations.append(Violation("asymmetric", i, u, v, detail=f"{v} lacks {u}"))

        report = ValidationReport(tuple(violations))
        if not report.is_valid:
            logger.debug(f"Network validation found {len(violations)} violation(s)")
        return report

    def visualize(self) -> str:
        """Short text summary of the layers."""
        lines = [f"MultiplexNetwork: n={self.n}, l={self.l}"]
        for i in range(self.l):
            lines.append(f"  - layer {i}: {self.edge_count(i)} edges, mean degree {self.mean_degree(i):.3f}")
        return "\n".join(lines)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiplexNetwork):
            return False
        if self.n != other.n or self.l != other.l:
            return False
        return all(
            a.shape == b.shape
            and np.array_equal(a.indptr, b.indptr)
            and np.array_equal(a.indices, b.indices)
            for a, b in zip(self._layers, other._layers)
        )

    def __repr__(self) -> str:
        edges = sum(layer.nnz for layer in self._layers) // 2
        return f"MultiplexNetwork(n={self.n}, l={self.l}, edges={edges})"


def generate_er_multiplex(params: GenParams) -> MultiplexNetwork:
    """Draw an ER multiplex: every node pair of every layer is linked with probability ``p``.

    Layer ``i`` uses its own stream keyed by ``(rng_seed, i)``, so adding layers
    leaves the earlier ones untouched.
    """
    n, p = params.n, params.p
    upper_u, upper_v = np.triu_indices(n, k=1)
    layers = []
    for i in range(params.l):
        rng = derive_rng(params.rng_seed, NETWORK_STREAM, i)
        chosen = rng.random(upper_u.size) < p
        u, v = upper_u[chosen], upper_v[chosen]
        layers.append(_layer_from_pairs(n, np.concatenate((u, v)), np.concatenate((v, u))))
    network = MultiplexNetwork(n, layers)
    logger.debug(f"Generated {network!r} with p={p}, rng_seed={params.rng_seed}")
    return network
