"""Simple tiled Wave Function Collapse over a rectangular grid.

Rules are learned verbatim from example grids (no rotation or reflection
augmentation).  Contradictions are handled by a full restart with a derived
sub-seed, which keeps every solve a pure function of its seed.
"""
from __future__ import annotations

import functools
import heapq
import json
import math
import random
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

# Direction order is fixed: N, E, S, W as (drow, dcol).
DIRECTIONS = ("N", "E", "S", "W")
OFFSETS = ((-1, 0), (0, 1), (1, 0), (0, -1))
OPPOSITE = (2, 3, 0, 1)

TILE_VOCABULARY = ("empty", "end_wall", "side_wall", "corridor", "core")
DEFAULT_WEIGHT_RANGE = (0.1, 10.0)
DEFAULT_RESTART_CAP = 100

GLYPHS = {
    "empty": ".",
    "end_wall": "E",
    "side_wall": "S",
    "corridor": "C",
    "core": "K",
}


def tile_category(name: str) -> str:
    """``side_wall:n`` -> ``side_wall``; oriented variants share a category."""
    return name.split(":", 1)[0]


class WFCError(Exception):
    """Base class for solver errors."""


class InvalidInputError(WFCError, ValueError):
    pass


class UnsatisfiableError(WFCError):
    """Raised when the restart budget is exhausted without a valid grid."""


@dataclass(frozen=True)
class Tile:
    id: int
    name: str
    weight: float = 1.0
    glyph: str | None = None

    @property
    def category(self) -> str:
        return tile_category(self.name)


@dataclass(frozen=True)
class TileSet:
    tiles: tuple[Tile, ...]

    def __post_init__(self):
        ids = [t.id for t in self.tiles]
        if ids != list(range(len(ids))):
            raise InvalidInputError(f"tile ids must be contiguous from 0, got {ids}")
        if not self.tiles:
            raise InvalidInputError("tile set is empty")
        for t in self.tiles:
            if not t.weight > 0:
                raise InvalidInputError(f"tile {t.name!r} has non-positive weight {t.weight}")

    def __len__(self) -> int:
        return len(self.tiles)

    @property
    def weights(self) -> np.ndarray:
        return np.array([t.weight for t in self.tiles], dtype=float)

    @property
    def names(self) -> list[str]:
        return [t.name for t in self.tiles]

    def id_of(self, name: str) -> int:
        for t in self.tiles:
            if t.name == name:
                return t.id
        raise KeyError(name)

    def with_weights(self, weights: Sequence[float]) -> "TileSet":
        if len(weights) != len(self.tiles):
            raise InvalidInputError("weight vector length does not match tile count")
        return TileSet(tuple(replace(t, weight=float(w)) for t, w in zip(self.tiles, weights)))

    @classmethod
    def from_names(cls, names: Sequence[str], weights: Sequence[float] | None = None) -> "TileSet":
        weights = [1.0] * len(names) if weights is None else weights
        return cls(tuple(Tile(i, n, float(w)) for i, (n, w) in enumerate(zip(names, weights))))


@dataclass(frozen=True)
class AdjacencyRules:
    """Allowed (tile, direction, neighbour) triples.

    ``allowed[d][a]`` is a bitmask of tiles that may sit in direction ``d``
    of tile ``a``.
    """

    n_tiles: int
    allowed: tuple[tuple[int, ...], ...]

    @classmethod
    def from_triples(cls, n_tiles: int, triples) -> "AdjacencyRules":
        table = [[0] * n_tiles for _ in range(4)]
        for a, d, b in triples:
            d = DIRECTIONS.index(d) if isinstance(d, str) else d
            table[d][a] |= 1 << b
            table[OPPOSITE[d]][b] |= 1 << a
        return cls(n_tiles, tuple(tuple(row) for row in table))

    def allows(self, a: int, direction, b: int) -> bool:
        d = DIRECTIONS.index(direction) if isinstance(direction, str) else direction
        return bool(self.allowed[d][a] >> b & 1)

    def triples(self) -> set[tuple[int, str, int]]:
        out = set()
        for d in range(4):
            for a in range(self.n_tiles):
                for b in range(self.n_tiles):
                    if self.allowed[d][a] >> b & 1:
                        out.add((a, DIRECTIONS[d], b))
        return out

    def __len__(self) -> int:
        return len(self.triples())

    @property
    def degenerate(self) -> bool:
        return any(self.allowed[d][a] == 0 for d in range(4) for a in range(self.n_tiles))

    def is_symmetric(self) -> bool:
        return all(
            self.allows(a, d, b) == self.allows(b, OPPOSITE[d], a)
            for d in range(4)
            for a in range(self.n_tiles)
            for b in range(self.n_tiles)
        )


@dataclass
class Solution:
    width: int
    height: int
    assignment: np.ndarray  # (height, width) int array of tile ids
    seed: int | None = None
    weights: list[float] | None = field(default=None, repr=False)

    def __eq__(self, other):
        return (
            isinstance(other, Solution)
            and self.width == other.width
            and self.height == other.height
            and np.array_equal(self.assignment, other.assignment)
        )

    def to_dict(self) -> dict:
        d = {"width": self.width, "height": self.height, "grid": self.assignment.tolist()}
        if self.seed is not None:
            d["seed"] = self.seed
        if self.weights is not None:
            d["weights"] = self.weights
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Solution":
        grid = np.asarray(d["grid"], dtype=np.int16)
        return cls(int(d["width"]), int(d["height"]), grid, d.get("seed"), d.get("weights"))


def _check_grid(example) -> np.ndarray:
    rows = [list(r) for r in example]
    if not rows or not rows[0]:
        raise InvalidInputError("example grid is empty")
    if any(len(r) != len(rows[0]) for r in rows):
        raise InvalidInputError("example grid is ragged")
    if any(not r for r in rows):
        raise InvalidInputError("example grid is empty")
    return np.asarray(rows, dtype=np.int64)


def learn_rules(example, n_tiles: int | None = None) -> AdjacencyRules:
    """Collect every adjacent pair observed in ``example`` as an allowed rule."""
    grid = _check_grid(example)
    if n_tiles is None:
        n_tiles = int(grid.max()) + 1
    triples = set()
    h, w = grid.shape
    for r in range(h):
        for c in range(w):
            if c + 1 < w:
                triples.add((int(grid[r, c]), 1, int(grid[r, c + 1])))
            if r + 1 < h:
                triples.add((int(grid[r, c]), 2, int(grid[r + 1, c])))
    return AdjacencyRules.from_triples(n_tiles, triples)


def sample_weights(tileset: TileSet, seed: int, weight_range=DEFAULT_WEIGHT_RANGE) -> TileSet:
    lo, hi = weight_range
    rng = np.random.default_rng(seed)
    return tileset.with_weights(rng.uniform(lo, hi, size=len(tileset)).tolist())


def derive_seed(*keys: int) -> int:
    """Counter-based seed splitting: the same key path always yields the same seed."""
    return int(np.random.SeedSequence([int(k) for k in keys]).generate_state(1, np.uint32)[0])


def _entropy(mask: int, weights: Sequence[float]) -> float:
    ws = [w for i, w in enumerate(weights) if mask >> i & 1]
    total = sum(ws)
    return math.log(total) - sum(w * math.log(w) for w in ws) / total


def check_solution(solution: Solution, rules: AdjacencyRules) -> list[tuple[int, int, str]]:
    """Return every (row, col, direction) whose neighbour violates the rules."""
    g = solution.assignment
    bad = []
    for r in range(solution.height):
        for c in range(solution.width):
            if c + 1 < solution.width and not rules.allows(int(g[r, c]), 1, int(g[r, c + 1])):
                bad.append((r, c, "E"))
            if r + 1 < solution.height and not rules.allows(int(g[r, c]), 2, int(g[r + 1, c])):
                bad.append((r, c, "S"))
    return bad


class _Contradiction(Exception):
    pass


@functools.lru_cache(maxsize=16)
def _support_table(rules: AdjacencyRules) -> tuple[list[int], ...]:
    # support[d][mask]: tiles allowed in direction d of any tile in mask
    n = rules.n_tiles
    support = tuple([0] * (1 << n) for _ in range(4))
    for m in range(1, 1 << n):
        low = m & -m
        t = low.bit_length() - 1
        for d in range(4):
            support[d][m] = support[d][m ^ low] | rules.allowed[d][t]
    return support


class _EntropyCache(dict):
    def __init__(self, weights):
        super().__init__()
        self.weights = weights

    def __missing__(self, mask):
        value = self[mask] = _entropy(mask, self.weights)
        return value


class WFCSolver:
    """Reusable solver bound to one tile set and rule set."""

    def __init__(
        self,
        tileset: TileSet,
        rules: AdjacencyRules,
        restart_cap: int = DEFAULT_RESTART_CAP,
        border_tile: str | int | None = None,
    ):
        if rules.n_tiles != len(tileset):
            raise InvalidInputError("rules and tile set disagree on tile count")
        if rules.degenerate:
            raise InvalidInputError("rule set is degenerate: some tile has no allowed neighbour")
        self.tileset = tileset
        self.rules = rules
        self.restart_cap = restart_cap
        if isinstance(border_tile, str):
            border_tile = tileset.id_of(border_tile)
        self.border_tile = border_tile
        n = len(tileset)
        self.full = (1 << n) - 1
        self.weights = [t.weight for t in tileset.tiles]
        self.support = _support_table(rules)
        self.entropy = _EntropyCache(self.weights)

    def solve(self, width: int, height: int, seed: int) -> Solution:
        if width < 1 or height < 1:
            raise InvalidInputError("grid dimensions must be >= 1")
        for attempt in range(self.restart_cap):
            rng = random.Random(derive_seed(seed, attempt))
            try:
                masks = self._run(width, height, rng)
            except _Contradiction:
                continue
            grid = np.array([m.bit_length() - 1 for m in masks], dtype=np.int16).reshape(height, width)
            return Solution(width, height, grid, seed=seed, weights=list(self.weights))
        raise UnsatisfiableError(
            f"no solution for {width}x{height} after {self.restart_cap} restarts (seed {seed})"
        )

    def _run(self, width: int, height: int, rng: random.Random) -> list[int]:
        n_cells = width * height
        masks = [self.full] * n_cells
        entropy = self.entropy
        # neighbour index per direction, -1 at the grid edge
        nbrs = []
        for i in range(n_cells):
            r, c = divmod(i, width)
            row = []
            for dr, dc in OFFSETS:
                rr, cc = r + dr, c + dc
                row.append(rr * width + cc if 0 <= rr < height and 0 <= cc < width else -1)
            nbrs.append(row)

        heap: list[tuple[float, int, int]] = []

        def propagate(stack):
            support = self.support
            while stack:
                i = stack.pop()
                m = masks[i]
                for d in range(4):
                    j = nbrs[i][d]
                    if j < 0:
                        continue
                    old = masks[j]
                    new = old & support[d][m]
                    if new != old:
                        if not new:
                            raise _Contradiction
                        masks[j] = new
                        stack.append(j)
                        if new & (new - 1):
                            heapq.heappush(heap, (entropy[new], j, new))

        if self.border_tile is not None:
            only = 1 << self.border_tile
            edge = [i for i in range(n_cells) if -1 in nbrs[i]]
            for i in edge:
                if not masks[i] & only:
                    raise _Contradiction
                masks[i] = only
            propagate(list(edge))

        if self.full & (self.full - 1):
            for i in range(n_cells):
                if masks[i] == self.full:
                    heap.append((entropy[self.full], i, self.full))
            heapq.heapify(heap)

        weights = self.weights
        while heap:
            _, i, m = heapq.heappop(heap)
            if masks[i] != m:
                continue
            # weighted observation among the remaining candidates
            cands = [t for t in range(len(weights)) if m >> t & 1]
            x = rng.random() * sum(weights[t] for t in cands)
            pick = cands[-1]
            for t in cands:
                x -= weights[t]
                if x < 0:
                    pick = t
                    break
            masks[i] = 1 << pick
            propagate([i])
        return masks


def solve(
    tileset: TileSet,
    rules: AdjacencyRules,
    width: int,
    height: int,
    seed: int,
    restart_cap: int = DEFAULT_RESTART_CAP,
    border_tile: str | int | None = None,
) -> Solution:
    return WFCSolver(tileset, rules, restart_cap, border_tile).solve(width, height, seed)


def to_glyphs(solution: Solution, tileset: TileSet) -> str:
    chars = [t.glyph or GLYPHS.get(t.category, t.name[:1].upper()) for t in tileset.tiles]
    return "\n".join("".join(chars[v] for v in row) for row in solution.assignment.tolist())


def load_tile_document(path_or_text) -> tuple[TileSet, np.ndarray]:
    """Read ``{tiles: [{id, name, weight}], example: [[id,...],...]}``."""
    if hasattr(path_or_text, "read"):
        doc = json.load(path_or_text)
    elif isinstance(path_or_text, dict):
        doc = path_or_text
    else:
        text = str(path_or_text)  # a path or a JSON string
        if text.lstrip().startswith("{"):
            doc = json.loads(text)
        else:
            with open(text) as fh:
                doc = json.load(fh)
    tiles = sorted(doc["tiles"], key=lambda t: t["id"])
    tileset = TileSet(
        tuple(Tile(int(t["id"]), t["name"], float(t.get("weight", 1.0)), t.get("glyph")) for t in tiles)
    )
    return tileset, _check_grid(doc["example"])


def dump_tile_document(tileset: TileSet, example) -> str:
    doc = {
        "tiles": [
            {"id": t.id, "name": t.name, "weight": t.weight, **({"glyph": t.glyph} if t.glyph else {})}
            for t in tileset.tiles
        ],
        "example": np.asarray(example).tolist(),
    }
    return json.dumps(doc, indent=1)
