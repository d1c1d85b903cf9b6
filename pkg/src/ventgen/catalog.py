"""Building layout extraction, deduplication, filtering and feature descriptors."""
from __future__ import annotations

import csv
import io
import json
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

from .wfc import Solution, TileSet, tile_category

NON_APARTMENT = frozenset({"empty", "corridor", "core"})

FEATURE_COLUMNS = (
    "layout_id",
    "tile_count",
    "core_count",
    "corner_count",
    "facade_count",
    "apartment_count",
    "footprint_area",
    "aspect_ratio",
    "compactness",
)

_ROTATE_SUFFIX = {"n": "e", "e": "s", "s": "w", "w": "n", "h": "v", "v": "h"}
_REFLECT_SUFFIX = {"e": "w", "w": "e"}


@dataclass(frozen=True)
class BuildingLayout:
    """One 4-connected building component, origin-normalized.

    ``cells`` holds ``(row, col, tile_id)`` relative to the bounding box corner;
    ``bbox`` is ``(min_row, min_col, width, height)`` in the source solution.
    """

    cells: tuple[tuple[int, int, int], ...]
    bbox: tuple[int, int, int, int]
    tile_names: tuple[str, ...]

    @property
    def width(self) -> int:
        return self.bbox[2]

    @property
    def height(self) -> int:
        return self.bbox[3]

    def category(self, tile_id: int) -> str:
        return tile_category(self.tile_names[tile_id])

    def cell_map(self) -> dict[tuple[int, int], int]:
        return {(r, c): t for r, c, t in self.cells}

    def apartment_cells(self) -> list[tuple[int, int, int]]:
        return [cell for cell in self.cells if self.category(cell[2]) not in NON_APARTMENT]

    def to_dict(self) -> dict:
        return {"bbox": list(self.bbox), "cells": [list(c) for c in self.cells]}

    @classmethod
    def from_dict(cls, d: dict, tile_names: Sequence[str]) -> "BuildingLayout":
        return cls(tuple(tuple(c) for c in d["cells"]), tuple(d["bbox"]), tuple(tile_names))

    @classmethod
    def from_glyphs(cls, text: str, tileset: TileSet) -> "BuildingLayout":
        """Build a layout from a glyph map; ``.`` and unknown glyphs are empty."""
        lookup = {t.glyph: t.id for t in tileset.tiles if t.glyph}
        cells = []
        for r, line in enumerate(text.strip("\n").splitlines()):
            for c, ch in enumerate(line):
                tid = lookup.get(ch)
                if tid is not None and tileset.tiles[tid].category != "empty":
                    cells.append((r, c, tid))
        return normalize(cells, tuple(tileset.names))

    def glyphs(self, tileset: TileSet) -> str:
        grid = [["."] * self.width for _ in range(self.height)]
        for r, c, t in self.cells:
            grid[r][c] = tileset.tiles[t].glyph or "#"
        return "\n".join("".join(row) for row in grid)


@dataclass(frozen=True)
class LayoutFeatures:
    tile_count: int
    core_count: int
    corner_count: int
    facade_count: int
    apartment_count: int
    footprint_area: int
    aspect_ratio: float
    compactness: float

    def row(self, layout_id: str) -> list:
        return [
            layout_id,
            self.tile_count,
            self.core_count,
            self.corner_count,
            self.facade_count,
            self.apartment_count,
            self.footprint_area,
            f"{self.aspect_ratio:.6g}",
            f"{self.compactness:.6g}",
        ]


@dataclass(frozen=True)
class CatalogFilter:
    min_apartments: int = 10
    max_apartments: int = 15
    exclude_enclosed_voids: bool = True
    require_core: bool = True
    identify_reflections: bool = False
    apartment_rule: str = "tiles"  # or "runs"

    def __post_init__(self):
        if self.min_apartments > self.max_apartments:
            raise ValueError("min_apartments must not exceed max_apartments")
        if self.apartment_rule not in ("tiles", "runs"):
            raise ValueError(f"unknown apartment rule {self.apartment_rule!r}")


@dataclass
class CatalogEntry:
    layout_id: str
    key: bytes
    layout: BuildingLayout
    features: LayoutFeatures


@dataclass
class CatalogStats:
    raw: int = 0
    unique: int = 0
    with_core: int = 0
    without_void: int = 0
    in_range: int = 0
    excluded_voids: list[bytes] = field(default_factory=list)


def normalize(cells: Iterable[tuple[int, int, int]], tile_names: Sequence[str], origin=None) -> BuildingLayout:
    cells = list(cells)
    if not cells:
        raise ValueError("layout has no cells")
    r0 = min(r for r, _, _ in cells)
    c0 = min(c for _, c, _ in cells)
    h = max(r for r, _, _ in cells) - r0 + 1
    w = max(c for _, c, _ in cells) - c0 + 1
    norm = tuple(sorted((r - r0, c - c0, t) for r, c, t in cells))
    if origin is None:
        origin = (r0, c0)
    return BuildingLayout(norm, (origin[0], origin[1], w, h), tuple(tile_names))


def extract_layouts(solution: Solution, tileset: TileSet, require_core: bool = True) -> list[BuildingLayout]:
    """Flood-fill the non-empty tiles of ``solution`` into 4-connected components."""
    grid = solution.assignment.tolist()
    cats = [t.category for t in tileset.tiles]
    h, w = solution.height, solution.width
    seen = [[False] * w for _ in range(h)]
    layouts = []
    for r0 in range(h):
        for c0 in range(w):
            if seen[r0][c0] or cats[grid[r0][c0]] == "empty":
                continue
            comp = []
            seen[r0][c0] = True
            queue = deque([(r0, c0)])
            while queue:
                r, c = queue.popleft()
                comp.append((r, c, grid[r][c]))
                for rr, cc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
                    if 0 <= rr < h and 0 <= cc < w and not seen[rr][cc] and cats[grid[rr][cc]] != "empty":
                        seen[rr][cc] = True
                        queue.append((rr, cc))
            if require_core and not any(cats[t] == "core" for _, _, t in comp):
                continue
            r_min = min(r for r, _, _ in comp)
            c_min = min(c for _, c, _ in comp)
            layouts.append(normalize(comp, tileset.names, (r_min, c_min)))
    return layouts


def _tile_permutation(tile_names: Sequence[str], table: dict[str, str]) -> list[int]:
    index = {n: i for i, n in enumerate(tile_names)}
    perm = []
    for i, name in enumerate(tile_names):
        base, sep, suffix = name.partition(":")
        mapped = base + sep + table.get(suffix, suffix) if sep else name
        perm.append(index.get(mapped, i))
    return perm


def rotate(layout: BuildingLayout, turns: int = 1) -> BuildingLayout:
    """Rotate 90 degrees clockwise ``turns`` times; oriented tiles turn with the plan."""
    perm = _tile_permutation(layout.tile_names, _ROTATE_SUFFIX)
    cells = list(layout.cells)
    h = layout.height
    for _ in range(turns % 4):
        cells = [(c, h - 1 - r, perm[t]) for r, c, t in cells]
        h = max(r for r, _, _ in cells) + 1
    return normalize(cells, layout.tile_names, layout.bbox[:2])


def reflect(layout: BuildingLayout) -> BuildingLayout:
    """Mirror left-right."""
    perm = _tile_permutation(layout.tile_names, _REFLECT_SUFFIX)
    w = layout.width
    return normalize([(r, w - 1 - c, perm[t]) for r, c, t in layout.cells], layout.tile_names, layout.bbox[:2])


def _serialize(layout: BuildingLayout) -> bytes:
    grid = bytearray([0xFF]) * (layout.width * layout.height)
    for r, c, t in layout.cells:
        grid[r * layout.width + c] = t
    return bytes([layout.height >> 8, layout.height & 0xFF, layout.width >> 8, layout.width & 0xFF]) + bytes(grid)


def canonicalize(layout: BuildingLayout, reflections: bool = False) -> bytes:
    variants = [rotate(layout, k) for k in range(4)]
    if reflections:
        variants += [reflect(v) for v in variants]
    return min(_serialize(v) for v in variants)


def has_enclosed_void(layout: BuildingLayout) -> bool:
    """True when some non-building cell in the bbox cannot reach the bbox exterior."""
    w, h = layout.width, layout.height
    occupied = [[False] * (w + 2) for _ in range(h + 2)]
    for r, c, _ in layout.cells:
        occupied[r + 1][c + 1] = True
    # flood the padded frame from its corner
    reached = [[False] * (w + 2) for _ in range(h + 2)]
    reached[0][0] = True
    queue = deque([(0, 0)])
    while queue:
        r, c = queue.popleft()
        for rr, cc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if 0 <= rr < h + 2 and 0 <= cc < w + 2 and not reached[rr][cc] and not occupied[rr][cc]:
                reached[rr][cc] = True
                queue.append((rr, cc))
    return any(
        not occupied[r][c] and not reached[r][c] for r in range(1, h + 1) for c in range(1, w + 1)
    )


def _exposed_sides(cells: set[tuple[int, int]], r: int, c: int) -> tuple[bool, bool, bool, bool]:
    return (
        (r - 1, c) not in cells,
        (r, c + 1) not in cells,
        (r + 1, c) not in cells,
        (r, c - 1) not in cells,
    )


def count_apartments(layout: BuildingLayout, rule: str = "tiles") -> int:
    apartments = {(r, c) for r, c, _ in layout.apartment_cells()}
    if rule == "tiles":
        return len(apartments)
    # "runs": contiguous groups of apartment tiles
    seen: set[tuple[int, int]] = set()
    groups = 0
    for start in sorted(apartments):
        if start in seen:
            continue
        groups += 1
        seen.add(start)
        stack = [start]
        while stack:
            r, c = stack.pop()
            for nb in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
                if nb in apartments and nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
    return groups


def compute_features(layout: BuildingLayout, apartment_rule: str = "tiles") -> LayoutFeatures:
    occupied = {(r, c) for r, c, _ in layout.cells}
    facade = corner = 0
    for r, c, _ in layout.cells:
        n, e, s, w = _exposed_sides(occupied, r, c)
        if n or e or s or w:
            facade += 1
        if (n and e) or (e and s) or (s and w) or (w and n):
            corner += 1
    footprint = layout.width * layout.height
    return LayoutFeatures(
        tile_count=len(layout.cells),
        core_count=sum(1 for _, _, t in layout.cells if layout.category(t) == "core"),
        corner_count=corner,
        facade_count=facade,
        apartment_count=count_apartments(layout, apartment_rule),
        footprint_area=footprint,
        aspect_ratio=max(layout.width, layout.height) / min(layout.width, layout.height),
        compactness=len(layout.cells) / footprint,
    )


def build_catalog(
    solutions: Sequence[Solution],
    tileset: TileSet,
    filt: CatalogFilter = CatalogFilter(),
    stats: CatalogStats | None = None,
) -> list[CatalogEntry]:
    """Extract, dedup by canonical key, then apply core, void and apartment filters."""
    stats = stats if stats is not None else CatalogStats()
    unique: dict[bytes, BuildingLayout] = {}
    for sol in solutions:
        for layout in extract_layouts(sol, tileset, require_core=False):
            stats.raw += 1
            key = canonicalize(layout, filt.identify_reflections)
            unique.setdefault(key, layout)
    stats.unique = len(unique)

    kept = []
    for key in sorted(unique):
        layout = unique[key]
        if filt.require_core and not any(layout.category(t) == "core" for _, _, t in layout.cells):
            continue
        stats.with_core += 1
        if filt.exclude_enclosed_voids and has_enclosed_void(layout):
            stats.excluded_voids.append(key)
            continue
        stats.without_void += 1
        feats = compute_features(layout, filt.apartment_rule)
        if not filt.min_apartments <= feats.apartment_count <= filt.max_apartments:
            continue
        kept.append((key, layout, feats))
    stats.in_range = len(kept)
    return [CatalogEntry(f"L{i:04d}", key, layout, feats) for i, (key, layout, feats) in enumerate(kept)]


def catalog_to_json(entries: Sequence[CatalogEntry], tileset: TileSet) -> str:
    doc = {
        "tile_names": tileset.names,
        "layouts": [
            {
                "layout_id": e.layout_id,
                "key": e.key.hex(),
                **e.layout.to_dict(),
                "features": asdict(e.features),
                "glyphs": e.layout.glyphs(tileset).splitlines(),
            }
            for e in entries
        ],
    }
    return json.dumps(doc, indent=1)


def catalog_from_json(text: str) -> list[CatalogEntry]:
    doc = json.loads(text)
    names = doc["tile_names"]
    out = []
    for d in doc["layouts"]:
        layout = BuildingLayout.from_dict(d, names)
        f = d["features"]
        feats = LayoutFeatures(
            **{k: int(f[k]) for k in FEATURE_COLUMNS[1:7]},
            aspect_ratio=float(f["aspect_ratio"]),
            compactness=float(f["compactness"]),
        )
        out.append(CatalogEntry(d["layout_id"], bytes.fromhex(d["key"]), layout, feats))
    return out


def features_csv(entries: Sequence[CatalogEntry]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FEATURE_COLUMNS)
    for e in entries:
        writer.writerow(e.features.row(e.layout_id))
    return buf.getvalue()
