"""Fingerprint-map construction from AP coordinates alone.

For a chosen AP subset, every grid cell gets the signature formed by sorting
the subset's APs by distance to the cell centre.  Cells sharing a signature
form a region; the perpendicular bisectors of AP pairs are exactly the
region boundaries, so no site survey is involved anywhere.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .model import (
    ApDeployment,
    Signature,
    SubsetKey,
    _quantize,
    deployment_from_text,
    deployment_to_text,
    parse_signature,
    signature_to_text,
    subset_key,
)

DEFAULT_CELL_SIZE = 0.2

# Tolerance applied to width/cell_size before ceil() so that an exactly
# divisible area does not gain a spurious extra row from float division.
_DIV_EPS = 1e-9


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid covering the deployment area.

    Cell (i, j) has its centre at ((i + 0.5) * cell_size,
    (j + 0.5) * cell_size); i counts columns along x, j rows along y.
    """

    cell_size: float = DEFAULT_CELL_SIZE
    width: float = 0.0
    height: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "cell_size", _quantize(self.cell_size))
        object.__setattr__(self, "width", _quantize(self.width))
        object.__setattr__(self, "height", _quantize(self.height))
        if self.cell_size <= 0:
            raise ValueError("cell_size must be positive")
        if not (self.width > 0 and self.height > 0):
            raise ValueError("grid area must have positive width and height")

    @classmethod
    def for_deployment(cls, deployment: ApDeployment, cell_size: float = DEFAULT_CELL_SIZE) -> "GridSpec":
        return cls(cell_size=cell_size, width=deployment.width, height=deployment.height)

    @property
    def cols(self) -> int:
        return int(math.ceil(self.width / self.cell_size - _DIV_EPS))

    @property
    def rows(self) -> int:
        return int(math.ceil(self.height / self.cell_size - _DIV_EPS))

    @property
    def n_cells(self) -> int:
        return self.cols * self.rows

    def cell_center(self, i: int, j: int) -> tuple[float, float]:
        return ((i + 0.5) * self.cell_size, (j + 0.5) * self.cell_size)

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        """Grid cell containing the point (clamped onto the grid)."""
        i = min(max(int(x / self.cell_size), 0), self.cols - 1)
        j = min(max(int(y / self.cell_size), 0), self.rows - 1)
        return (i, j)

    def centers(self) -> np.ndarray:
        """All cell centres as an (n_cells, 2) array, j-major then i."""
        xs = (np.arange(self.cols) + 0.5) * self.cell_size
        ys = (np.arange(self.rows) + 0.5) * self.cell_size
        gx, gy = np.meshgrid(xs, ys)  # shape (rows, cols)
        return np.column_stack([gx.ravel(), gy.ravel()])


@dataclass(frozen=True)
class Region:
    """Cells sharing one signature, with summary geometry.

    centroid   mean of the member cell centres
    accuracy   mean distance of member centres to the centroid
    radius     max distance of member centres to the centroid

    All three are quantized to 6 fractional digits (file precision).
    cells is an (m, 2) int array of (i, j) indices sorted lexicographically.
    """

    signature: Signature
    cells: np.ndarray = field(compare=False)
    centroid: tuple[float, float] = (0.0, 0.0)
    accuracy: float = 0.0
    radius: float = 0.0

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=np.int32)
        if cells.ndim != 2 or cells.shape[1] != 2 or len(cells) == 0:
            raise ValueError("cells must be a non-empty (m, 2) index array")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(
            self, "centroid", (_quantize(self.centroid[0]), _quantize(self.centroid[1]))
        )
        object.__setattr__(self, "accuracy", _quantize(self.accuracy))
        object.__setattr__(self, "radius", _quantize(self.radius))
        if self.radius + 1e-9 < self.accuracy:
            raise ValueError("region radius cannot be below its accuracy")

    @property
    def cell_count(self) -> int:
        return len(self.cells)

    def __eq__(self, other):
        if not isinstance(other, Region):
            return NotImplemented
        return (
            self.signature == other.signature
            and self.centroid == other.centroid
            and self.accuracy == other.accuracy
            and self.radius == other.radius
            and np.array_equal(self.cells, other.cells)
        )


@dataclass(frozen=True, eq=False)
class FingerprintMap:
    """Partition of the grid into signature regions for one AP subset."""

    subset: SubsetKey
    grid: GridSpec
    regions: dict[Signature, Region]

    @property
    def n_regions(self) -> int:
        return len(self.regions)

    def region_at(self, x: float, y: float) -> Region:
        """Region owning the grid cell containing (x, y)."""
        cell = self.grid.cell_of(x, y)
        lookup = self.__dict__.get("_cell_lookup")
        if lookup is None:
            lookup = {
                (int(i), int(j)): region
                for region in self.regions.values()
                for i, j in region.cells
            }
            object.__setattr__(self, "_cell_lookup", lookup)
        try:
            return lookup[cell]
        except KeyError:
            raise ValueError(f"cell {cell} not covered by any region") from None

    def __eq__(self, other):
        if not isinstance(other, FingerprintMap):
            return NotImplemented
        return (
            self.subset == other.subset
            and self.grid == other.grid
            and self.regions == other.regions
        )


@dataclass(frozen=True, eq=False)
class MapStore:
    """All C(n, k) fingerprint maps of a deployment for one subset size k.

    build_ms is informational (wall-clock build time) and excluded from
    equality so that save/load round-trips compare equal.
    """

    deployment: ApDeployment
    k: int
    grid: GridSpec
    maps: dict[SubsetKey, FingerprintMap]
    build_ms: float = 0.0

    @property
    def n_maps(self) -> int:
        return len(self.maps)

    def __eq__(self, other):
        if not isinstance(other, MapStore):
            return NotImplemented
        return (
            self.deployment == other.deployment
            and self.k == other.k
            and self.grid == other.grid
            and self.maps == other.maps
        )


def enumerate_ap_subsets(ids: int | Iterable[int], k: int) -> list[SubsetKey]:
    """All k-subsets of the given AP ids in lexicographic order.

    `ids` may be an integer n (shorthand for ids 1..n) or an id collection.
    """
    pool = range(1, ids + 1) if isinstance(ids, int) else sorted(int(i) for i in ids)
    pool = list(pool)
    if not 2 <= k <= len(pool):
        raise ValueError(f"subset size {k} out of range [2, {len(pool)}]")
    return [tuple(c) for c in itertools.combinations(pool, k)]


def cell_signature(point: Sequence[float], subset: Iterable[int], deployment: ApDeployment) -> Signature:
    """Signature at a point: subset APs sorted by ascending distance.

    Distance ties break toward the smaller ap_id, mirroring the descending
    RSS sort used on the online side.
    """
    x, y = float(point[0]), float(point[1])
    sub = subset_key(subset)
    d2 = {}
    for i in sub:
        ax, ay = deployment.position(i)
        d2[i] = (x - ax) ** 2 + (y - ay) ** 2
    return tuple(sorted(sub, key=lambda i: (d2[i], i)))


def _signature_matrix(deployment: ApDeployment, subset: SubsetKey, grid: GridSpec) -> np.ndarray:
    """Per-cell signatures for all grid cells, shape (n_cells, k)."""
    centers = grid.centers()
    sub = np.asarray(subset, dtype=np.int16)
    pos = np.asarray(deployment.positions(subset), dtype=np.float64)
    # Squared distances, same arithmetic as cell_signature: dx*dx + dy*dy
    dx = centers[:, 0:1] - pos[None, :, 0]
    dy = centers[:, 1:2] - pos[None, :, 1]
    d2 = dx * dx + dy * dy
    # Stable argsort on distance; columns are in ascending-id order, so ties
    # resolve toward the smaller ap_id exactly as the scalar version does.
    order = np.argsort(d2, axis=1, kind="stable")
    return sub[order]


def build_fingerprint_map(
    deployment: ApDeployment, subset: Iterable[int], grid: GridSpec
) -> FingerprintMap:
    """Assign every grid cell its signature and collect the regions."""
    sub = subset_key(subset)
    for i in sub:
        deployment.position(i)  # validates membership
    sigs = _signature_matrix(deployment, sub, grid)
    centers = grid.centers()
    cols = grid.cols
    k = len(sub)
    if k <= 15:
        # Each row is a permutation of the subset; packing the per-row rank
        # positions into one base-k integer makes the row grouping a plain
        # scalar unique, far cheaper than np.unique over row tuples.
        pos = np.searchsorted(np.asarray(sub), sigs)
        weights = (k ** np.arange(k)).astype(np.int64)
        keys = pos.astype(np.int64) @ weights
        _, first_idx, inverse = np.unique(keys, return_index=True, return_inverse=True)
        uniq = sigs[first_idx]
    else:
        uniq, inverse = np.unique(sigs, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    order = np.argsort(inverse, kind="stable")
    sorted_inv = inverse[order]
    starts = np.flatnonzero(np.r_[True, sorted_inv[1:] != sorted_inv[:-1]])
    ends = np.r_[starts[1:], len(order)]
    regions: dict[Signature, Region] = {}
    for r, (s, e) in enumerate(zip(starts, ends)):
        row = uniq[r]
        flat = order[s:e]  # ascending flat indices (stable sort)
        ij = np.column_stack([flat % cols, flat // cols]).astype(np.int32)
        ij = ij[np.lexsort((ij[:, 1], ij[:, 0]))]  # sort by (i, j)
        pts = centers[flat]
        cx, cy = pts[:, 0].mean(), pts[:, 1].mean()
        dist = np.hypot(pts[:, 0] - cx, pts[:, 1] - cy)
        sig = tuple(int(v) for v in row)
        regions[sig] = Region(
            signature=sig,
            cells=ij,
            centroid=(float(cx), float(cy)),
            accuracy=float(dist.mean()),
            radius=float(dist.max()),
        )
    fmap = FingerprintMap(subset=sub, grid=grid, regions=regions)
    n = fmap.n_regions
    if n > min(math.factorial(len(sub)), grid.n_cells):
        raise AssertionError("region count exceeds the combinatorial bound")
    return fmap


def build_map_store(
    deployment: ApDeployment, k: int, grid: GridSpec | None = None
) -> MapStore:
    """Build fingerprint maps for every k-subset of the deployment's APs."""
    if grid is None:
        grid = GridSpec.for_deployment(deployment)
    t0 = time.perf_counter()
    maps: dict[SubsetKey, FingerprintMap] = {}
    for subset in enumerate_ap_subsets(deployment.ap_ids, k):
        maps[subset] = build_fingerprint_map(deployment, subset, grid)
    elapsed_ms = (time.perf_counter() - t0) * 1000.0
    n = deployment.n_aps
    assert len(maps) == math.comb(n, k)
    return MapStore(deployment=deployment, k=k, grid=grid, maps=maps, build_ms=elapsed_ms)


# ----------------------------------------------------------------------------
# Map-store file format:
#
#   APSEQMAP v1
#   <deployment block, same syntax as the deployment file>
#   grid <cell_size>
#   map <id> <id> ...
#   region <signature-text> <cx> <cy> <accuracy> <radius> <cell_count>
#   ...                                 (one map block per k-subset)
#
# Cell memberships are not stored; the loader recomputes each map from the
# deployment and grid, then verifies the declared signatures, cell counts
# and statistics.  All reals carry exactly six fractional digits, which
# together with construction-time quantization makes save -> load
# field-exact and re-saves byte-identical.

STORE_HEADER = "APSEQMAP v1"


def save_map_store(store: MapStore, path) -> None:
    with open(path, "w") as fh:
        fh.write(map_store_to_text(store))


def map_store_to_text(store: MapStore) -> str:
    out = [STORE_HEADER]
    out.append(deployment_to_text(store.deployment).rstrip("\n"))
    out.append(f"grid {store.grid.cell_size:.6f}")
    for subset in sorted(store.maps):
        fmap = store.maps[subset]
        out.append("map " + " ".join(str(i) for i in subset))
        for sig in sorted(fmap.regions):
            reg = fmap.regions[sig]
            out.append(
                f"region {signature_to_text(sig)} "
                f"{reg.centroid[0]:.6f} {reg.centroid[1]:.6f} "
                f"{reg.accuracy:.6f} {reg.radius:.6f} {reg.cell_count}"
            )
    return "\n".join(out) + "\n"


def load_map_store(path) -> MapStore:
    with open(path) as fh:
        return map_store_from_text(fh.read(), source=str(path))


def map_store_from_text(text: str, source: str = "<string>") -> MapStore:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != STORE_HEADER:
        raise ValueError(f"{source}: unsupported version (expected {STORE_HEADER!r})")
    pos = 1

    def take() -> str:
        nonlocal pos
        if pos >= len(lines):
            raise ValueError(f"{source}: truncated store file")
        ln = lines[pos]
        pos += 1
        return ln

    # Deployment block: header line then area/ap lines until 'grid'.
    dep_lines = [take()]
    if dep_lines[0] != "APSEQ-DEPLOY v1":
        raise ValueError(f"{source}: missing deployment block")
    while pos < len(lines) and not lines[pos].startswith("grid "):
        dep_lines.append(take())
    deployment = deployment_from_text("\n".join(dep_lines), source=source)

    grid_ln = take().split()
    if len(grid_ln) != 2 or grid_ln[0] != "grid":
        raise ValueError(f"{source}: malformed grid line")
    grid = GridSpec(cell_size=float(grid_ln[1]), width=deployment.width, height=deployment.height)

    maps: dict[SubsetKey, FingerprintMap] = {}
    k: int | None = None
    while pos < len(lines):
        map_ln = take().split()
        if map_ln[0] != "map":
            raise ValueError(f"{source}: expected map line, got {lines[pos - 1]!r}")
        subset = subset_key(int(i) for i in map_ln[1:])
        if k is None:
            k = len(subset)
        elif len(subset) != k:
            raise ValueError(f"{source}: map subset {subset} is not size {k}")
        if subset in maps:
            raise ValueError(f"{source}: duplicate map block for subset {subset}")
        declared: dict[Signature, tuple[float, float, float, float, int]] = {}
        while pos < len(lines) and lines[pos].startswith("region "):
            parts = take().split()
            if len(parts) != 7:
                raise ValueError(f"{source}: malformed region line {lines[pos - 1]!r}")
            sig = parse_signature(parts[1])
            if subset_key(sig) != subset:
                raise ValueError(f"{source}: region signature {parts[1]} not over map subset")
            if sig in declared:
                raise ValueError(f"{source}: duplicate region signature {parts[1]}")
            try:
                declared[sig] = (
                    float(parts[2]),
                    float(parts[3]),
                    float(parts[4]),
                    float(parts[5]),
                    int(parts[6]),
                )
            except ValueError:
                raise ValueError(
                    f"{source}: malformed region line {lines[pos - 1]!r}"
                ) from None
        # Rebuild the cell assignment and verify what the file declares.
        rebuilt = build_fingerprint_map(deployment, subset, grid)
        if len(declared) != rebuilt.n_regions:
            raise ValueError(
                f"{source}: map {subset} declares {len(declared)} regions, "
                f"rebuild gives {rebuilt.n_regions}"
            )
        if set(rebuilt.regions) != set(declared):
            raise ValueError(f"{source}: region signatures disagree with rebuild for map {subset}")
        regions: dict[Signature, Region] = {}
        for sig, (cx, cy, acc, rad, cell_count) in declared.items():
            reb = rebuilt.regions[sig]
            if reb.cell_count != cell_count:
                raise ValueError(
                    f"{source}: cell_count mismatch for region {signature_to_text(sig)} "
                    f"(file {cell_count}, rebuilt {reb.cell_count})"
                )
            if (
                abs(reb.centroid[0] - cx) > 2e-6
                or abs(reb.centroid[1] - cy) > 2e-6
                or abs(reb.accuracy - acc) > 2e-6
                or abs(reb.radius - rad) > 2e-6
            ):
                raise ValueError(f"{source}: region stats mismatch for {signature_to_text(sig)}")
            regions[sig] = Region(
                signature=sig, cells=reb.cells, centroid=(cx, cy), accuracy=acc, radius=rad
            )
        maps[subset] = FingerprintMap(subset=subset, grid=grid, regions=regions)
    if k is None:
        raise ValueError(f"{source}: store contains no maps")
    expected = math.comb(deployment.n_aps, k)
    if len(maps) != expected:
        raise ValueError(
            f"{source}: {len(maps)} maps does not match C({deployment.n_aps},{k})={expected}"
        )
    return MapStore(deployment=deployment, k=k, grid=grid, maps=maps)
