"""0/1 matrices, divisions, combinatorial cell rank, grid rank, and the six
universal patterns.

Matrices are bit-packed: ``rows[i]`` is an int whose bit ``j`` is entry
(i, j).  Renderings follow the bottom-left convention (entry (1,1) printed
at the bottom left), so row 0 is the first row of the matrix and the last
line of a picture.  Combinatorial rank of a cell is the maximum of the
number of distinct row vectors and distinct column vectors; grid rank of M
is the largest k such that some k-division has every cell of rank >= k.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Sequence

from tww.errors import Budget, BudgetExceededError, FormatError, ModelError

EXHAUSTIVE_LIMIT = 16

PATTERN_SHAPES = ("0", "1", "up", "down", "left", "right")


class BitMatrix:
    """Immutable 0/1 matrix with bit-packed rows."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[int]):
        if len(rows) != nrows:
            raise ValueError("row count mismatch")
        for r in rows:
            if r >> ncols:
                raise ValueError("row has bits beyond ncols")
        self.nrows = nrows
        self.ncols = ncols
        self.rows = tuple(rows)

    @classmethod
    def from_lists(cls, data: Sequence[Sequence[int]]) -> "BitMatrix":
        nrows = len(data)
        ncols = len(data[0]) if data else 0
        rows = []
        for row in data:
            if len(row) != ncols:
                raise ValueError("ragged rows")
            mask = 0
            for j, v in enumerate(row):
                if v not in (0, 1):
                    raise ValueError("entries must be 0/1")
                mask |= v << j
            rows.append(mask)
        return cls(nrows, ncols, rows)

    def get(self, i: int, j: int) -> int:
        return self.rows[i] >> j & 1

    def to_lists(self) -> list[list[int]]:
        return [[self.get(i, j) for j in range(self.ncols)] for i in range(self.nrows)]

    def column(self, j: int) -> int:
        mask = 0
        for i in range(self.nrows):
            mask |= (self.rows[i] >> j & 1) << i
        return mask

    def transpose(self) -> "BitMatrix":
        return BitMatrix(self.ncols, self.nrows, [self.column(j) for j in range(self.ncols)])

    def reverse_both(self) -> "BitMatrix":
        """Rows reversed and columns reversed (180 degree rotation)."""
        rev = []
        for i in range(self.nrows - 1, -1, -1):
            mask = 0
            for j in range(self.ncols):
                mask |= (self.rows[i] >> (self.ncols - 1 - j) & 1) << j
            rev.append(mask)
        return BitMatrix(self.nrows, self.ncols, rev)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "BitMatrix":
        rows = []
        for i in row_idx:
            mask = 0
            for jj, j in enumerate(col_idx):
                mask |= (self.rows[i] >> j & 1) << jj
            rows.append(mask)
        return BitMatrix(len(row_idx), len(col_idx), rows)

    def is_symmetric(self) -> bool:
        if self.nrows != self.ncols:
            return False
        return all(
            self.get(i, j) == self.get(j, i) for i in range(self.nrows) for j in range(i)
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.nrows, self.ncols, self.rows))

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.ncols})"


@dataclass(frozen=True)
class Division:
    """Partition of rows and columns into consecutive non-empty intervals,
    stored as part sizes."""

    row_sizes: tuple[int, ...]
    col_sizes: tuple[int, ...]

    def __post_init__(self):
        if any(s <= 0 for s in self.row_sizes) or any(s <= 0 for s in self.col_sizes):
            raise ModelError("division parts must be non-empty")

    def validate_for(self, m: BitMatrix) -> None:
        if sum(self.row_sizes) != m.nrows or sum(self.col_sizes) != m.ncols:
            raise ModelError("division does not cover the matrix")

    def row_intervals(self) -> list[tuple[int, int]]:
        return _intervals(self.row_sizes)

    def col_intervals(self) -> list[tuple[int, int]]:
        return _intervals(self.col_sizes)


def _intervals(sizes: Sequence[int]) -> list[tuple[int, int]]:
    out, start = [], 0
    for s in sizes:
        out.append((start, start + s))
        start += s
    return out


def cell_rank(m: BitMatrix, rows: tuple[int, int], cols: tuple[int, int]) -> int:
    """Combinatorial rank of the cell rows x cols (half-open intervals)."""
    r1, r2 = rows
    c1, c2 = cols
    if not (0 <= r1 < r2 <= m.nrows and 0 <= c1 < c2 <= m.ncols):
        raise ModelError("cell interval out of bounds")
    col_mask = ((1 << (c2 - c1)) - 1) << c1
    row_vecs = {(m.rows[i] & col_mask) for i in range(r1, r2)}
    n_rows = len(row_vecs)
    # Distinct columns: group column slices of the selected rows.
    col_vecs = set()
    for j in range(c1, c2):
        v = 0
        for k, i in enumerate(range(r1, r2)):
            v |= (m.rows[i] >> j & 1) << k
        col_vecs.add(v)
    return max(n_rows, len(col_vecs))


def is_rank_k_division(m: BitMatrix, division: Division, k: int) -> bool:
    division.validate_for(m)
    if len(division.row_sizes) != k or len(division.col_sizes) != k:
        return False
    for ri in division.row_intervals():
        for ci in division.col_intervals():
            if cell_rank(m, ri, ci) < k:
                return False
    return True


class _RankCache:
    """Memoized cell rank over rectangles of one matrix."""

    def __init__(self, m: BitMatrix):
        self.m = m
        self.cache: dict[tuple[int, int, int, int], int] = {}

    def rank(self, r1: int, r2: int, c1: int, c2: int) -> int:
        key = (r1, r2, c1, c2)
        val = self.cache.get(key)
        if val is None:
            val = cell_rank(self.m, (r1, r2), (c1, c2))
            self.cache[key] = val
        return val


def _greedy_columns(rank_of: Callable[[int, int, int, int], int],
                    row_iv: Sequence[tuple[int, int]], ncols: int, k: int) -> Division | None:
    """Given fixed row parts, find k column parts with all cells rank >= k.

    Cell rank is monotone under widening a column interval, so closing each
    part at the earliest feasible boundary is optimal.
    """
    sizes = []
    start = 0
    for part in range(k):
        if part == k - 1:
            end = ncols
            if end <= start:
                return None
            if all(rank_of(r1, r2, start, end) >= k for r1, r2 in row_iv):
                sizes.append(end - start)
                return Division(tuple(r2 - r1 for r1, r2 in row_iv), tuple(sizes))
            return None
        remaining = k - 1 - part
        found = None
        for end in range(start + 1, ncols - remaining + 1):
            if all(rank_of(r1, r2, start, end) >= k for r1, r2 in row_iv):
                found = end
                break
        if found is None:
            return None
        sizes.append(found - start)
        start = found
    return None


def _row_divisions(nrows: int, k: int) -> Iterable[list[tuple[int, int]]]:
    for cuts in combinations(range(1, nrows), k - 1):
        bounds = (0,) + cuts + (nrows,)
        yield [(bounds[i], bounds[i + 1]) for i in range(k)]


def find_rank_division(m: BitMatrix, k: int) -> Division | None:
    """Exact search for a rank-k division (enumerates row divisions, greedy
    on columns)."""
    if m.nrows == 0 or m.ncols == 0:
        return None
    if k == 1:
        return Division((m.nrows,), (m.ncols,))
    if k > m.nrows or k > m.ncols:
        return None
    cache = _RankCache(m)
    for row_iv in _row_divisions(m.nrows, k):
        div = _greedy_columns(cache.rank, row_iv, m.ncols, k)
        if div is not None:
            return div
    return None


def grid_rank(m: BitMatrix, exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> int:
    """Exact grid rank; limited to exhaustive_limit on each dimension."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    if m.nrows > exhaustive_limit or m.ncols > exhaustive_limit:
        raise ModelError(
            f"matrix {m.nrows}x{m.ncols} over the exhaustive limit "
            f"{exhaustive_limit}; use grid_rank_lower_bound"
        )
    for k in range(min(m.nrows, m.ncols), 1, -1):
        if find_rank_division(m, k) is not None:
            return k
    return 1


def grid_rank_lower_bound(m: BitMatrix, k: int,
                          exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> Division | None:
    """A rank-k division if the search finds one, else None.

    Sound: a returned division always passes is_rank_k_division.  Complete
    only up to the exhaustive limit; above it, greedy row proposals with
    boundary jitter are tried.
    """
    if m.nrows == 0 or m.ncols == 0 or k > m.nrows or k > m.ncols:
        return None
    if k == 1:
        return Division((m.nrows,), (m.ncols,))
    if m.nrows <= exhaustive_limit and m.ncols <= exhaustive_limit:
        return find_rank_division(m, k)
    cache = _RankCache(m)
    tried: set[tuple[int, ...]] = set()
    for cuts in _row_cut_proposals(m, k, cache):
        if cuts in tried:
            continue
        tried.add(cuts)
        bounds = (0,) + cuts + (m.nrows,)
        row_iv = [(bounds[i], bounds[i + 1]) for i in range(k)]
        div = _greedy_columns(cache.rank, row_iv, m.ncols, k)
        if div is not None:
            return div
    return None


def _row_cut_proposals(m: BitMatrix, k: int, cache: _RankCache) -> Iterable[tuple[int, ...]]:
    n = m.nrows
    base = tuple(round(i * n / k) for i in range(1, k))
    if len(set(base)) == k - 1 and all(0 < c < n for c in base):
        yield base
    # Greedy: close a row part once it has k distinct rows against all columns.
    cuts, start = [], 0
    for part in range(k - 1):
        end = start + 1
        while end < n - (k - 2 - part) and cache.rank(start, end, 0, m.ncols) < k:
            end += 1
        cuts.append(end)
        start = end
    if len(set(cuts)) == k - 1 and cuts[-1] < n:
        yield tuple(cuts)
        greedy = tuple(cuts)
    else:
        greedy = base
    # Local jitter around both proposals.
    for origin in (base, greedy):
        for pos in range(k - 1):
            for delta in (-2, -1, 1, 2):
                cand = list(origin)
                cand[pos] += delta
                cand_t = tuple(cand)
                if all(0 < c < n for c in cand_t) and len(set(cand_t)) == k - 1:
                    yield tuple(sorted(cand_t))


# ---------------------------------------------------------------------------
# Universal patterns


@dataclass(frozen=True)
class UniversalPatternId:
    k: int
    shape: str

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.shape not in PATTERN_SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}")


def _digit_swap(x: int, k: int) -> int:
    return (x % k) * k + x // k


def universal_pattern(pid: UniversalPatternId) -> BitMatrix:
    """The k^2 x k^2 universal pattern.

    The base shape "0" is the permutation matrix with one 1 per cell of the
    regular k-division, at position (i, j) of the (j, i)-cell; the other five
    shapes complement it or close it under one of the four directions.  Row 0
    is the bottom row of the rendered picture.
    """
    k = pid.k
    n = k * k
    rows = []
    for i in range(n):
        t_i = _digit_swap(i, k)
        mask = 0
        for j in range(n):
            if pid.shape == "0":
                bit = j == t_i
            elif pid.shape == "1":
                bit = j != t_i
            elif pid.shape == "up":
                bit = i >= _digit_swap(j, k)
            elif pid.shape == "down":
                bit = i <= _digit_swap(j, k)
            elif pid.shape == "left":
                bit = j <= t_i
            else:  # right
                bit = j >= t_i
            mask |= bit << j
        rows.append(mask)
    return BitMatrix(n, n, rows)


@dataclass(frozen=True)
class PatternOccurrence:
    """Selected strictly increasing row/column indices realizing a universal
    pattern entrywise, strictly off the diagonal."""

    pattern: UniversalPatternId
    row_idx: tuple[int, ...]
    col_idx: tuple[int, ...]
    side: str  # "above": max(col) < min(row); "below": max(row) < min(col)

    def verify(self, m: BitMatrix) -> bool:
        n = self.pattern.k ** 2
        if len(self.row_idx) != n or len(self.col_idx) != n:
            return False
        if list(self.row_idx) != sorted(set(self.row_idx)):
            return False
        if list(self.col_idx) != sorted(set(self.col_idx)):
            return False
        if self.side == "above":
            if not max(self.col_idx) < min(self.row_idx):
                return False
        elif self.side == "below":
            if not max(self.row_idx) < min(self.col_idx):
                return False
        else:
            return False
        return m.submatrix(self.row_idx, self.col_idx) == universal_pattern(self.pattern)

    def to_json(self) -> dict:
        return {
            "k": self.pattern.k,
            "shape": self.pattern.shape,
            "rows": list(self.row_idx),
            "cols": list(self.col_idx),
            "side": self.side,
        }


def find_universal_pattern(
    m: BitMatrix,
    k: int,
    side: str = "above",
    shapes: Sequence[str] = PATTERN_SHAPES,
    budget: Budget | None = None,
) -> PatternOccurrence | None:
    """Exhaustive search for some universal pattern M_k^s off the diagonal.

    Shapes are tried in the fixed order given; within a shape, row subsets
    are enumerated lexicographically and columns matched greedily left to
    right, so the returned certificate is deterministic.  Raises
    BudgetExceededError when the budget runs out (distinct from None).
    """
    if side not in ("above", "below"):
        raise ValueError("side must be 'above' or 'below'")
    if k > 4:
        raise ModelError("pattern search supports k <= 4")
    if budget is None:
        budget = Budget(max_nodes=5_000_000)
    n = k * k
    for shape in shapes:
        pid = UniversalPatternId(k, shape)
        pat = universal_pattern(pid)
        pat_cols = [pat.column(j) for j in range(n)]
        occ = _find_shape(m, pid, pat_cols, n, side, budget)
        if occ is not None:
            return occ
    return None


def _find_shape(m, pid, pat_cols, n, side, budget):
    if side == "above":
        # Need n columns strictly below the smallest row index.
        row_candidates = range(n, m.nrows)
    else:
        # Need n columns strictly after the largest row index.
        row_candidates = range(0, min(m.nrows, max(0, m.ncols - n)))
    for rows in combinations(row_candidates, n):
        budget.tick()
        if side == "above":
            col_range = range(0, min(rows[0], m.ncols))
        else:
            col_range = range(rows[-1] + 1, m.ncols)
        cols = _greedy_col_match(m, rows, pat_cols, col_range)
        if cols is not None:
            return PatternOccurrence(pid, tuple(rows), tuple(cols), side)
    return None


def _greedy_col_match(m, rows, pat_cols, col_range):
    """Match pattern columns to matrix columns left to right.

    Each pattern column is a fixed bit vector over the chosen rows, so the
    leftmost available matching column is always safe to take.
    """
    picked = []
    want = 0
    n = len(pat_cols)
    for j in col_range:
        v = 0
        for bit, i in enumerate(rows):
            v |= (m.rows[i] >> j & 1) << bit
        if v == pat_cols[want]:
            picked.append(j)
            want += 1
            if want == n:
                return picked
    return None


# ---------------------------------------------------------------------------
# Pairwise-product-alphabet grid rank (union harness)


def _generic_grid_rank(nrows: int, ncols: int,
                       rank_of: Callable[[int, int, int, int], int]) -> int:
    if nrows == 0 or ncols == 0:
        return 0
    memo: dict[tuple[int, int, int, int], int] = {}

    def rank(r1, r2, c1, c2):
        key = (r1, r2, c1, c2)
        v = memo.get(key)
        if v is None:
            v = rank_of(r1, r2, c1, c2)
            memo[key] = v
        return v

    for k in range(min(nrows, ncols), 1, -1):
        for row_iv in _row_divisions(nrows, k):
            if _greedy_columns(rank, row_iv, ncols, k) is not None:
                return k
    return 1


def union_grid_rank_check(m1: BitMatrix, m2: BitMatrix,
                          exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> tuple[int, int, int]:
    """(gr(m1), gr(m2), gr of the product-alphabet overlay of both).

    The overlay treats each entry as the pair (m1[i,j], m2[i,j]); rank still
    counts distinct row/column vectors, now over a 4-letter alphabet.
    """
    if (m1.nrows, m1.ncols) != (m2.nrows, m2.ncols):
        raise ModelError("dimension mismatch")
    if m1.nrows > exhaustive_limit or m1.ncols > exhaustive_limit:
        raise ModelError("matrices over the exhaustive limit")

    def pair_rank(r1, r2, c1, c2):
        col_mask = ((1 << (c2 - c1)) - 1) << c1
        rows = {(m1.rows[i] & col_mask, m2.rows[i] & col_mask) for i in range(r1, r2)}
        cols = set()
        for j in range(c1, c2):
            v1 = v2 = 0
            for k, i in enumerate(range(r1, r2)):
                v1 |= (m1.rows[i] >> j & 1) << k
                v2 |= (m2.rows[i] >> j & 1) << k
            cols.add((v1, v2))
        return max(len(rows), len(cols))

    return (grid_rank(m1, exhaustive_limit), grid_rank(m2, exhaustive_limit),
            _generic_grid_rank(m1.nrows, m1.ncols, pair_rank))


# ---------------------------------------------------------------------------
# File formats


def load_matrix(text: str) -> BitMatrix:
    lines = [ln for ln in (raw.split("#", 1)[0].strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise FormatError("empty matrix document")
    parts = lines[0].split()
    if len(parts) != 3 or parts[0] != "matrix":
        raise FormatError("expected 'matrix <rows> <cols>'")
    nrows, ncols = int(parts[1]), int(parts[2])
    if len(lines) - 1 != nrows:
        raise FormatError(f"expected {nrows} rows, got {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        if len(ln) != ncols or any(ch not in "01" for ch in ln):
            raise FormatError(f"bad matrix row {ln!r}")
        mask = 0
        for j, ch in enumerate(ln):
            mask |= (ch == "1") << j
        rows.append(mask)
    return BitMatrix(nrows, ncols, rows)


def dump_matrix(m: BitMatrix) -> str:
    out = [f"matrix {m.nrows} {m.ncols}"]
    for i in range(m.nrows):
        out.append("".join("1" if m.get(i, j) else "0" for j in range(m.ncols)))
    return "\n".join(out) + "\n"


def load_division(text: str) -> Division:
    lines = [ln for ln in (raw.split("#", 1)[0].strip() for raw in text.splitlines()) if ln]
    if len(lines) != 2:
        raise FormatError("division file needs two lines of part sizes")
    return Division(tuple(int(x) for x in lines[0].split()),
                    tuple(int(x) for x in lines[1].split()))


def dump_division(d: Division) -> str:
    return " ".join(map(str, d.row_sizes)) + "\n" + " ".join(map(str, d.col_sizes)) + "\n"
