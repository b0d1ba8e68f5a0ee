"""Exact dense linear algebra over GF(2) with labeled bases.

Vectors are 1-D numpy uint8 arrays and a matrix acts on column vectors
(``M @ v`` mod 2).  Row reduction is the single canonical algorithm for
rank/kernel/quotient computations, so every result is deterministic.
All matrices in this package are tiny (a few hundred entries at most);
a dense bit grid is the simplest representation at that scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class ImNotInKer(Exception):
    """An alleged boundary vector lies outside the kernel (d after d is not zero)."""


def as_matrix(rows, cols: int | None = None) -> np.ndarray:
    """Coerce a nested sequence (or array) to a uint8 matrix of 0/1 entries."""
    mat = np.asarray(rows, dtype=np.uint8) % 2
    if mat.ndim == 1:
        mat = mat.reshape(1, -1) if mat.size else mat.reshape(0, cols or 0)
    if mat.size == 0 and cols is not None:
        mat = mat.reshape(0, cols)
    return mat


def zeros(n: int) -> np.ndarray:
    return np.zeros(n, dtype=np.uint8)


def unit(n: int, i: int) -> np.ndarray:
    v = zeros(n)
    v[i] = 1
    return v


def rref(mat: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns, over GF(2)."""
    a = as_matrix(mat).copy()
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        others = np.nonzero(a[:, c])[0]
        for q in others:
            if q != r:
                a[q] ^= a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(mat: np.ndarray) -> int:
    """Rank over GF(2)."""
    return len(rref(mat)[1])


def kernel_basis(mat: np.ndarray) -> list[np.ndarray]:
    """Basis of the right null space: vectors v with M @ v = 0 (mod 2).

    Returns cols - rank(M) independent vectors, one per free column,
    in ascending free-column order.
    """
    a = as_matrix(mat)
    ncols = a.shape[1]
    red, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = zeros(ncols)
        v[f] = 1
        for row, p in zip(red, pivots):
            if row[f]:
                v[p] = 1
        basis.append(v)
    return basis


class EchelonBasis:
    """Incrementally maintained echelon basis with expression tracking.

    Every inserted vector gets an index; each echelon row remembers which
    inserted vectors XOR together to give it, so :meth:`reduce` can report
    the coordinates of a vector over the inserted spanning set.
    """

    def __init__(self, width: int):
        self.width = width
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []
        self.combos: list[set[int]] = []
        self.n_inserted = 0

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: np.ndarray) -> tuple[np.ndarray, set[int]]:
        """Return (residual, combo) with vec = residual + sum of inserted[combo]."""
        v = vec.copy()
        combo: set[int] = set()
        for row, piv, rc in zip(self.rows, self.pivots, self.combos):
            if v[piv]:
                v ^= row
                combo ^= rc
        return v, combo

    def insert(self, vec: np.ndarray) -> tuple[bool, set[int]]:
        """Insert a vector; report (added, combo-over-earlier-inserts if dependent)."""
        idx = self.n_inserted
        self.n_inserted += 1
        residual, combo = self.reduce(vec)
        hits = np.nonzero(residual)[0]
        if hits.size == 0:
            return False, combo
        piv = int(hits[0])
        rc = combo | {idx}
        # keep rows fully reduced so representatives stay canonical
        for i, row in enumerate(self.rows):
            if row[piv]:
                self.rows[i] = row ^ residual
                self.combos[i] = self.combos[i] ^ rc
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < piv:
            pos += 1
        self.rows.insert(pos, residual)
        self.pivots.insert(pos, piv)
        self.combos.insert(pos, rc)
        return True, rc

    def contains(self, vec: np.ndarray) -> bool:
        residual, _ = self.reduce(vec)
        return not residual.any()


@dataclass(frozen=True)
class LabeledSpace:
    """A GF(2) vector space with an ordered, pairwise-distinct label per basis vector."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("basis labels must be pairwise distinct")

    @property
    def dim(self) -> int:
        return len(self.labels)


@dataclass
class Subquotient:
    """ker/im presentation: representative vectors plus a coordinate map.

    ``reps`` are ambient vectors, independent modulo the image; ``coords``
    expresses any vector of ker (up to image) over the representatives.
    """

    ambient_dim: int
    reps: list[np.ndarray]
    space: LabeledSpace
    _ech: EchelonBasis = field(repr=False, default=None)
    _rep_index: dict = field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, vec: np.ndarray) -> np.ndarray | None:
        """Coordinates of vec over the representatives, or None if vec is not
        in ker + im."""
        residual, combo = self._ech.reduce(vec)
        if residual.any():
            return None
        out = zeros(len(self.reps))
        for i in combo:
            pos = self._rep_index.get(i)
            if pos is not None:
                out[pos] ^= 1
        return out


def subquotient(ambient: LabeledSpace | int,
                ker: list[np.ndarray],
                im: list[np.ndarray],
                label_prefix: str = "q") -> Subquotient:
    """Form ker/im inside an ambient space, with representative tracking.

    Raises ImNotInKer when some image vector falls outside span(ker); that
    is exactly the signature of an inconsistent differential upstream.
    """
    dim = ambient.dim if isinstance(ambient, LabeledSpace) else int(ambient)
    ker_ech = EchelonBasis(dim)
    for v in ker:
        ker_ech.insert(v)
    for v in im:
        if not ker_ech.contains(v):
            raise ImNotInKer("image vector outside the kernel")
    ech = EchelonBasis(dim)
    for v in im:
        ech.insert(v)
    reps = []
    rep_index: dict[int, int] = {}
    for v in ker:
        idx = ech.n_inserted
        added, _ = ech.insert(v)
        if added:
            rep_index[idx] = len(reps)
            reps.append(v.copy())
    labels = tuple(f"{label_prefix}{i}" for i in range(len(reps)))
    return Subquotient(dim, reps, LabeledSpace(labels), _ech=ech, _rep_index=rep_index)
