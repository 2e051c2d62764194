"""Sparse exact matrices and deterministic Gaussian elimination.

Matrices are immutable-by-convention dict-of-nonzeros over a Field.  Pivots are
always chosen as the smallest (row, col) among the remaining nonzero entries,
so every computation is reproducible byte for byte.
"""
from __future__ import annotations

from .fields import Field


class DimensionMismatch(ValueError):
    pass


class Matrix:
    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: Field, rows: int, cols: int, entries=None):
        if rows < 0 or cols < 0:
            raise DimensionMismatch("negative dimensions")
        self.field = field
        self.rows = rows
        self.cols = cols
        ent = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise DimensionMismatch(f"entry {(i, j)} outside {rows}x{cols}")
                if v != field.zero:
                    ent[(i, j)] = v
        self.entries = ent

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, field, rows, cols):
        return cls(field, rows, cols)

    @classmethod
    def identity(cls, field, n):
        one = field.one
        return cls(field, n, n, {(i, i): one for i in range(n)})

    @classmethod
    def from_rows(cls, field, rows_data):
        rows = len(rows_data)
        cols = len(rows_data[0]) if rows else 0
        ent = {}
        for i, row in enumerate(rows_data):
            if len(row) != cols:
                raise DimensionMismatch("ragged rows")
            for j, v in enumerate(row):
                v = field.of(v)
                if v != field.zero:
                    ent[(i, j)] = v
        return cls(field, rows, cols, ent)

    # -- basic queries ------------------------------------------------
    def __getitem__(self, key):
        return self.entries.get(key, self.field.zero)

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(sorted(self.entries.items()))))

    def to_rows(self):
        z = self.field.zero
        data = [[z] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            data[i][j] = v
        return data

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {len(self.entries)} nz)"

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("add shape mismatch")
        f = self.field
        ent = dict(self.entries)
        for k, v in other.entries.items():
            s = f.add(ent.get(k, f.zero), v)
            if s == f.zero:
                ent.pop(k, None)
            else:
                ent[k] = s
        return Matrix(f, self.rows, self.cols, ent)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        f = self.field
        return Matrix(f, self.rows, self.cols,
                      {k: f.neg(v) for k, v in self.entries.items()})

    def scale(self, c):
        f = self.field
        if c == f.zero:
            return Matrix(f, self.rows, self.cols)
        return Matrix(f, self.rows, self.cols,
                      {k: f.mul(c, v) for k, v in self.entries.items()})

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"matmul {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        f = self.field
        # index other by row for sparse traversal
        by_row = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        ent = {}
        for (i, k), u in self.entries.items():
            for j, v in by_row.get(k, ()):
                key = (i, j)
                s = f.add(ent.get(key, f.zero), f.mul(u, v))
                if s == f.zero:
                    ent.pop(key, None)
                else:
                    ent[key] = s
        return Matrix(f, self.rows, other.cols, ent)

    def apply(self, vec):
        """Matrix times column vector (a sequence), returning a tuple."""
        if len(vec) != self.cols:
            raise DimensionMismatch("vector length mismatch")
        f = self.field
        out = [f.zero] * self.rows
        for (i, j), v in self.entries.items():
            x = vec[j]
            if x != f.zero:
                out[i] = f.add(out[i], f.mul(v, x))
        return tuple(out)

    # -- elimination --------------------------------------------------
    def _echelon(self):
        """Row echelon form; returns (rows as dicts col->val, pivot cols)."""
        f = self.field
        rows = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        pivots = []
        done_rows = set()
        while True:
            # smallest (row, col) among nonzero entries of unused rows
            best = None
            for i in range(self.rows):
                if i in done_rows or not rows[i]:
                    continue
                j = min(rows[i])
                if best is None or (i, j) < best:
                    best = (i, j)
                break  # rows scanned in order: first non-empty row wins
            if best is None:
                break
            pi, pj = best
            done_rows.add(pi)
            pivots.append((pi, pj))
            piv = rows[pi][pj]
            pinv = f.inv(piv)
            for i in range(self.rows):
                if i == pi or pj not in rows[i]:
                    continue
                c = f.mul(rows[i][pj], pinv)
                for j, v in rows[pi].items():
                    s = f.sub(rows[i].get(j, f.zero), f.mul(c, v))
                    if s == f.zero:
                        rows[i].pop(j, None)
                    else:
                        rows[i][j] = s
        return rows, pivots

    def rank(self) -> int:
        return len(self._echelon()[1])

    def nullity(self) -> int:
        return self.cols - self.rank()

    def solve(self, b):
        """Some x with Ax = b, or None if inconsistent.  Free variables are 0."""
        if len(b) != self.rows:
            raise DimensionMismatch("rhs length mismatch")
        f = self.field
        ent = dict(self.entries)
        for i, v in enumerate(b):
            v = f.of(v)
            if v != f.zero:
                ent[(i, self.cols)] = v
        aug = Matrix(f, self.rows, self.cols + 1, ent)
        rows, pivots = aug._echelon()
        x = [f.zero] * self.cols
        for pi, pj in pivots:
            if pj == self.cols:
                return None  # pivot in the constant column: inconsistent
            rhs = rows[pi].get(self.cols, f.zero)
            x[pj] = f.div(rhs, rows[pi][pj])
        return tuple(x)

    def nullspace(self):
        """Deterministic basis of the kernel, one vector per free column."""
        f = self.field
        rows, pivots = self._echelon()
        pivot_cols = {pj: pi for pi, pj in pivots}
        basis = []
        for j in range(self.cols):
            if j in pivot_cols:
                continue
            vec = [f.zero] * self.cols
            vec[j] = f.one
            for pj, pi in pivot_cols.items():
                # pivot row: piv * x_pj + sum_other = 0
                coeff = rows[pi].get(j, f.zero)
                if coeff != f.zero:
                    vec[pj] = f.neg(f.div(coeff, rows[pi][pj]))
            basis.append(tuple(vec))
        return basis


def hstack(mats):
    f = mats[0].field
    rows = mats[0].rows
    ent = {}
    off = 0
    for m in mats:
        if m.rows != rows:
            raise DimensionMismatch("hstack row mismatch")
        for (i, j), v in m.entries.items():
            ent[(i, j + off)] = v
        off += m.cols
    return Matrix(f, rows, off, ent)


def vstack(mats):
    f = mats[0].field
    cols = mats[0].cols
    ent = {}
    off = 0
    for m in mats:
        if m.cols != cols:
            raise DimensionMismatch("vstack col mismatch")
        for (i, j), v in m.entries.items():
            ent[(i + off, j)] = v
        off += m.rows
    return Matrix(f, off, cols, ent)


def block(field, grid, row_dims, col_dims):
    """Assemble a block matrix from a dict {(bi, bj): Matrix}."""
    roff = [0]
    for r in row_dims:
        roff.append(roff[-1] + r)
    coff = [0]
    for c in col_dims:
        coff.append(coff[-1] + c)
    ent = {}
    for (bi, bj), m in grid.items():
        if m is None:
            continue
        if m.rows != row_dims[bi] or m.cols != col_dims[bj]:
            raise DimensionMismatch("block shape mismatch")
        for (i, j), v in m.entries.items():
            ent[(i + roff[bi], j + coff[bj])] = v
    return Matrix(field, roff[-1], coff[-1], ent)


class LinearSystem:
    """Sparse affine system over arbitrary hashable variable keys.

    Equations are sum(coeff * var) = rhs; solve() returns a minimal-support
    solution (free variables zero) with deterministic variable ordering.
    """

    def __init__(self, field: Field):
        self.field = field
        self.rows = []  # (dict var->coeff, rhs)
        self._vars = {}

    def var_index(self, key):
        if key not in self._vars:
            self._vars[key] = len(self._vars)
        return self._vars[key]

    def add_equation(self, coeffs: dict, rhs):
        f = self.field
        clean = {}
        for k, v in coeffs.items():
            if v != f.zero:
                clean[self.var_index(k)] = v
        rhs = f.of(rhs)
        if not clean and rhs != f.zero:
            self.rows.append(({}, rhs))  # structurally inconsistent
        elif clean or rhs != f.zero:
            self.rows.append((clean, rhs))

    def solve(self):
        """Dict var->value, or None if inconsistent.  Unmentioned vars are 0."""
        f = self.field
        nvar = len(self._vars)
        ent = {}
        for i, (coeffs, rhs) in enumerate(self.rows):
            for j, v in coeffs.items():
                ent[(i, j)] = v
        mat = Matrix(f, len(self.rows), nvar, ent)
        b = [rhs for _, rhs in self.rows]
        x = mat.solve(b)
        if x is None:
            return None
        out = {}
        for key, j in self._vars.items():
            if x[j] != f.zero:
                out[key] = x[j]
        return out
