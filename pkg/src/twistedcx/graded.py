"""Graded spaces, graded maps, bounded complexes, and homotopy solvers.

Degree conventions: a GradedMap of shift s sends degree n to degree n + s.
A complex is a graded space with a square-zero shift +1 endomorphism.
"""
from __future__ import annotations

from .fields import Field
from .matrices import DimensionMismatch, LinearSystem, Matrix


class NotAComplex(ValueError):
    pass


class GradedSpace:
    __slots__ = ("field", "dims")

    def __init__(self, field: Field, dims: dict):
        self.field = field
        self.dims = {n: d for n, d in dims.items() if d}
        if any(d < 0 for d in self.dims.values()):
            raise DimensionMismatch("negative dimension")

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def degrees(self):
        return sorted(self.dims)

    def total_dim(self):
        return sum(self.dims.values())

    def is_zero(self):
        return not self.dims

    def __eq__(self, other):
        return (isinstance(other, GradedSpace) and self.field == other.field
                and self.dims == other.dims)

    def __hash__(self):
        return hash((self.field, tuple(sorted(self.dims.items()))))

    def __repr__(self):
        return f"GradedSpace({self.dims})"

    def shift(self, k: int) -> "GradedSpace":
        """Shifted space: result degree n holds the old degree n + k."""
        return GradedSpace(self.field, {n - k: d for n, d in self.dims.items()})

    def direct_sum(self, other: "GradedSpace") -> "GradedSpace":
        dims = dict(self.dims)
        for n, d in other.dims.items():
            dims[n] = dims.get(n, 0) + d
        return GradedSpace(self.field, dims)


class GradedMap:
    """Per-degree matrices source^n -> target^(n+shift); missing blocks are 0."""

    __slots__ = ("field", "source", "target", "shift", "blocks")

    def __init__(self, source: GradedSpace, target: GradedSpace, shift: int,
                 blocks=None):
        self.field = source.field
        self.source = source
        self.target = target
        self.shift = shift
        self.blocks = {}
        if blocks:
            for n, m in blocks.items():
                self._check_block(n, m)
                if not m.is_zero():
                    self.blocks[n] = m

    def _check_block(self, n, m):
        if m.rows != self.target.dim(n + self.shift) or m.cols != self.source.dim(n):
            raise DimensionMismatch(
                f"block at degree {n}: got {m.rows}x{m.cols}, want "
                f"{self.target.dim(n + self.shift)}x{self.source.dim(n)}")

    @classmethod
    def zero(cls, source, target, shift):
        return cls(source, target, shift)

    @classmethod
    def identity(cls, space):
        f = space.field
        return cls(space, space, 0,
                   {n: Matrix.identity(f, d) for n, d in space.dims.items()})

    def block(self, n) -> Matrix:
        if n in self.blocks:
            return self.blocks[n]
        return Matrix.zero(self.field, self.target.dim(n + self.shift),
                           self.source.dim(n))

    def is_zero(self):
        return not self.blocks

    def __eq__(self, other):
        return (isinstance(other, GradedMap) and self.shift == other.shift
                and self.source == other.source and self.target == other.target
                and self.blocks == other.blocks)

    def __hash__(self):
        return hash((self.shift, tuple(sorted(self.blocks.items()))))

    def __repr__(self):
        return f"GradedMap(shift={self.shift}, degrees={sorted(self.blocks)})"

    def __add__(self, other):
        if (self.shift != other.shift or self.source != other.source
                or self.target != other.target):
            raise DimensionMismatch("graded map add mismatch")
        degrees = set(self.blocks) | set(other.blocks)
        return GradedMap(self.source, self.target, self.shift,
                         {n: self.block(n) + other.block(n) for n in degrees})

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return GradedMap(self.source, self.target, self.shift,
                         {n: -m for n, m in self.blocks.items()})

    def scale(self, c):
        return GradedMap(self.source, self.target, self.shift,
                         {n: m.scale(c) for n, m in self.blocks.items()})

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self after other."""
        if other.target != self.source:
            raise DimensionMismatch("compose mismatch")
        out = {}
        for n, m in other.blocks.items():
            top = self.blocks.get(n + other.shift)
            if top is not None:
                out[n] = top @ m
        return GradedMap(other.source, self.target, self.shift + other.shift, out)

    def apply(self, n: int, vec):
        return self.block(n).apply(vec)

    def restrict_degrees(self, degrees):
        return GradedMap(self.source, self.target, self.shift,
                         {n: m for n, m in self.blocks.items() if n in degrees})


class ChainComplex:
    """Bounded complex: graded space plus differential of shift +1, d^2 = 0."""

    def __init__(self, space: GradedSpace, diff: GradedMap, check: bool = True):
        if diff.shift != 1 or diff.source != space or diff.target != space:
            raise NotAComplex("differential must be a shift +1 endomorphism")
        self.space = space
        self.diff = diff
        if check:
            sq = diff.compose(diff)
            if not sq.is_zero():
                raise NotAComplex("d^2 != 0")

    @property
    def field(self):
        return self.space.field

    def __eq__(self, other):
        return (isinstance(other, ChainComplex) and self.space == other.space
                and self.diff == other.diff)

    def __repr__(self):
        return f"ChainComplex(dims={self.space.dims})"


def cohomology_dims(cx: ChainComplex) -> dict:
    """dim ker(d^n) - rank(d^{n-1}) for each degree n with nonzero answer space."""
    out = {}
    for n in cx.space.degrees():
        dn = cx.diff.block(n)
        h = dn.nullity() - cx.diff.block(n - 1).rank()
        if h:
            out[n] = h
    return out


def is_acyclic(cx: ChainComplex) -> bool:
    return not cohomology_dims(cx)


def hom_diff(phi: GradedMap, d_target: GradedMap, d_source: GradedMap) -> GradedMap:
    """Hom-complex differential: d.phi - (-1)^{|phi|} phi.d."""
    sgn = -1 if phi.shift % 2 else 1
    out = d_target.compose(phi) - phi.compose(d_source).scale(phi.field.of(sgn))
    return out


def solve_hom_equation(d_target: GradedMap, d_source: GradedMap, rhs: GradedMap,
                       x_shift: int, sign: int):
    """Solve d_target . x + sign * x . d_source = rhs for x of shift x_shift.

    One exact sparse linear solve; returns a GradedMap or None.
    """
    f = rhs.field
    src, tgt = rhs.source, rhs.target
    sgn = f.of(sign)
    sys = LinearSystem(f)
    degrees = set()
    for n in src.degrees():
        degrees.add(n)
        degrees.add(n - 1)
    for n in sorted(degrees):
        rows_out = tgt.dim(n + x_shift + 1)
        cols_in = src.dim(n)
        # equation block at degree n: (dT x)^n + sign (x dS)^n = rhs^n
        dT = d_target.block(n + x_shift)
        dS = d_source.block(n)
        for i in range(rows_out):
            for j in range(cols_in):
                coeffs = {}
                for (a, b), v in dT.entries.items():
                    if a == i:
                        coeffs[("x", n, b, j)] = f.add(
                            coeffs.get(("x", n, b, j), f.zero), v)
                for (a, b), v in dS.entries.items():
                    if b == j:
                        key = ("x", n + 1, i, a)
                        coeffs[key] = f.add(coeffs.get(key, f.zero), f.mul(sgn, v))
                sys.add_equation(coeffs, rhs.block(n)[(i, j)])
    sol = sys.solve()
    if sol is None:
        return None
    blocks = {}
    for (_, n, i, j), v in sol.items():
        blocks.setdefault(n, {})[(i, j)] = v
    gm_blocks = {}
    for n, ent in blocks.items():
        gm_blocks[n] = Matrix(f, tgt.dim(n + x_shift), src.dim(n), ent)
    return GradedMap(src, tgt, x_shift, gm_blocks)


def null_homotopy(phi: GradedMap, source_cx: ChainComplex, target_cx: ChainComplex):
    """h with d_D h + h d_C = phi, exactly, or None if no homotopy exists."""
    if phi.source != source_cx.space or phi.target != target_cx.space:
        raise DimensionMismatch("null_homotopy spaces mismatch")
    h = solve_hom_equation(target_cx.diff, source_cx.diff, phi,
                           phi.shift - 1, +1)
    if h is None:
        return None
    check = target_cx.diff.compose(h) + h.compose(source_cx.diff)
    assert check == phi, "solver returned a non-solution"
    return h


def _cohomology_data(cx: ChainComplex, n: int):
    """Cocycle basis and a map expressing membership of im d^{n-1}."""
    zn = cx.diff.block(n).nullspace()  # basis of ker d^n
    return zn


def induced_on_cohomology(phi: GradedMap, source_cx: ChainComplex,
                          target_cx: ChainComplex) -> dict:
    """Rank data of H(phi): {n: (rank of induced map)}.

    Brute-force oracle: push cocycle representatives through phi and compute
    the rank of their classes modulo coboundaries.
    """
    if phi.shift != 0:
        raise DimensionMismatch("induced map needs a degree 0 chain map")
    f = phi.field
    out = {}
    for n in sorted(set(source_cx.space.degrees()) | set(target_cx.space.degrees())):
        zsrc = _cohomology_data(source_cx, n)
        if not zsrc:
            out[n] = 0
            continue
        images = [phi.apply(n, v) for v in zsrc]
        # rank of images modulo im(d^{n-1}): rank([img | B]) - rank(B)
        bdry = target_cx.diff.block(n - 1)
        m = target_cx.space.dim(n)
        ent = {}
        for j, vec in enumerate(images):
            for i, val in enumerate(vec):
                if val != f.zero:
                    ent[(i, j)] = val
        off = len(images)
        for (i, j), v in bdry.entries.items():
            ent[(i, j + off)] = v
        combined = Matrix(f, m, off + bdry.cols, ent)
        out[n] = combined.rank() - bdry.rank()
    return {n: r for n, r in out.items() if r}


def is_quasi_iso(phi: GradedMap, source_cx: ChainComplex,
                 target_cx: ChainComplex) -> bool:
    """Chain map induces iso on cohomology <=> its cone is acyclic."""
    return is_acyclic(cone_complex(phi, source_cx, target_cx))


def cone_complex(phi: GradedMap, source_cx: ChainComplex,
                 target_cx: ChainComplex) -> ChainComplex:
    """Mapping cone: C^{n+1} (+) D^n with d = [[-d_C, 0], [phi, d_D]]."""
    if phi.shift != 0:
        raise DimensionMismatch("cone of a nonzero-degree map")
    f = phi.field
    csp, dsp = source_cx.space, target_cx.space
    dims = {}
    for n in set(x - 1 for x in csp.dims) | set(dsp.dims):
        dims[n] = csp.dim(n + 1) + dsp.dim(n)
    space = GradedSpace(f, dims)
    blocks = {}
    for n in space.degrees():
        rc, rd = csp.dim(n + 2), dsp.dim(n + 1)
        cc, cd = csp.dim(n + 1), dsp.dim(n)
        ent = {}
        for (i, j), v in source_cx.diff.block(n + 1).entries.items():
            ent[(i, j)] = f.neg(v)
        for (i, j), v in phi.block(n + 1).entries.items():
            ent[(i + rc, j)] = v
        for (i, j), v in target_cx.diff.block(n).entries.items():
            ent[(i + rc, j + cc)] = v
        blocks[n] = Matrix(f, rc + rd, cc + cd, ent)
    return ChainComplex(space, GradedMap(space, space, 1, blocks), check=False)


class Reduction:
    """Strong deformation retract data: i p = dh + hd + id relations.

    Satisfies p.i = id_M, i.p - id_C = d h + h d, with M the minimal part.
    """

    def __init__(self, minimal: ChainComplex, total: ChainComplex,
                 inclusion: GradedMap, projection: GradedMap, homotopy: GradedMap):
        self.minimal = minimal
        self.total = total
        self.inclusion = inclusion
        self.projection = projection
        self.homotopy = homotopy

    def verify(self):
        f = self.total.field
        assert self.projection.compose(self.inclusion) == GradedMap.identity(
            self.minimal.space)
        lhs = self.inclusion.compose(self.projection) - GradedMap.identity(
            self.total.space)
        rhs = self.total.diff.compose(self.homotopy) + self.homotopy.compose(
            self.total.diff)
        assert lhs == rhs
        assert self.minimal.diff.compose(self.projection) == \
            self.projection.compose(self.total.diff)
        assert self.total.diff.compose(self.inclusion) == \
            self.inclusion.compose(self.minimal.diff)
        return True


def minimize_complex(cx: ChainComplex) -> Reduction:
    """Iterated elimination of invertible differential entries.

    Over a field this reaches the zero differential; dims of the result equal
    the cohomology dims.  Pivot: smallest (degree, row, col) nonzero entry.
    """
    f = cx.field
    cur = cx
    incl = GradedMap.identity(cx.space)
    proj = GradedMap.identity(cx.space)
    htp = GradedMap.zero(cx.space, cx.space, -1)
    while True:
        pick = None
        for n in cur.space.degrees():
            blk = cur.diff.blocks.get(n)
            if blk is not None and blk.entries:
                r, c = min(blk.entries)
                pick = (n, r, c, blk[(r, c)])
                break
        if pick is None:
            break
        n, r, c, u = pick
        nxt_space, i_step, p_step, h_step = _eliminate_pair(cur, n, r, c, u)
        new_diff = p_step.compose(cur.diff).compose(i_step)
        nxt = ChainComplex(nxt_space, new_diff, check=False)
        incl_prev, proj_prev = incl, proj
        incl = incl_prev.compose(i_step)
        proj = p_step.compose(proj_prev)
        htp = htp + incl_prev.compose(h_step).compose(proj_prev)
        cur = nxt
    return Reduction(cur, cx, incl, proj, htp)


def _eliminate_pair(cx: ChainComplex, n: int, r: int, c: int, u):
    """One Gaussian elimination step on basis vector c of C^n, r of C^{n+1}."""
    f = cx.field
    uinv = f.inv(u)
    dims = dict(cx.space.dims)
    dims[n] = dims.get(n, 0) - 1
    dims[n + 1] = dims.get(n + 1, 0) - 1
    new_space = GradedSpace(f, dims)

    def drop_index(dim, k):
        return [j for j in range(dim) if j != k]

    blk = cx.diff.block(n)
    i_blocks, p_blocks, h_blocks = {}, {}, {}
    for m in cx.space.degrees():
        dm = cx.space.dim(m)
        if m == n:
            keep = drop_index(dm, c)
            # i: a |-> a - e_c * u^{-1} * beta(a), beta = pivot row minus pivot
            ent = {}
            for new_j, old_j in enumerate(keep):
                ent[(old_j, new_j)] = f.one
                bval = blk[(r, old_j)]
                if bval != f.zero:
                    ent[(c, new_j)] = f.neg(f.mul(uinv, bval))
            i_blocks[m] = Matrix(f, dm, dm - 1, ent)
            # p: plain projection away from e_c
            ent = {(new_j, old_j): f.one for new_j, old_j in enumerate(keep)}
            p_blocks[m] = Matrix(f, dm - 1, dm, ent)
        elif m == n + 1:
            keep = drop_index(dm, r)
            ent = {(old_j, new_j): f.one for new_j, old_j in enumerate(keep)}
            i_blocks[m] = Matrix(f, dm, dm - 1, ent)
            # p: b |-> b - gamma u^{-1} y on the r-coordinate
            ent = {}
            for new_j, old_j in enumerate(keep):
                ent[(new_j, old_j)] = f.one
                gval = blk[(old_j, c)]
                if gval != f.zero:
                    ent[(new_j, r)] = f.neg(f.mul(gval, uinv))
            p_blocks[m] = Matrix(f, dm - 1, dm, ent)
            # h on degree n+1: (r y + b) |-> -c u^{-1} y  (sign fixed so that
            # i p - id = d h + h d)
            h_blocks[m] = Matrix(f, cx.space.dim(n), dm,
                                 {(c, r): f.neg(uinv)})
        else:
            i_blocks[m] = Matrix.identity(f, dm)
            p_blocks[m] = Matrix.identity(f, dm)
    i_step = GradedMap(new_space, cx.space, 0, i_blocks)
    p_step = GradedMap(cx.space, new_space, 0, p_blocks)
    h_step = GradedMap(cx.space, cx.space, -1, h_blocks)
    return new_space, i_step, p_step, h_step
