"""Twisted complexes: Maurer-Cartan data, shift, mapping cone, weak equivalence.

A twisted complex is a family of local graded presheaves E_i plus a total
degree 1 morphism a = sum_k a^{k,1-k} with delta a + a.a = 0; unless the
complex is flagged generalized, each a^{1,0}_{ii} must be chain homotopic to
the identity on (E_i, a^{0,1}_i).
"""
from __future__ import annotations

from .bigraded import (BigradedMorphism, CechCochain, FamilyMismatch, act,
                       cech_delta_cochain, cech_delta_morphism, compose, _sign)
from .graded import (ChainComplex, GradedMap, GradedSpace, cohomology_dims,
                     cone_complex, induced_on_cohomology, is_acyclic,
                     null_homotopy)
from .matrices import Matrix
from .presheaf import LocalFamily, LocalObject, Presheaf, ValidationFailure


class NotClosed(ValueError):
    pass


class WrongDegree(ValueError):
    pass


class MCInvalid(ValueError):
    pass


class TwistedComplex:
    def __init__(self, family: LocalFamily, mc: BigradedMorphism,
                 generalized: bool = False, check: bool = True):
        if mc.source != family or mc.target != family or mc.degree != 1:
            raise FamilyMismatch("MC datum must be a degree 1 endomorphism")
        self.family = family
        self.mc = mc
        self.generalized = generalized
        if check:
            bad = check_mc(family, mc)
            if bad:
                raise MCInvalid(f"Maurer-Cartan fails, first violation {bad[0]}")

    @property
    def nerve(self):
        return self.family.nerve

    @property
    def field(self):
        return self.family.field

    def local_complex(self, label, face) -> ChainComplex:
        """(E_i(face), a^{0,1}_i at face) as a plain complex."""
        space = self.family.space(label, face)
        d = self.mc.component((label,), face)
        return ChainComplex(space, d, check=False)

    def __repr__(self):
        g = ", generalized" if self.generalized else ""
        return f"TwistedComplex({list(self.family.locals)}{g})"


def check_mc(family: LocalFamily, a: BigradedMorphism):
    """Exact check of delta a + a.a = 0; returns violations as
    (cech degree, tuple, face, degrees of nonzero blocks)."""
    residual = cech_delta_morphism(a) + compose(a, a)
    out = []
    for J in residual.tuples():
        for face in sorted(residual.components[J],
                           key=lambda fc: (len(fc), tuple(sorted(fc)))):
            gm = residual.components[J][face]
            out.append((len(J) - 1, J, tuple(sorted(face)), sorted(gm.blocks)))
    return out


def morphism_diff(phi: BigradedMorphism, a: BigradedMorphism,
                  b: BigradedMorphism) -> BigradedMorphism:
    """d phi = delta phi + b.phi - (-1)^{|phi|} phi.a for phi: (E,a) -> (F,b)."""
    if phi.source != a.source or phi.target != b.source:
        raise FamilyMismatch("morphism_diff families mismatch")
    f = phi.source.field
    out = cech_delta_morphism(phi) + compose(b, phi)
    out = out - compose(phi, a).scale(_sign(f, phi.degree))
    return out


def delta_a(t: TwistedComplex, c: CechCochain) -> CechCochain:
    """The twisted differential delta_a c = delta c + a.c."""
    if c.family != t.family:
        raise FamilyMismatch("cochain not over this twisted complex")
    return cech_delta_cochain(c) + act(t.mc, c)


def check_idempotent(t: TwistedComplex, label):
    """-a^{1,0}_{ii} + a^{1,0}_{ii}a^{1,0}_{ii} + a^{0,1}_i a^{2,-1}_{iii}
    + a^{2,-1}_{iii} a^{0,1}_i = 0 exactly (the k = 2 MC component at (i,i,i))."""
    a = t.mc
    out = []
    for face in t.nerve.star(label):
        a10 = a.component((label, label), face)
        a01 = a.component((label,), face)
        a2 = a.component((label, label, label), face)
        resid = (-a10) + a10.compose(a10) + a01.compose(a2) + a2.compose(a01)
        if not resid.is_zero():
            out.append((label, tuple(sorted(face)), sorted(resid.blocks)))
    return out


def check_nondegenerate(t: TwistedComplex):
    """Per-index verdict: a^{1,0}_{ii} chain homotopic to id on (E_i, a^{0,1}_i),
    decided per face of star(i); witnesses returned.  Cross-checked against
    homotopy invertibility (induced map on cohomology is invertible)."""
    results = {}
    for label in t.nerve.labels:
        witnesses = {}
        ok = True
        for face in t.nerve.star(label):
            cx = t.local_complex(label, face)
            a10 = t.mc.component((label, label), face)
            phi = a10 - GradedMap.identity(cx.space)
            h = null_homotopy(phi, cx, cx)
            hdims = cohomology_dims(cx)
            ranks = induced_on_cohomology(a10, cx, cx)
            invertible = all(ranks.get(n, 0) == d for n, d in hdims.items())
            if (h is None) == invertible:
                # Lemma: homotopic to id <=> homotopy invertible; a mismatch
                # would be a kernel bug, not an input property.
                raise AssertionError(
                    f"homotopy-invertibility cross-check failed at {label}")
            if h is None:
                ok = False
            else:
                witnesses[frozenset(face)] = h
        results[label] = (ok, witnesses)
    return results


def is_nondegenerate(t: TwistedComplex) -> bool:
    return all(ok for ok, _ in check_nondegenerate(t).values())


def is_closed(phi, a, b) -> bool:
    return morphism_diff(phi, a, b).is_zero()


def is_weak_equivalence(phi: BigradedMorphism, a: BigradedMorphism,
                        b: BigradedMorphism) -> bool:
    """Closed, degree 0, and phi^{0,0}_i a quasi-isomorphism facewise,
    decided via acyclicity of the facewise mapping cone."""
    if phi.degree != 0:
        return False
    if not is_closed(phi, a, b):
        return False
    for label in phi.nerve.labels:
        for face in phi.nerve.star(label):
            src = ChainComplex(phi.source.space(label, face),
                               a.component((label,), face), check=False)
            tgt = ChainComplex(phi.target.space(label, face),
                               b.component((label,), face), check=False)
            comp = phi.component((label,), face)
            if not is_acyclic(cone_complex(comp, src, tgt)):
                return False
    return True


# -- shift -------------------------------------------------------------

def _shift_local(obj: LocalObject, k: int) -> LocalObject:
    vals = {f: sp.shift(k) for f, sp in obj.data.values.items()}
    rests = {}
    for (a, b), gm in obj.data.restrictions.items():
        rests[(a, b)] = GradedMap(vals[a], vals[b], 0,
                                  {n - k: m for n, m in gm.blocks.items()})
    return LocalObject(obj.base_index,
                       Presheaf(obj.data.nerve, obj.data.domain, vals, rests))


def shift_family(family: LocalFamily, k: int = 1) -> LocalFamily:
    return LocalFamily(family.nerve,
                       {lab: _shift_local(o, k) for lab, o in family.locals.items()})


def _reindex(gm: GradedMap, src_shift: int, tgt_shift: int,
             new_src: GradedSpace, new_tgt: GradedSpace) -> GradedMap:
    """View a graded map as one between shifted spaces (blocks re-keyed)."""
    blocks = {n - src_shift: m for n, m in gm.blocks.items()}
    return GradedMap(new_src, new_tgt, gm.shift + src_shift - tgt_shift, blocks)


def shift(t: TwistedComplex) -> TwistedComplex:
    """E[1]^n = E^{n+1}, a[1]^{k,1-k} = (-1)^{k-1} a^{k,1-k}."""
    f = t.field
    fam1 = shift_family(t.family, 1)
    a1 = BigradedMorphism(fam1, fam1, 1)
    for J, per in t.mc.components.items():
        k = len(J) - 1
        sgn = _sign(f, k - 1)
        for face, gm in per.items():
            new = _reindex(gm, 1, 1, fam1.space(J[-1], face),
                           fam1.space(J[0], face)).scale(sgn)
            a1.set_component(J, face, new)
    return TwistedComplex(fam1, a1, generalized=t.generalized, check=False)


def shift_morphism(phi: BigradedMorphism, src1: LocalFamily,
                   tgt1: LocalFamily) -> BigradedMorphism:
    """phi[1]^{p,q} = (-1)^q phi^{p,q} between the shifted families."""
    f = phi.source.field
    out = BigradedMorphism(src1, tgt1, phi.degree)
    for J, per in phi.components.items():
        q = phi.degree - (len(J) - 1)
        sgn = _sign(f, q)
        for face, gm in per.items():
            new = _reindex(gm, 1, 1, src1.space(J[-1], face),
                           tgt1.space(J[0], face)).scale(sgn)
            out.set_component(J, face, new)
    return out


# -- direct sums and the mapping cone -----------------------------------

def _sum_local(a: LocalObject, b: LocalObject) -> LocalObject:
    """Direct sum presheaf, A-part first."""
    assert a.base_index == b.base_index
    vals, rests = {}, {}
    for face in a.data.domain:
        vals[face] = a.space(face).direct_sum(b.space(face))
    field = a.field
    for (s, t_), ga in a.data.restrictions.items():
        gb = b.data.restrictions.get((s, t_), GradedMap.zero(
            b.space(s), b.space(t_), 0))
        blocks = {}
        for n in set(ga.blocks) | set(gb.blocks):
            ra, ca = a.space(t_).dim(n), a.space(s).dim(n)
            rb, cb = b.space(t_).dim(n), b.space(s).dim(n)
            ent = dict(ga.block(n).entries)
            for (i, j), v in gb.block(n).entries.items():
                ent[(i + ra, j + ca)] = v
            blocks[n] = Matrix(field, ra + rb, ca + cb, ent)
        rests[(s, t_)] = GradedMap(vals[s], vals[t_], 0, blocks)
    return LocalObject(a.base_index,
                       Presheaf(a.data.nerve, a.data.domain, vals, rests))


def sum_injections(a_space: GradedSpace, b_space: GradedSpace):
    """(sum, inj_a, inj_b, proj_a, proj_b) for A (+) B with A-part first."""
    f = a_space.field
    total = a_space.direct_sum(b_space)
    ia, ib, pa, pb = {}, {}, {}, {}
    for n in total.degrees():
        da, db = a_space.dim(n), b_space.dim(n)
        ia[n] = Matrix(f, da + db, da, {(i, i): f.one for i in range(da)})
        ib[n] = Matrix(f, da + db, db, {(i + da, i): f.one for i in range(db)})
        pa[n] = Matrix(f, da, da + db, {(i, i): f.one for i in range(da)})
        pb[n] = Matrix(f, db, da + db, {(i, i + da): f.one for i in range(db)})
    return (total,
            GradedMap(a_space, total, 0, ia), GradedMap(b_space, total, 0, ib),
            GradedMap(total, a_space, 0, pa), GradedMap(total, b_space, 0, pb))


def cone(phi: BigradedMorphism, a: BigradedMorphism, b: BigradedMorphism,
         generalized: bool = False) -> TwistedComplex:
    """Mapping cone of a closed degree 0 morphism phi: (E,a) -> (F,b).

    G^n_i = E^{n+1}_i (+) F^n_i with datum
    c^{k,1-k} = [[(-1)^{k-1} a, 0], [(-1)^k phi^{k,-k}, b]].
    """
    if phi.degree != 0:
        raise WrongDegree("cone needs a degree 0 morphism")
    if not is_closed(phi, a, b):
        raise NotClosed("cone needs a closed morphism")
    f = phi.source.field
    efam1 = shift_family(phi.source, 1)
    ffam = phi.target
    locals_ = {}
    for lab in phi.nerve.labels:
        locals_[lab] = _sum_local(efam1.local(lab), ffam.local(lab))
    gfam = LocalFamily(phi.nerve, locals_)

    cdat = BigradedMorphism(gfam, gfam, 1)
    tuples = set(a.components) | set(b.components) | set(phi.components)
    for J in tuples:
        k = len(J) - 1
        sa, sphi = _sign(f, k - 1), _sign(f, k)
        for face in phi.nerve.faces_above(frozenset(J)):
            e1_src = efam1.space(J[-1], face)
            e1_tgt = efam1.space(J[0], face)
            a_part = _reindex(a.component(J, face), 1, 1, e1_src, e1_tgt)
            phi_part = _reindex(phi.component(J, face), 1, 0, e1_src,
                                ffam.space(J[0], face))
            b_part = b.component(J, face)
            _, iae, ibf, pae, pbf = sum_injections(e1_src, ffam.space(J[-1], face))
            _, iat, ibt, pat, pbt = sum_injections(e1_tgt, ffam.space(J[0], face))
            comp = (iat.compose(a_part.scale(sa)).compose(pae)
                    + ibt.compose(phi_part.scale(sphi)).compose(pae)
                    + ibt.compose(b_part).compose(pbf))
            cdat.set_component(J, face, comp)
    return TwistedComplex(gfam, cdat, generalized=generalized, check=False)
