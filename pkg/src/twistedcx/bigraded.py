"""The Cech-bigraded morphism algebra and cochain module.

Sign conventions (the whole point of this module):
  (u.v)_{i0..i_{p+r}} = (-1)^{q r} u_{i0..ip} o v_{ip..i_{p+r}}
     for u of bidegree (p, q) acting after v of Cech degree r;
  same sign for the action on cochains;
  (delta u)_{i0..i_{p+1}} = sum_{k=1..p}   (-1)^k u_{..hat i_k..}   (morphisms)
  (delta c)_{i0..i_{p+1}} = sum_{k=1..p+1} (-1)^k c_{..hat i_k..}   (cochains)
with every term restricted to the big face.  A morphism component at tuple J
is a natural family over faces >= set(J) of maps E_{last}(face) -> F_{first}(face).
"""
from __future__ import annotations

from .graded import GradedMap, GradedSpace
from .matrices import Matrix
from .nerve import delete_entry, face_key
from .presheaf import LocalFamily, ValidationFailure


class FamilyMismatch(ValueError):
    pass


def _sign(field, exponent: int):
    return field.of(-1) if exponent % 2 else field.one


class BigradedMorphism:
    """Element of C^*(U, Hom^*(E, F)) of one total degree.

    components[J][face] is a GradedMap of shift (degree - Cech degree of J);
    tuples whose underlying set is not a face never appear.
    """

    def __init__(self, source: LocalFamily, target: LocalFamily, degree: int,
                 components=None):
        if source.nerve != target.nerve:
            raise FamilyMismatch("source and target over different nerves")
        self.source = source
        self.target = target
        self.nerve = source.nerve
        self.degree = degree
        self.components = {}
        if components:
            for J, per_face in components.items():
                J = tuple(J)
                if not self.nerve.is_face(frozenset(J)):
                    raise ValidationFailure(f"tuple {J} is not over a face")
                for face, gm in per_face.items():
                    self.set_component(J, face, gm)

    # -- storage -------------------------------------------------------
    def set_component(self, J, face, gm: GradedMap):
        J = tuple(J)
        face = frozenset(face)
        if not face >= frozenset(J):
            raise ValidationFailure(f"face {set(face)} does not contain {J}")
        q = self.degree - (len(J) - 1)
        if gm.shift != q:
            raise ValidationFailure(
                f"component at {J} must have shift {q}, got {gm.shift}")
        if (gm.source != self.source.space(J[-1], face)
                or gm.target != self.target.space(J[0], face)):
            raise ValidationFailure(f"component spaces wrong at {J}, {set(face)}")
        if gm.is_zero():
            per = self.components.get(J)
            if per and face in per:
                del per[face]
                if not per:
                    del self.components[J]
            return
        self.components.setdefault(J, {})[face] = gm

    def component(self, J, face) -> GradedMap:
        J = tuple(J)
        face = frozenset(face)
        per = self.components.get(J)
        if per is not None and face in per:
            return per[face]
        q = self.degree - (len(J) - 1)
        return GradedMap.zero(self.source.space(J[-1], face),
                              self.target.space(J[0], face), q)

    def tuples(self):
        return sorted(self.components, key=lambda J: (len(J), J))

    def is_zero(self):
        return not self.components

    def max_cech(self):
        return max((len(J) - 1 for J in self.components), default=-1)

    def __eq__(self, other):
        return (isinstance(other, BigradedMorphism)
                and self.degree == other.degree
                and self.source == other.source and self.target == other.target
                and self.components == other.components)

    def __repr__(self):
        return f"BigradedMorphism(deg={self.degree}, tuples={self.tuples()})"

    # -- linear structure ----------------------------------------------
    def __add__(self, other):
        self._check_parallel(other)
        out = BigradedMorphism(self.source, self.target, self.degree)
        keys = set(self.components) | set(other.components)
        for J in keys:
            faces = set(self.components.get(J, ())) | set(other.components.get(J, ()))
            for face in faces:
                out.set_component(J, face,
                                  self.component(J, face) + other.component(J, face))
        return out

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self.scale(self.source.field.of(-1))

    def scale(self, c):
        out = BigradedMorphism(self.source, self.target, self.degree)
        for J, per in self.components.items():
            for face, gm in per.items():
                out.set_component(J, face, gm.scale(c))
        return out

    def _check_parallel(self, other):
        if (self.source != other.source or self.target != other.target
                or self.degree != other.degree):
            raise FamilyMismatch("morphisms not parallel")

    # -- structural checks ----------------------------------------------
    def naturality_violations(self):
        """Components must commute with restrictions of source and target."""
        bad = []
        for J in self.tuples():
            faces = self.nerve.faces_above(frozenset(J))
            for a in faces:
                for b in faces:
                    if not (a < b):
                        continue
                    left = self.target.local(J[0]).restriction(a, b).compose(
                        self.component(J, a))
                    right = self.component(J, b).compose(
                        self.source.local(J[-1]).restriction(a, b))
                    if left != right:
                        bad.append((J, tuple(sorted(a)), tuple(sorted(b))))
        return bad

    @classmethod
    def identity(cls, family: LocalFamily):
        out = cls(family, family, 0)
        for lab in family.nerve.labels:
            for face in family.nerve.star(lab):
                out.set_component((lab,), face,
                                  GradedMap.identity(family.space(lab, face)))
        return out

    @classmethod
    def zero(cls, source, target, degree):
        return cls(source, target, degree)


def compose(u: BigradedMorphism, v: BigradedMorphism) -> BigradedMorphism:
    """(u.v) with the (-1)^{qr} sign; u after v."""
    if v.target != u.source:
        raise FamilyMismatch("compose: target of v is not source of u")
    f = u.source.field
    out = BigradedMorphism(v.source, u.target, u.degree + v.degree)
    for Ju, per_u in u.components.items():
        pu = len(Ju) - 1
        qu = u.degree - pu
        for Jv, per_v in v.components.items():
            if Jv[0] != Ju[-1]:
                continue
            J = Ju + Jv[1:]
            if not u.nerve.is_face(frozenset(J)):
                continue
            rv = len(Jv) - 1
            sgn = _sign(f, qu * rv)
            for face, mu in per_u.items():
                mv = per_v.get(face)
                if mv is None or not (face >= frozenset(J)):
                    continue
                term = mu.compose(mv).scale(sgn)
                out.set_component(J, face, out.component(J, face) + term)
    return out


def cech_delta_morphism(u: BigradedMorphism) -> BigradedMorphism:
    """Interior-index Cech differential on morphisms (k = 1..p)."""
    f = u.source.field
    out = BigradedMorphism(u.source, u.target, u.degree + 1)
    nerve = u.nerve
    seen = set()
    for J in u.tuples():
        p1 = len(J)  # producing tuples of length p1 + 1
        for pos in range(1, p1):  # insertion positions become interior deletions
            for lab in nerve.labels:
                big = J[:pos] + (lab,) + J[pos:]
                if big in seen or not nerve.is_face(frozenset(big)):
                    continue
                seen.add(big)
                for face in nerve.faces_above(frozenset(big)):
                    acc = None
                    for k in range(1, len(big) - 1):
                        small = delete_entry(big, k)
                        term = u.component(small, face).scale(_sign(f, k))
                        acc = term if acc is None else acc + term
                    if acc is not None:
                        out.set_component(big, face, acc)
    return out


class CechCochain:
    """Element of C^*(U, E^*) of one total degree over a context face.

    components[J] is a vector in E_{J[0]}(set(J) u context) in degree
    (degree - Cech degree of J).
    """

    def __init__(self, family: LocalFamily, context, degree: int, components=None):
        self.family = family
        self.nerve = family.nerve
        self.context = frozenset(context)
        if self.context and self.context not in self.nerve.faces:
            raise ValidationFailure("context must be a face (or empty)")
        self.degree = degree
        self.components = {}
        if components:
            for J, vec in components.items():
                self.set_component(J, vec)

    def value_face(self, J):
        return frozenset(J) | self.context

    def set_component(self, J, vec):
        J = tuple(J)
        face = self.value_face(J)
        if face not in self.nerve.faces:
            raise ValidationFailure(f"tuple {J} dead over context")
        n = self.degree - (len(J) - 1)
        space = self.family.space(J[0], face)
        vec = tuple(vec)
        if len(vec) != space.dim(n):
            raise ValidationFailure(f"component at {J} has wrong length")
        f = self.family.field
        if any(x != f.zero for x in vec):
            self.components[J] = vec
        else:
            self.components.pop(J, None)

    def component(self, J):
        J = tuple(J)
        if J in self.components:
            return self.components[J]
        n = self.degree - (len(J) - 1)
        face = self.value_face(J)
        if face not in self.nerve.faces:
            return tuple()
        return tuple([self.family.field.zero]
                     * self.family.space(J[0], face).dim(n))

    def tuples(self):
        return sorted(self.components, key=lambda J: (len(J), J))

    def is_zero(self):
        return not self.components

    def __eq__(self, other):
        return (isinstance(other, CechCochain) and self.degree == other.degree
                and self.context == other.context
                and self.family == other.family
                and self.components == other.components)

    def __repr__(self):
        return f"CechCochain(deg={self.degree}, tuples={self.tuples()})"

    def __add__(self, other):
        if (self.family != other.family or self.context != other.context
                or self.degree != other.degree):
            raise FamilyMismatch("cochains not parallel")
        f = self.family.field
        out = CechCochain(self.family, self.context, self.degree)
        for J in set(self.components) | set(other.components):
            a, b = self.component(J), other.component(J)
            out.set_component(J, tuple(f.add(x, y) for x, y in zip(a, b)))
        return out

    def __sub__(self, other):
        return self + other.scale(self.family.field.of(-1))

    def scale(self, c):
        f = self.family.field
        out = CechCochain(self.family, self.context, self.degree)
        for J, vec in self.components.items():
            out.set_component(J, tuple(f.mul(c, x) for x in vec))
        return out

    def restrict_context(self, bigger):
        """Restrict every component along context -> bigger context."""
        bigger = frozenset(bigger)
        out = CechCochain(self.family, bigger, self.degree)
        for J, vec in self.components.items():
            if self.value_face(J) | bigger not in self.nerve.faces:
                continue
            src = self.value_face(J)
            dst = frozenset(J) | bigger
            rest = self.family.local(J[0]).restriction(src, dst)
            n = self.degree - (len(J) - 1)
            out.set_component(J, rest.apply(n, vec))
        return out


def act(u: BigradedMorphism, c: CechCochain) -> CechCochain:
    """(u.c) with the (-1)^{qr} sign; evaluation in place of composition."""
    if c.family != u.source:
        raise FamilyMismatch("act: cochain not over the morphism's source")
    f = u.source.field
    out = CechCochain(u.target, c.context, u.degree + c.degree)
    for Ju, per_u in u.components.items():
        pu = len(Ju) - 1
        qu = u.degree - pu
        for Jc in list(c.components):
            if Jc[0] != Ju[-1]:
                continue
            J = Ju + Jc[1:]
            big = frozenset(J) | c.context
            if big not in u.nerve.faces:
                continue
            mu = per_u.get(big)
            if mu is None:
                continue
            rv = len(Jc) - 1
            # restrict the cochain component to the big face, then evaluate
            small = frozenset(Jc) | c.context
            rest = u.source.local(Jc[0]).restriction(small, big)
            nq = c.degree - rv
            vec = rest.apply(nq, c.components[Jc])
            vec = mu.apply(nq, vec)
            if qu * rv % 2:
                vec = tuple(f.neg(x) for x in vec)
            prev = out.component(J)
            out.set_component(J, tuple(f.add(a, b) for a, b in zip(prev, vec)))
    return out


def cech_delta_cochain(c: CechCochain) -> CechCochain:
    """Cochain Cech differential (k = 1..p+1), restricted to the big face."""
    f = c.family.field
    out = CechCochain(c.family, c.context, c.degree + 1)
    nerve = c.nerve
    seen = set()
    for J in c.tuples():
        for pos in range(1, len(J) + 1):
            for lab in nerve.labels:
                big = J[:pos] + (lab,) + J[pos:]
                if big in seen:
                    continue
                if frozenset(big) | c.context not in nerve.faces:
                    continue
                seen.add(big)
                n = c.degree - (len(big) - 2)
                bigface = frozenset(big) | c.context
                space = c.family.space(big[0], bigface)
                acc = [f.zero] * space.dim(n)
                for k in range(1, len(big)):
                    small = delete_entry(big, k)
                    vec = c.component(small)
                    if not any(x != f.zero for x in vec):
                        continue
                    rest = c.family.local(small[0]).restriction(
                        frozenset(small) | c.context, bigface)
                    vec = rest.apply(n, vec)
                    sgn = _sign(f, k)
                    for i, x in enumerate(vec):
                        acc[i] = f.add(acc[i], f.mul(sgn, x))
                out.set_component(big, tuple(acc))
    return out
