"""Presheaves of graded spaces on a nerve's face poset, and local objects.

Restriction maps run small face -> big face (sections over the bigger open
restrict to the smaller one).  Functoriality is exact and checkable.
"""
from __future__ import annotations

from .graded import GradedMap, GradedSpace
from .nerve import CoverNerve, NotAFace, face_key


class ValidationFailure(ValueError):
    pass


class Presheaf:
    """values: face -> GradedSpace; restrictions stored for every pair."""

    def __init__(self, nerve: CoverNerve, domain, values: dict, restrictions: dict):
        self.nerve = nerve
        self.domain = frozenset(frozenset(f) for f in domain)
        self.values = {frozenset(k): v for k, v in values.items()}
        self.restrictions = {}
        for (a, b), m in restrictions.items():
            a, b = frozenset(a), frozenset(b)
            if a == b:
                continue
            self.restrictions[(a, b)] = m
        for f in self.domain:
            if f not in self.values:
                raise ValidationFailure(f"missing value at face {set(f)}")

    @property
    def field(self):
        return next(iter(self.values.values())).field

    def value(self, face) -> GradedSpace:
        face = frozenset(face)
        if face not in self.values:
            raise NotAFace(f"{set(face)} not in presheaf domain")
        return self.values[face]

    def restriction(self, small, big) -> GradedMap:
        small, big = frozenset(small), frozenset(big)
        if small == big:
            return GradedMap.identity(self.value(small))
        if (small, big) not in self.restrictions:
            raise NotAFace(f"no restriction {set(small)} -> {set(big)}")
        return self.restrictions[(small, big)]

    def sorted_domain(self):
        return sorted(self.domain, key=face_key)

    def restrict_domain(self, faces):
        faces = frozenset(frozenset(f) for f in faces)
        vals = {f: self.values[f] for f in faces}
        rests = {p: m for p, m in self.restrictions.items()
                 if p[0] in faces and p[1] in faces}
        return Presheaf(self.nerve, faces, vals, rests)

    def __eq__(self, other):
        return (isinstance(other, Presheaf) and self.domain == other.domain
                and self.values == other.values
                and self.restrictions == other.restrictions)

    def __repr__(self):
        return f"Presheaf(on {len(self.domain)} faces)"

    @classmethod
    def constant(cls, nerve, domain, space: GradedSpace):
        domain = [frozenset(f) for f in domain]
        vals = {f: space for f in domain}
        rests = {}
        ident = GradedMap.identity(space)
        for a in domain:
            for b in domain:
                if a < b:
                    rests[(a, b)] = ident
        return cls(nerve, domain, vals, rests)

    @classmethod
    def from_cover_maps(cls, nerve, domain, values, cover_maps):
        """Build all restrictions by composing covering-pair maps.

        cover_maps: {(small, big): GradedMap} for big = small plus one label.
        Composites are taken along the chain inserting missing labels in
        sorted order; functoriality of the result is the caller's claim and
        validate_presheaf will check it.
        """
        domain = [frozenset(f) for f in domain]
        cm = {(frozenset(a), frozenset(b)): m for (a, b), m in cover_maps.items()}
        rests = {}
        for a in domain:
            for b in domain:
                if not (a < b):
                    continue
                cur = a
                m = GradedMap.identity(values[frozenset(a)])
                for lab in sorted(b - a):
                    nxt = frozenset(cur | {lab})
                    if (cur, nxt) not in cm:
                        raise ValidationFailure(
                            f"missing covering map {set(cur)} -> {set(nxt)}")
                    m = cm[(cur, nxt)].compose(m)
                    cur = nxt
                rests[(a, b)] = m
        return cls(nerve, domain, values, rests)


def validate_presheaf(p: Presheaf):
    """Exact functoriality check; returns a list of violation records."""
    report = []
    faces = p.sorted_domain()
    for a in faces:
        for b in faces:
            if not (a <= b):
                continue
            try:
                m = p.restriction(a, b)
            except NotAFace:
                report.append(("missing", tuple(sorted(a)), tuple(sorted(b))))
                continue
            if m.source != p.value(a) or m.target != p.value(b) or m.shift != 0:
                report.append(("shape", tuple(sorted(a)), tuple(sorted(b))))
    for a in faces:
        for b in faces:
            if not (a < b):
                continue
            for c in faces:
                if not (b < c):
                    continue
                direct = p.restriction(a, c)
                composed = p.restriction(b, c).compose(p.restriction(a, b))
                if direct != composed:
                    report.append(("functoriality", tuple(sorted(a)),
                                   tuple(sorted(b)), tuple(sorted(c))))
    return report


def section_space(p: Presheaf, sigma, n: int):
    """Value of the presheaf at a face in one degree; zero off the domain.

    Non-faces give the zero space by convention; genuinely unknown faces of
    the nerve raise.
    """
    sigma = frozenset(sigma)
    if sigma in p.values:
        space = p.values[sigma]
        return GradedSpace(space.field, {n: space.dim(n)})
    if sigma in p.nerve.faces:
        raise NotAFace(f"face {set(sigma)} outside presheaf domain")
    return GradedSpace(p.field, {})


class LocalObject:
    """A graded presheaf on the star of one open: the sheaf E_i on U_i."""

    def __init__(self, base_index, data: Presheaf):
        self.base_index = base_index
        star = frozenset(frozenset(f) for f in data.nerve.star(base_index))
        if data.domain != star:
            raise ValidationFailure(
                f"local object at {base_index} must live on its star")
        self.data = data

    @property
    def field(self):
        return self.data.field

    def space(self, face) -> GradedSpace:
        return self.data.value(face)

    def restriction(self, small, big) -> GradedMap:
        return self.data.restriction(small, big)

    def __eq__(self, other):
        return (isinstance(other, LocalObject)
                and self.base_index == other.base_index
                and self.data == other.data)

    def __repr__(self):
        return f"LocalObject({self.base_index})"

    @classmethod
    def constant(cls, nerve, base_index, space: GradedSpace):
        star = nerve.star(base_index)
        return cls(base_index, Presheaf.constant(nerve, star, space))


class LocalFamily:
    """One LocalObject per open of the nerve (the E_i of a twisted complex)."""

    def __init__(self, nerve: CoverNerve, locals_: dict):
        self.nerve = nerve
        self.locals = dict(locals_)
        if set(self.locals) != set(nerve.labels):
            raise ValidationFailure("family must cover every open")

    @property
    def field(self):
        return next(iter(self.locals.values())).field

    def local(self, label) -> LocalObject:
        return self.locals[label]

    def space(self, label, face) -> GradedSpace:
        return self.locals[label].space(face)

    def degree_support(self):
        lo, hi = None, None
        for lo_obj in self.locals.values():
            for sp in lo_obj.data.values.values():
                for n in sp.dims:
                    lo = n if lo is None else min(lo, n)
                    hi = n if hi is None else max(hi, n)
        if lo is None:
            return (0, -1)  # empty support
        return (lo, hi)

    def __eq__(self, other):
        return (isinstance(other, LocalFamily) and self.nerve == other.nerve
                and self.locals == other.locals)

    def __repr__(self):
        return f"LocalFamily({list(self.locals)})"
