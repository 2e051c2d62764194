"""Finite cover nerves: index labels plus a subset-closed family of faces.

A face sigma stands for the open U_sigma (Alexandrov-style); sigma <= tau
means U_tau <= U_sigma.  Multi-indices are ordered tuples of labels, repeats
allowed; a tuple's components vanish unless its underlying set is a face.
"""
from __future__ import annotations

from itertools import combinations


class EmptyIndexSet(ValueError):
    pass


class NotAFace(KeyError):
    pass


def face_key(face):
    """Canonical sort key for faces: (size, sorted labels)."""
    return (len(face), tuple(sorted(face)))


class CoverNerve:
    def __init__(self, labels, faces):
        labels = tuple(labels)
        if not labels:
            raise EmptyIndexSet("cover must have at least one open")
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate open labels")
        self.labels = tuple(sorted(labels))
        self.faces = frozenset(frozenset(f) for f in faces)
        for f in self.faces:
            if not f or not f <= set(self.labels):
                raise ValueError(f"bad face {set(f)}")
        for lab in self.labels:
            if frozenset([lab]) not in self.faces:
                raise ValueError(f"missing singleton face {{{lab}}}")
        for f in self.faces:
            for k in range(1, len(f)):
                for sub in combinations(sorted(f), k):
                    if frozenset(sub) not in self.faces:
                        raise ValueError(f"not subset-closed at {set(sub)}")

    def is_face(self, subset) -> bool:
        return frozenset(subset) in self.faces

    def sorted_faces(self):
        return sorted(self.faces, key=face_key)

    def star(self, label):
        """All faces containing the given open, sorted; minimum is {label}."""
        return sorted((f for f in self.faces if label in f), key=face_key)

    def faces_above(self, face):
        face = frozenset(face)
        return sorted((f for f in self.faces if f >= face), key=face_key)

    def alphabet(self, face):
        """Labels i with {i} u face still a face."""
        face = frozenset(face)
        return [lab for lab in self.labels
                if frozenset(face | {lab}) in self.faces]

    def tuple_alive(self, entries, context=frozenset()):
        """True when set(entries) u context is a face."""
        return frozenset(entries) | frozenset(context) in self.faces

    def __eq__(self, other):
        return (isinstance(other, CoverNerve) and self.labels == other.labels
                and self.faces == other.faces)

    def __hash__(self):
        return hash((self.labels, self.faces))

    def __repr__(self):
        shown = [tuple(sorted(f)) for f in self.sorted_faces()]
        return f"CoverNerve(labels={self.labels}, faces={shown})"


def build_nerve(labels, declared_faces) -> CoverNerve:
    """Subset-closure of the declared faces, with singletons always added."""
    labels = tuple(labels)
    if not labels:
        raise EmptyIndexSet("cover must have at least one open")
    label_set = set(labels)
    closed = {frozenset([lab]) for lab in labels}
    for f in declared_faces:
        f = frozenset(f)
        if not f <= label_set:
            raise ValueError(f"face {set(f)} uses undeclared opens")
        for k in range(1, len(f) + 1):
            for sub in combinations(sorted(f), k):
                closed.add(frozenset(sub))
    return CoverNerve(labels, closed)


def tuples_alive(nerve: CoverNerve, context, length: int):
    """All multi-indices of the given length (repeats allowed) alive over
    the context face, in lexicographic label order."""
    context = frozenset(context)
    out = []

    def extend(prefix, used):
        if len(prefix) == length:
            out.append(tuple(prefix))
            return
        for lab in nerve.alphabet(used | context):
            if frozenset(used | context | {lab}) in nerve.faces:
                prefix.append(lab)
                extend(prefix, used | {lab})
                prefix.pop()

    extend([], frozenset())
    return out


def delete_entry(entries, k):
    return entries[:k] + entries[k + 1:]
