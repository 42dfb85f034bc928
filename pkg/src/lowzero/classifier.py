"""Pole order of L(s, Sym^2(f x g)) at s = 1 from structural data of f and g.

A form is described by whether it is dihedral, the quadratic extension it is
induced from, whether it has property P, and a twist-class tag.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence


@dataclass(frozen=True)
class FormDescriptor:
    id: str
    dihedral: bool
    twist_class: str
    inducing_field: str | None = None
    property_P: bool | None = None

    def __post_init__(self):
        if self.dihedral:
            if self.inducing_field is None or self.property_P is None:
                raise ValueError(f"{self.id}: dihedral forms need inducing_field and property_P")
        elif self.inducing_field is not None or self.property_P is not None:
            raise ValueError(f"{self.id}: inducing_field and property_P only apply to dihedral forms")

    @classmethod
    def from_dict(cls, d: dict) -> "FormDescriptor":
        return cls(
            id=str(d["id"]),
            dihedral=bool(d["dihedral"]),
            twist_class=str(d["twist_class"]),
            inducing_field=d.get("inducing_field"),
            property_P=d.get("property_P"),
        )


def twist_equivalent(f: FormDescriptor, g: FormDescriptor) -> bool:
    return f.twist_class == g.twist_class


def _check_pair(f: FormDescriptor, g: FormDescriptor) -> None:
    if twist_equivalent(f, g):
        same = (f.dihedral, f.inducing_field, f.property_P) == (g.dihedral, g.inducing_field, g.property_P)
        if not same:
            raise ValueError(f"{f.id} and {g.id} share a twist class but differ structurally")


def classify_pair(f: FormDescriptor, g: FormDescriptor) -> tuple[int, str]:
    """(delta, case label)."""
    _check_pair(f, g)
    if twist_equivalent(f, g):
        if not f.dihedral:
            return 2, "twist-equivalent, non-dihedral"
        if f.property_P:
            return 4, "twist-equivalent, dihedral with property P"
        return 3, "twist-equivalent, dihedral without property P"
    if f.dihedral and g.dihedral:
        if f.inducing_field == g.inducing_field:
            return 2, "both dihedral from the same field, not twist-equivalent"
        return 1, "both dihedral from different fields"
    if f.dihedral or g.dihedral:
        return 1, "exactly one dihedral"
    return 1, "both non-dihedral, not twist-equivalent"


def delta_pair(f: FormDescriptor, g: FormDescriptor) -> int:
    return classify_pair(f, g)[0]


def delta_self(f: FormDescriptor) -> int:
    return delta_pair(f, f)


def family_average_delta(
    family: Sequence[FormDescriptor], g: FormDescriptor, class_number_odd: bool
) -> tuple[float, bool]:
    """Mean of delta(f, g) over the family, and whether the averaging hypothesis holds.

    An odd class number rules out dihedral forms, so a dihedral member is
    rejected as inconsistent input in that case.
    """
    if not family:
        raise ValueError("family must be nonempty")
    if class_number_odd:
        bad = [f.id for f in family if f.dihedral]
        if bad:
            raise ValueError(f"dihedral members {bad} contradict an odd class number")
    mean = sum(delta_pair(f, g) for f in family) / len(family)
    return mean, bool(class_number_odd or not g.dihedral)


def structural_cases() -> list[tuple[FormDescriptor, FormDescriptor]]:
    """One representative pair for every consistent structural combination.

    Inducing fields are drawn from two tags; twist classes are either shared
    (with matching structure) or distinct.
    """
    kinds = [(False, None, None)] + [(True, K, P) for K in ("K1", "K2") for P in (True, False)]
    out = []
    for (fd, fK, fP), (gd, gK, gP) in product(kinds, repeat=2):
        f = FormDescriptor("f", fd, "A", fK, fP)
        g = FormDescriptor("g", gd, "B", gK, gP)
        out.append((f, g))
        if (fd, fK, fP) == (gd, gK, gP):
            out.append((f, FormDescriptor("g", gd, "A", gK, gP)))
    return out


def truth_table() -> list[dict]:
    rows = []
    for f, g in structural_cases():
        delta, label = classify_pair(f, g)
        rows.append(
            {
                "f": _shape(f),
                "g": _shape(g),
                "twist_equivalent": twist_equivalent(f, g),
                "delta": delta,
                "case": label,
            }
        )
    return rows


def _shape(f: FormDescriptor) -> str:
    if not f.dihedral:
        return "non-dihedral"
    return f"dihedral/{f.inducing_field}/{'P' if f.property_P else 'notP'}"


def load_pair(path: str) -> tuple[FormDescriptor, FormDescriptor]:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = [data["f"], data["g"]]
    if len(data) != 2:
        raise ValueError("expected exactly two descriptors")
    return FormDescriptor.from_dict(data[0]), FormDescriptor.from_dict(data[1])
