"""JSON instance files.

Every name is written with :func:`sigmacat.names.render` and read back with
:func:`sigmacat.names.parse`.  Objects, morphisms and map entries are emitted
in canonical name order, so dumping a loaded canonical file reproduces it
byte for byte.

Maps keyed by pairs (the values and actions of a presheaf on ``C x D``) are
written as arrays of ``[[c, d], value]`` entries, since JSON keys must be
strings.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .core import CategoryError, FinCategory, Functor
from .elements import BiPresheaf, SetPresheaf
from .grothendieck import CatPresheaf
from .names import NameSyntaxError, name_key, parse, render

KINDS = ("category", "set_presheaf", "bi_presheaf", "cat_presheaf", "q_presheaf")


class InstanceFormatError(ValueError):
    """The file is not a well-formed instance document."""


@dataclass
class Instance:
    kind: str
    value: Any


# -- writing ------------------------------------------------------------------

def category_doc(C: FinCategory) -> dict:
    ids = set(C.identity.values())
    comp = [
        [render(g), render(f), render(gf)]
        for (g, f), gf in sorted(C.table.items(), key=lambda kv: (name_key(kv[0][0]), name_key(kv[0][1])))
        if g not in ids and f not in ids
    ]
    return {
        "kind": "category",
        "objects": [render(a) for a in C.objects],
        "morphisms": [
            {"id": render(m), "dom": render(C.dom[m]), "cod": render(C.cod[m])}
            for m in C.morphisms
        ],
        "identities": {render(a): render(C.identity[a]) for a in C.objects if a in C.identity},
        "composition": comp,
    }


def functor_doc(F: Functor) -> dict:
    return {
        "obj_map": {render(a): render(F.obj_map[a]) for a in F.source.objects if a in F.obj_map},
        "mor_map": {render(m): render(F.mor_map[m]) for m in F.source.morphisms if m in F.mor_map},
    }


def set_presheaf_doc(P: SetPresheaf) -> dict:
    C = P.base
    return {
        "kind": "set_presheaf",
        "base": category_doc(C),
        "values": {render(a): [render(u) for u in P.values[a]] for a in C.objects if a in P.values},
        "actions": {
            render(m): {render(v): render(P.actions[m][v]) for v in _action_keys(P, m)}
            for m in C.morphisms
            if m in P.actions
        },
    }


def _action_keys(P: SetPresheaf, m) -> list:
    known = [v for v in P.values.get(P.base.cod[m], ()) if v in P.actions[m]]
    extra = [v for v in P.actions[m] if v not in set(known)]
    return known + sorted(extra, key=render)


def bi_presheaf_doc(R: BiPresheaf) -> dict:
    P = R.base
    return {
        "kind": "bi_presheaf",
        "base_c": category_doc(R.left),
        "base_d": category_doc(R.right),
        "values": [
            [[render(o[0]), render(o[1])], [render(u) for u in R.values[o]]]
            for o in P.objects
            if o in R.values
        ],
        "actions": [
            [
                [render(m[0]), render(m[1])],
                {render(v): render(R.actions[m][v]) for v in _action_keys(R, m)},
            ]
            for m in P.morphisms
            if m in R.actions
        ],
    }


def cat_presheaf_doc(P: CatPresheaf, kind: str = "cat_presheaf") -> dict:
    C = P.base
    return {
        "kind": kind,
        "base": category_doc(C),
        "values": {render(a): category_doc(P.fibers[a]) for a in C.objects if a in P.fibers},
        "actions": {render(m): functor_doc(P.transitions[m]) for m in C.morphisms if m in P.transitions},
    }


def to_doc(obj, kind: str | None = None) -> dict:
    if isinstance(obj, Instance):
        return to_doc(obj.value, obj.kind)
    if isinstance(obj, FinCategory):
        return category_doc(obj)
    if isinstance(obj, BiPresheaf):
        return bi_presheaf_doc(obj)
    if isinstance(obj, SetPresheaf):
        return set_presheaf_doc(obj)
    if isinstance(obj, CatPresheaf):
        return cat_presheaf_doc(obj, kind or "cat_presheaf")
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, kind: str | None = None) -> str:
    return json.dumps(to_doc(obj, kind), indent=2, ensure_ascii=False) + "\n"


# -- reading ------------------------------------------------------------------

def _fail(msg: str):
    raise InstanceFormatError(msg)


def _expect(value, typ, where: str):
    if not isinstance(value, typ):
        _fail(f"{where}: expected {typ.__name__ if isinstance(typ, type) else 'value'}")
    return value


def _name(text, where: str):
    if not isinstance(text, str):
        _fail(f"{where}: names must be strings")
    try:
        return parse(text)
    except NameSyntaxError as exc:
        _fail(f"{where}: {exc}")


def _field(doc: dict, key: str, typ, where: str):
    if key not in doc:
        _fail(f"{where}: missing field {key!r}")
    return _expect(doc[key], typ, f"{where}.{key}")


def _check_kind(doc, kind: str, where: str, optional: bool = False) -> None:
    if "kind" not in doc and optional:
        return
    if doc.get("kind") != kind:
        _fail(f"{where}: expected kind {kind!r}, found {doc.get('kind')!r}")


def load_category(doc, where: str = "category") -> FinCategory:
    _expect(doc, dict, where)
    _check_kind(doc, "category", where, optional=where != "category")
    objects = [_name(o, f"{where}.objects") for o in _field(doc, "objects", list, where)]
    morphisms = []
    for m in _field(doc, "morphisms", list, where):
        _expect(m, dict, f"{where}.morphisms")
        morphisms.append(tuple(
            _name(_field(m, k, str, f"{where}.morphisms"), f"{where}.morphisms") for k in ("id", "dom", "cod")
        ))
    identity = {
        _name(a, f"{where}.identities"): _name(i, f"{where}.identities")
        for a, i in _field(doc, "identities", dict, where).items()
    }
    table = {}
    for entry in _field(doc, "composition", list, where):
        if not isinstance(entry, list) or len(entry) != 3:
            _fail(f"{where}.composition: entries must be [g, f, gf]")
        g, f, gf = (_name(x, f"{where}.composition") for x in entry)
        if (g, f) in table:
            _fail(f"{where}.composition: duplicate entry for ({entry[0]}, {entry[1]})")
        table[(g, f)] = gf
    try:
        return FinCategory.build(objects, morphisms, identity, table)
    except CategoryError as exc:
        _fail(f"{where}: {exc}")


def _element_map(doc, where: str) -> dict:
    _expect(doc, dict, where)
    return {_name(k, where): _name(v, where) for k, v in doc.items()}


def _keyed(C: FinCategory, doc: dict, known, where: str) -> dict:
    out = {}
    for k, v in doc.items():
        key = _name(k, where)
        if key not in known:
            _fail(f"{where}: {k} is not in the base category")
        out[key] = v
    return out


def load_set_presheaf(doc) -> SetPresheaf:
    _check_kind(doc, "set_presheaf", "set_presheaf")
    C = load_category(_field(doc, "base", dict, "set_presheaf"), "set_presheaf.base")
    values = {
        a: [_name(u, "set_presheaf.values") for u in _expect(us, list, "set_presheaf.values")]
        for a, us in _keyed(C, _field(doc, "values", dict, "set_presheaf"), set(C.objects), "set_presheaf.values").items()
    }
    _no_duplicates(values, "set_presheaf.values")
    actions = {
        m: _element_map(t, "set_presheaf.actions")
        for m, t in _keyed(C, _field(doc, "actions", dict, "set_presheaf"), C.dom, "set_presheaf.actions").items()
    }
    return SetPresheaf(C, values, actions)


def _no_duplicates(values: dict, where: str) -> None:
    for a, us in values.items():
        if len(set(us)) != len(us):
            _fail(f"{where}: repeated element in the value set at {render(a)}")


def _pair_entries(entries, where: str) -> list:
    out = []
    for e in _expect(entries, list, where):
        if not isinstance(e, list) or len(e) != 2 or not isinstance(e[0], list) or len(e[0]) != 2:
            _fail(f"{where}: entries must be [[c, d], value]")
        out.append(((_name(e[0][0], where), _name(e[0][1], where)), e[1]))
    return out


def load_bi_presheaf(doc) -> BiPresheaf:
    _check_kind(doc, "bi_presheaf", "bi_presheaf")
    C = load_category(_field(doc, "base_c", dict, "bi_presheaf"), "bi_presheaf.base_c")
    D = load_category(_field(doc, "base_d", dict, "bi_presheaf"), "bi_presheaf.base_d")
    R = BiPresheaf.over(C, D, {}, {})
    base = R.base
    values = {}
    for key, us in _pair_entries(_field(doc, "values", list, "bi_presheaf"), "bi_presheaf.values"):
        if key not in set(base.objects):
            _fail(f"bi_presheaf.values: {render(key)} is not an object of the product")
        if key in values:
            _fail(f"bi_presheaf.values: duplicate entry for {render(key)}")
        values[key] = [_name(u, "bi_presheaf.values") for u in _expect(us, list, "bi_presheaf.values")]
    _no_duplicates(values, "bi_presheaf.values")
    actions = {}
    for key, t in _pair_entries(_field(doc, "actions", list, "bi_presheaf"), "bi_presheaf.actions"):
        if key not in base.dom:
            _fail(f"bi_presheaf.actions: {render(key)} is not a morphism of the product")
        if key in actions:
            _fail(f"bi_presheaf.actions: duplicate entry for {render(key)}")
        actions[key] = _element_map(t, "bi_presheaf.actions")
    return BiPresheaf(base, values, actions, C, D)


def load_functor(doc, source: FinCategory, target: FinCategory, where: str) -> Functor:
    _expect(doc, dict, where)
    return Functor(
        source,
        target,
        _element_map(_field(doc, "obj_map", dict, where), f"{where}.obj_map"),
        _element_map(_field(doc, "mor_map", dict, where), f"{where}.mor_map"),
    )


def load_cat_presheaf(doc, kind: str = "cat_presheaf") -> CatPresheaf:
    _check_kind(doc, kind, kind)
    C = load_category(_field(doc, "base", dict, kind), f"{kind}.base")
    fibers = {
        a: load_category(F, f"{kind}.values[{render(a)}]")
        for a, F in _keyed(C, _field(doc, "values", dict, kind), set(C.objects), f"{kind}.values").items()
    }
    transitions = {}
    for m, F in _keyed(C, _field(doc, "actions", dict, kind), C.dom, f"{kind}.actions").items():
        src, tgt = fibers.get(C.cod[m]), fibers.get(C.dom[m])
        if src is None or tgt is None:
            _fail(f"{kind}.actions: {render(m)} has an endpoint without a value category")
        transitions[m] = load_functor(F, src, tgt, f"{kind}.actions[{render(m)}]")
    return CatPresheaf(C, fibers, transitions)


def from_doc(doc) -> Instance:
    _expect(doc, dict, "document")
    kind = doc.get("kind")
    if kind == "category":
        return Instance(kind, load_category(doc))
    if kind == "set_presheaf":
        return Instance(kind, load_set_presheaf(doc))
    if kind == "bi_presheaf":
        return Instance(kind, load_bi_presheaf(doc))
    if kind in ("cat_presheaf", "q_presheaf"):
        return Instance(kind, load_cat_presheaf(doc, kind))
    _fail(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")


def loads(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"malformed JSON: {exc}") from exc
    return from_doc(doc)


def load(path) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise InstanceFormatError(f"{path} is not UTF-8 text") from exc
    return loads(text)
