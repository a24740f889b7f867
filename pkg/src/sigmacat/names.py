"""Canonical names for objects, morphisms and set elements.

A name is one of

* an atom: a plain ``str``;
* a tuple of names (a ``Pair`` is a 2-tuple);
* a :class:`Tagged` name, ``Tagged(tag, body)``.

Equality of names is Python equality, so two constructed categories are equal
exactly when their names agree structurally.  :func:`name_key` gives a total
order used everywhere for deterministic output, and :func:`render` /
:func:`parse` convert names to and from a compact text form, e.g.
``el[(f,((a,u),(b,v)))]``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Iterable, Union


@dataclass(frozen=True, slots=True)
class Tagged:
    tag: str
    body: Any

    def __repr__(self) -> str:
        return f"Tagged({self.tag!r}, {self.body!r})"


Name = Union[str, tuple, Tagged]

_BARE = re.compile(r"[A-Za-z0-9_.*'+\-#@$%&!?/|~<>=:;^]+")
_TAG = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")


def pair(a: Name, b: Name) -> tuple:
    return (a, b)


def name_key(n: Name) -> tuple:
    """Sort key giving a total order on names."""
    if isinstance(n, Tagged):
        return (2, n.tag, name_key(n.body))
    if isinstance(n, tuple):
        return (1, tuple(name_key(x) for x in n))
    if isinstance(n, str):
        return (0, n)
    raise TypeError(f"not a canonical name: {n!r}")


def sort_names(names: Iterable[Name]) -> tuple:
    return tuple(sorted(names, key=name_key))


def render(n: Name) -> str:
    if isinstance(n, Tagged):
        if not _TAG.fullmatch(n.tag):
            raise ValueError(f"bad tag {n.tag!r}")
        return f"{n.tag}[{render(n.body)}]"
    if isinstance(n, tuple):
        if len(n) == 1:
            return f"({render(n[0])},)"
        return "(" + ",".join(render(x) for x in n) + ")"
    if isinstance(n, str):
        return n if _BARE.fullmatch(n) else json.dumps(n)
    raise TypeError(f"not a canonical name: {n!r}")


class NameSyntaxError(ValueError):
    pass


def parse(text: str) -> Name:
    """Inverse of :func:`render`."""
    value, pos = _parse_at(text, 0)
    if pos != len(text):
        raise NameSyntaxError(f"trailing input at {pos} in {text!r}")
    return value


def _parse_at(s: str, i: int) -> tuple[Name, int]:
    if i >= len(s):
        raise NameSyntaxError(f"unexpected end of {s!r}")
    c = s[i]
    if c == "(":
        items = []
        i += 1
        if i < len(s) and s[i] == ")":
            return (), i + 1
        trailing_comma = False
        while True:
            item, i = _parse_at(s, i)
            items.append(item)
            if i >= len(s):
                raise NameSyntaxError(f"unclosed tuple in {s!r}")
            if s[i] == ",":
                i += 1
                if i < len(s) and s[i] == ")":
                    trailing_comma = True
                    i += 1
                    break
                continue
            if s[i] == ")":
                i += 1
                break
            raise NameSyntaxError(f"unexpected {s[i]!r} at {i} in {s!r}")
        if len(items) == 1 and not trailing_comma:
            raise NameSyntaxError(f"1-tuple needs a trailing comma in {s!r}")
        return tuple(items), i
    if c == '"':
        decoder = json.JSONDecoder()
        try:
            value, end = decoder.raw_decode(s, i)
        except json.JSONDecodeError as e:
            raise NameSyntaxError(str(e)) from None
        return value, end
    m = _BARE.match(s, i)
    if not m:
        raise NameSyntaxError(f"unexpected {c!r} at {i} in {s!r}")
    token, i = m.group(0), m.end()
    if i < len(s) and s[i] == "[":
        if not _TAG.fullmatch(token):
            raise NameSyntaxError(f"bad tag {token!r}")
        body, i = _parse_at(s, i + 1)
        if i >= len(s) or s[i] != "]":
            raise NameSyntaxError(f"unclosed tag in {s!r}")
        return Tagged(token, body), i + 1
    return token, i
