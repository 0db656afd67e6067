"""Readers and writers for the two plain-text script formats.

A CPL script lists process steps as (object, effector, source) triples::

    cpl v1
    name cook_an_egg
    symbol K Kitchen
    symbol P Pot
    ...
    step P D K

An ontology script lists parts, each one nested tree indented by two
spaces per level::

    ontology v1
    part Link_10
    Home
      Kitchen
        items
          Pot
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = [
    "ConceptSymbol",
    "CplParseError",
    "CplScript",
    "LinkKey",
    "OntologyNode",
    "OntologyParseError",
    "OntologyPart",
    "ROLES",
    "Triple",
    "parse_cpl",
    "parse_ontology_parts",
    "serialize_cpl",
    "serialize_ontology_parts",
]

ROLES = ("objects", "effectors", "sources")

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*$")
_INDENT = "  "


class ScriptParseError(ValueError):
    """A script could not be parsed. ``line`` is the 1-based physical line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class CplParseError(ScriptParseError):
    pass


class OntologyParseError(ScriptParseError):
    pass


@dataclass(frozen=True)
class ConceptSymbol:
    symbol: str
    label: str

    def __str__(self) -> str:
        return self.symbol


@dataclass(frozen=True)
class Triple:
    object: ConceptSymbol
    effector: ConceptSymbol
    source: ConceptSymbol
    ordinal: int

    @property
    def concepts(self) -> tuple[ConceptSymbol, ConceptSymbol, ConceptSymbol]:
        """The three symbols in role order (object, effector, source)."""
        return (self.object, self.effector, self.source)

    @property
    def token(self) -> str:
        return "".join(c.symbol for c in self.concepts)


@dataclass(frozen=True)
class CplScript:
    name: str
    symbols: tuple[ConceptSymbol, ...]
    triples: tuple[Triple, ...]

    def symbol(self, token: str) -> ConceptSymbol:
        for s in self.symbols:
            if s.symbol == token:
                return s
        raise KeyError(token)

    def concepts(self) -> list[ConceptSymbol]:
        """Symbols used by at least one triple, in first-use order."""
        seen: dict[str, ConceptSymbol] = {}
        for t in self.triples:
            for c in t.concepts:
                seen.setdefault(c.symbol, c)
        return list(seen.values())


@dataclass(frozen=True, order=True)
class LinkKey:
    """Event key; ordering follows ingestion order."""

    timestamp_ordinal: int
    key: str

    def __str__(self) -> str:
        return self.key


@dataclass(frozen=True)
class OntologyNode:
    label: str
    children: tuple["OntologyNode", ...] = ()

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)

    def walk(self) -> Iterator["OntologyNode"]:
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass(frozen=True)
class OntologyPart:
    link_key: LinkKey
    root: OntologyNode


def _significant_lines(text: str, strip_inline: bool) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw
        if strip_inline:
            line = line.split("#", 1)[0]
        elif line.strip().startswith("#"):
            continue
        line = line.rstrip()
        if line.strip():
            yield lineno, line


def parse_cpl(text: str) -> CplScript:
    lines = _significant_lines(text, strip_inline=True)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise CplParseError(1, "empty script, expected 'cpl v1'") from None
    if header.split() != ["cpl", "v1"]:
        raise CplParseError(lineno, f"expected header 'cpl v1', got {header.strip()!r}")

    name = None
    by_symbol: dict[str, ConceptSymbol] = {}
    by_label: dict[str, int] = {}
    triples: list[Triple] = []
    seen_steps: dict[tuple[str, str, str], int] = {}

    for lineno, line in lines:
        words = line.split()
        keyword, args = words[0], words[1:]
        if name is None:
            if keyword != "name" or len(args) != 1:
                raise CplParseError(lineno, "expected 'name <identifier>'")
            if not _NAME_RE.match(args[0]):
                raise CplParseError(lineno, f"invalid script name {args[0]!r}")
            name = args[0]
        elif keyword == "symbol":
            if triples:
                raise CplParseError(lineno, "symbol declared after the first step")
            if len(args) < 2:
                raise CplParseError(lineno, "expected 'symbol <SYM> <Label>'")
            token, label = args[0], " ".join(args[1:])
            if token in by_symbol:
                raise CplParseError(lineno, f"duplicate symbol {token!r}")
            if label in by_label:
                raise CplParseError(
                    lineno, f"duplicate label {label!r} (first on line {by_label[label]})"
                )
            by_symbol[token] = ConceptSymbol(token, label)
            by_label[label] = lineno
        elif keyword == "step":
            if len(args) != 3:
                raise CplParseError(lineno, "expected 'step <OBJ> <EFF> <SRC>'")
            for token in args:
                if token not in by_symbol:
                    raise CplParseError(lineno, f"unknown symbol {token!r}")
            if len(set(args)) != 3:
                raise CplParseError(lineno, f"symbol repeated inside step {' '.join(args)}")
            key = (args[0], args[1], args[2])
            if key in seen_steps:
                raise CplParseError(
                    lineno, f"duplicate step {' '.join(args)} (first on line {seen_steps[key]})"
                )
            seen_steps[key] = lineno
            o, e, s = (by_symbol[a] for a in args)
            triples.append(Triple(o, e, s, len(triples) + 1))
        elif keyword == "name":
            raise CplParseError(lineno, "script name declared twice")
        else:
            raise CplParseError(lineno, f"unknown directive {keyword!r}")

    if name is None:
        raise CplParseError(lineno, "missing 'name <identifier>'")
    return CplScript(name, tuple(by_symbol.values()), tuple(triples))


def serialize_cpl(script: CplScript) -> str:
    out = ["cpl v1", f"name {script.name}"]
    out.extend(f"symbol {s.symbol} {s.label}" for s in script.symbols)
    out.extend(f"step {t.object} {t.effector} {t.source}" for t in script.triples)
    return "\n".join(out) + "\n"


def _build_tree(rows: list[tuple[int, int, str]]) -> OntologyNode:
    # rows: (lineno, depth, label); depth validated by the caller
    def build(i: int) -> tuple[OntologyNode, int]:
        _, depth, label = rows[i]
        children = []
        j = i + 1
        while j < len(rows) and rows[j][1] > depth:
            child, j = build(j)
            children.append(child)
        return OntologyNode(label, tuple(children)), j

    root, _ = build(0)
    return root


def parse_ontology_parts(
    text: str, first_ordinal: int = 1, auto_offset: int = 0
) -> list[OntologyPart]:
    """Parse an ontology script into parts, in file order.

    Undeclared keys become ``Link_<auto_offset + position>`` where position
    is the 1-based index of the part in the file. Ordinals start at
    ``first_ordinal`` and increase by one per part.
    """
    lines = _significant_lines(text, strip_inline=False)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise OntologyParseError(1, "empty script, expected 'ontology v1'") from None
    if header.split() != ["ontology", "v1"]:
        raise OntologyParseError(lineno, f"expected header 'ontology v1', got {header.strip()!r}")

    sections: list[tuple[int, str | None, list[tuple[int, int, str]]]] = []
    for lineno, line in lines:
        if not line.startswith(" ") and line.split()[0] == "part":
            args = line.split()[1:]
            if len(args) > 1:
                raise OntologyParseError(lineno, "expected 'part [<link-key>]'")
            sections.append((lineno, args[0] if args else None, []))
            continue
        if not sections:
            raise OntologyParseError(lineno, "tree line before the first 'part'")
        if "\t" in line:
            raise OntologyParseError(lineno, "tab in indentation")
        label = line.lstrip(" ")
        spaces = len(line) - len(label)
        if spaces % len(_INDENT):
            raise OntologyParseError(lineno, f"indentation of {spaces} spaces is not a multiple of 2")
        depth = spaces // len(_INDENT)
        rows = sections[-1][2]
        if not rows and depth != 0:
            raise OntologyParseError(lineno, "part must start at column 0")
        if rows and depth == 0:
            raise OntologyParseError(lineno, "second root in one part")
        if rows and depth > rows[-1][1] + 1:
            raise OntologyParseError(lineno, "indentation jumps more than one level")
        rows.append((lineno, depth, " ".join(label.split())))

    parts = []
    seen: dict[str, int] = {}
    for index, (lineno, declared, rows) in enumerate(sections):
        if not rows:
            raise OntologyParseError(lineno, "empty part")
        key = declared if declared is not None else f"Link_{auto_offset + index + 1}"
        if key in seen:
            raise OntologyParseError(lineno, f"duplicate link key {key!r} (first on line {seen[key]})")
        seen[key] = lineno
        parts.append(OntologyPart(LinkKey(first_ordinal + index, key), _build_tree(rows)))
    return parts


def _tree_lines(node: OntologyNode, depth: int = 0) -> Iterable[str]:
    yield _INDENT * depth + node.label
    for c in node.children:
        yield from _tree_lines(c, depth + 1)


def serialize_ontology_parts(parts: Iterable[OntologyPart]) -> str:
    out = ["ontology v1"]
    for p in parts:
        out.append(f"part {p.link_key.key}")
        out.extend(_tree_lines(p.root))
    return "\n".join(out) + "\n"
