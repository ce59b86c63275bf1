"""
Instance file reader and writer.

    #! source: maxcov          optional provenance header, one `key: value` per line
    [tree]
    ((A:1,B:2):1,C:3)r;
    [web]
    A B
    [budget]
    3
    [generalized]              optional, empty

Sections appear once each and are written in this order. Blank lines and
`#` comments are ignored outside the provenance header.
"""
import logging
import re
from typing import Dict, List, Tuple

from app.core.exceptions import exception_constants
from app.core.exceptions.local_exceptions import InstanceFormatError
from app.infrastructure.formats.newick import parse_tree, serialize_tree
from app.infrastructure.formats.web_format import parse_web, serialize_web
from app.schemas.instance import Instance

logger = logging.getLogger(__name__)

SECTIONS = ("tree", "web", "budget", "generalized")
REQUIRED = ("tree", "web", "budget")

_HEADER = re.compile(r"^\[(?P<name>[^\]]*)\]\s*$")
_PROVENANCE = re.compile(r"^#!\s*(?P<key>[A-Za-z0-9_.-]+)\s*:\s*(?P<value>.*?)\s*$")


def parse_instance(text: str) -> Instance:
    provenance: List[Tuple[str, str]] = []
    sections: Dict[str, Tuple[int, List[str]]] = {}
    current = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()

        if stripped.startswith("#!") and current is None:
            match = _PROVENANCE.match(stripped)
            if not match:
                raise InstanceFormatError(exception_constants.PROVENANCE_MALFORMED, line=line_no, column=1)
            provenance.append((match["key"], match["value"]))
            continue

        header = _HEADER.match(stripped)
        if header:
            name = header["name"].strip().lower()
            if name not in SECTIONS:
                raise InstanceFormatError(
                    exception_constants.UNKNOWN_SECTION.format(section=header["name"]), line=line_no, column=1
                )
            if name in sections:
                raise InstanceFormatError(
                    exception_constants.DUPLICATE_SECTION.format(section=name), line=line_no, column=1
                )
            sections[name] = (line_no + 1, [])
            current = name
            continue

        if current is None:
            if stripped and not stripped.startswith("#"):
                raise InstanceFormatError(exception_constants.CONTENT_OUTSIDE_SECTION, line=line_no, column=1)
            continue
        sections[current][1].append(raw)

    for name in REQUIRED:
        if name not in sections:
            raise InstanceFormatError(exception_constants.MISSING_SECTION.format(section=name))

    generalized = "generalized" in sections
    if generalized:
        first, body = sections["generalized"]
        for offset, raw in enumerate(body):
            if _content(raw):
                raise InstanceFormatError(
                    exception_constants.GENERALIZED_NOT_EMPTY, line=first + offset, column=1
                )

    first, body = sections["tree"]
    tree = parse_tree("\n".join(_strip_comment(raw) for raw in body), first_line=first)
    first, body = sections["web"]
    web = parse_web("\n".join(body), tree.leaves, generalized=generalized, first_line=first)
    budget = _parse_budget(*sections["budget"])

    instance = Instance.build(
        tree=tree, web=web, budget=budget, generalized=generalized, provenance=tuple(provenance)
    )
    logger.info(
        f"Loaded instance: n={instance.n} arcs={len(web.arcs)} k={budget} generalized={generalized}"
    )
    return instance


def serialize_instance(instance: Instance) -> str:
    lines = [f"#! {key}: {value}" for key, value in instance.provenance]
    lines += ["[tree]", serialize_tree(instance.tree), "[web]"]
    web = serialize_web(instance.web)
    if web:
        lines.append(web)
    lines += ["[budget]", str(instance.budget)]
    if instance.generalized:
        lines.append("[generalized]")
    return "\n".join(lines) + "\n"


def _strip_comment(raw: str) -> str:
    return raw.split("#", 1)[0]


def _content(raw: str) -> str:
    return _strip_comment(raw).strip()


def _parse_budget(first: int, body: List[str]) -> int:
    values = [(first + offset, _content(raw)) for offset, raw in enumerate(body) if _content(raw)]
    if len(values) != 1:
        line = values[1][0] if len(values) > 1 else first
        shown = " ".join(value for _, value in values)
        raise InstanceFormatError(
            exception_constants.BUDGET_NOT_INTEGER.format(value=shown), line=line, column=1
        )
    line, value = values[0]
    try:
        return int(value)
    except ValueError:
        raise InstanceFormatError(
            exception_constants.BUDGET_NOT_INTEGER.format(value=value), line=line, column=1
        ) from None
