"""
Food web text format.

One directive per line, whitespace separated, `#` starts a comment:

    FROM TO     FROM depends on (eats) TO
    AND NAME    NAME needs all of its prey (generalized instances only)

Species never mentioned are isolated sinks.
"""
import logging
from typing import Iterable, List, Set, Tuple

from app.core.exceptions import exception_constants
from app.core.exceptions.local_exceptions import InstanceFormatError
from app.schemas.instance import FoodWeb, build_validated

logger = logging.getLogger(__name__)

AND_DIRECTIVE = "AND"


def parse_web(
    text: str,
    species: Iterable[str],
    generalized: bool = False,
    first_line: int = 1,
) -> FoodWeb:
    names = tuple(getattr(s, "name", s) for s in species)
    known: Set[str] = set(names)
    arcs: List[Tuple[str, str]] = []
    and_nodes: List[str] = []

    for offset, raw in enumerate(text.splitlines()):
        line_no = first_line + offset
        body = raw.split("#", 1)[0]
        fields = body.split()
        if not fields:
            continue
        if len(fields) != 2:
            raise InstanceFormatError(
                exception_constants.WEB_ARC_MALFORMED, line=line_no, column=_column(raw, fields[0])
            )

        head, tail = fields
        if head == AND_DIRECTIVE:
            if not generalized:
                raise InstanceFormatError(
                    exception_constants.WEB_AND_ON_STANDARD, line=line_no, column=_column(raw, head)
                )
            _require_known(tail, known, raw, line_no)
            and_nodes.append(tail)
            continue

        _require_known(head, known, raw, line_no)
        _require_known(tail, known, raw, line_no)
        arcs.append((head, tail))

    web = build_validated(FoodWeb, species=names, arcs=tuple(arcs), and_nodes=tuple(and_nodes))
    logger.debug(f"Parsed food web with {web.size} species, {len(web.arcs)} arcs")
    return web


def serialize_web(web: FoodWeb) -> str:
    """Arcs in sorted order, then AND directives. Empty string for an arcless OR web."""
    lines = [f"{predator} {prey}" for predator, prey in web.arcs]
    lines.extend(f"{AND_DIRECTIVE} {name}" for name in web.and_nodes)
    return "\n".join(lines)


def _require_known(name: str, known: Set[str], raw: str, line_no: int) -> None:
    if name not in known:
        raise InstanceFormatError(
            exception_constants.WEB_UNKNOWN_SPECIES.format(name=name),
            line=line_no,
            column=_column(raw, name),
        )


def _column(raw: str, word: str) -> int:
    return raw.find(word) + 1
