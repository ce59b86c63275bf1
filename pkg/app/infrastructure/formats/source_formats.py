"""
Readers for the source problems the reductions consume.

coverage   first line: element weights w_1..w_n; then one set per line as
           1-based element numbers (a lone `-` is the empty set)
edges      one `u v` edge per line; vertices keep first-appearance order
dimacs     standard DIMACS CNF (`c` comments, `p cnf V C`, 0-terminated clauses)

`#` starts a comment in the first two formats.
"""
import logging
from typing import List, Tuple

from pydantic import ValidationError

from app.core.exceptions import exception_constants
from app.core.exceptions.local_exceptions import SourceFormatError
from app.schemas.instance import first_error
from app.schemas.reduction_inputs import CnfInput, CoverageInput, VertexCoverInput

logger = logging.getLogger(__name__)


def _fail(message: str, line: int = None) -> SourceFormatError:
    return SourceFormatError(
        user_message=message if line is None else f"line {line}: {message}",
        public_context={} if line is None else {"line": line},
    )


def _validated(model, **data):
    try:
        return model(**data)
    except ValidationError as e:
        raise SourceFormatError(
            user_message=exception_constants.SOURCE_INVALID.format(reason=first_error(e)),
            internal_context={"errors": e.errors(include_url=False)},
        ) from e


def _numbered(text: str) -> List[Tuple[int, List[str]]]:
    rows = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split("#", 1)[0].split()
        if fields:
            rows.append((line_no, fields))
    return rows


def _integers(fields: List[str], kind: str, line: int) -> List[int]:
    try:
        return [int(field) for field in fields]
    except ValueError:
        raise _fail(
            exception_constants.SOURCE_LINE_MALFORMED.format(kind=kind, line=" ".join(fields)), line
        ) from None


def parse_coverage(text: str, k: int) -> CoverageInput:
    rows = _numbered(text)
    if not rows:
        raise _fail(exception_constants.SOURCE_EMPTY.format(kind="coverage"))

    line, fields = rows[0]
    weights = _integers(fields, "weights", line)
    sets = [
        [] if fields == ["-"] else _integers(fields, "set", line)
        for line, fields in rows[1:]
    ]
    if not sets:
        raise _fail(exception_constants.SOURCE_EMPTY.format(kind="set"))

    coverage = _validated(CoverageInput, weights=tuple(weights), sets=tuple(map(tuple, sets)), k=k)
    logger.debug(f"Read coverage input: n={coverage.n} m={coverage.m} k={k}")
    return coverage


def serialize_coverage(coverage: CoverageInput) -> str:
    lines = [" ".join(map(str, coverage.weights))]
    lines += [" ".join(map(str, members)) or "-" for members in coverage.sets]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str, k: int) -> VertexCoverInput:
    vertices: List[str] = []
    edges: List[Tuple[str, str]] = []
    for line, fields in _numbered(text):
        if len(fields) != 2:
            raise _fail(exception_constants.SOURCE_LINE_MALFORMED.format(kind="edge", line=" ".join(fields)), line)
        for name in fields:
            if name not in vertices:
                vertices.append(name)
        edges.append((fields[0], fields[1]))
    if not edges:
        raise _fail(exception_constants.SOURCE_EMPTY.format(kind="edge"))

    graph = _validated(VertexCoverInput, vertices=tuple(vertices), edges=tuple(edges), k=k)
    logger.debug(f"Read graph: |V|={len(vertices)} |E|={len(edges)} max degree={graph.max_degree}")
    return graph


def parse_dimacs(text: str) -> CnfInput:
    header = None
    literals: List[int] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split()
        if not fields or fields[0] == "c" or fields[0] == "%":
            continue
        if fields[0] == "p":
            if header is not None or len(fields) != 4 or fields[1] != "cnf":
                raise _fail(exception_constants.DIMACS_HEADER, line_no)
            header = tuple(_integers(fields[2:], "header", line_no))
            continue
        if header is None:
            raise _fail(exception_constants.DIMACS_HEADER, line_no)
        literals.extend(_integers(fields, "clause", line_no))

    if header is None:
        raise _fail(exception_constants.DIMACS_HEADER)

    clauses: List[Tuple[int, ...]] = []
    current: List[int] = []
    for literal in literals:
        if literal == 0:
            clauses.append(tuple(current))
            current = []
        else:
            current.append(literal)
    if current:
        clauses.append(tuple(current))

    variables, expected = header
    if len(clauses) != expected:
        raise _fail(exception_constants.DIMACS_COUNT_MISMATCH.format(expected=expected, found=len(clauses)))

    cnf = _validated(CnfInput, variables=variables, clauses=tuple(clauses))
    logger.debug(f"Read CNF: {cnf.n} variables, {cnf.m} clauses")
    return cnf


def serialize_dimacs(cnf: CnfInput) -> str:
    lines = [f"p cnf {cnf.variables} {len(cnf.clauses)}"]
    lines += [" ".join(map(str, clause)) + " 0" for clause in cnf.clauses]
    return "\n".join(lines) + "\n"
