"""
Newick reader and writer for integer-weighted phylogenetic trees.

Only the subset the toolkit needs: nested parentheses, optional node labels,
a mandatory integer branch length on every edge below the root, and a
terminating ';'. Comments, quoting and NHX annotations are not accepted.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Set

from app.core.exceptions import exception_constants
from app.core.exceptions.local_exceptions import InstanceFormatError
from app.schemas.instance import PhyloTree, build_validated

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\s+|(?P<punct>[(),:;])|(?P<word>[^\s(),:;]+)")
_NAME = re.compile(r"^[A-Za-z0-9_]+$")
_INTEGER = re.compile(r"^[+-]?\d+$")
_NUMBER = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")

DEFAULT_ROOT = "r"
SYNTHETIC_PREFIX = "_n"


@dataclass
class _Token:
    kind: str  # "punct", "word" or "end"
    text: str
    line: int
    column: int


@dataclass
class _Node:
    name: Optional[str]
    line: int
    column: int
    length: Optional[int] = None
    children: List["_Node"] = field(default_factory=list)


def _tokens(text: str, first_line: int) -> Iterator[_Token]:
    line, line_start = first_line, 0
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        column = pos - line_start + 1
        if match.lastgroup:
            yield _Token(match.lastgroup, match.group(match.lastgroup), line, column)
        else:
            for offset, char in enumerate(match.group(0)):
                if char == "\n":
                    line += 1
                    line_start = pos + offset + 1
        pos = match.end()
    yield _Token("end", "", line, pos - line_start + 1)


class _Parser:
    def __init__(self, text: str, first_line: int):
        self._tokens = _tokens(text, first_line)
        self._current = next(self._tokens)

    def _advance(self) -> _Token:
        token = self._current
        self._current = next(self._tokens, token)
        return token

    def _fail(self, expected: str) -> InstanceFormatError:
        token = self._current
        if token.kind == "end":
            message = exception_constants.NEWICK_UNEXPECTED_END.format(expected=expected)
        else:
            message = exception_constants.NEWICK_UNEXPECTED_TOKEN.format(
                found=f"'{token.text}'", expected=expected
            )
        return InstanceFormatError(message, line=token.line, column=token.column)

    def _at(self, text: str) -> bool:
        return self._current.kind == "punct" and self._current.text == text

    def parse(self) -> _Node:
        if self._current.kind == "end":
            raise self._fail("a tree")
        root = self._subtree()
        if self._at(":"):
            raise InstanceFormatError(
                exception_constants.NEWICK_ROOT_LENGTH,
                line=self._current.line,
                column=self._current.column,
            )
        if not self._at(";"):
            raise self._fail("';'")
        self._advance()
        if self._current.kind != "end":
            raise InstanceFormatError(
                exception_constants.NEWICK_TRAILING_TEXT,
                line=self._current.line,
                column=self._current.column,
            )
        return root

    def _subtree(self) -> _Node:
        """One subtree, read with an explicit stack of the inner nodes still open."""
        open_nodes: List[_Node] = []
        while True:
            start = self._current
            node = _Node(name=None, line=start.line, column=start.column)
            if self._at("("):
                self._advance()
                open_nodes.append(node)
                continue
            self._label(node)
            while open_nodes:
                self._length(node)
                parent = open_nodes[-1]
                parent.children.append(node)
                if self._at(","):
                    self._advance()
                    break
                if not self._at(")"):
                    raise self._fail("',' or ')'")
                self._advance()
                node = open_nodes.pop()
                self._label(node)
            else:
                return node

    def _label(self, node: _Node) -> None:
        if self._current.kind == "word":
            token = self._advance()
            if not _NAME.match(token.text):
                raise InstanceFormatError(
                    exception_constants.NEWICK_UNEXPECTED_TOKEN.format(
                        found=f"label '{token.text}'", expected="a name over [A-Za-z0-9_]"
                    ),
                    line=token.line,
                    column=token.column,
                )
            node.name = token.text
        if not node.children and node.name is None:
            raise InstanceFormatError(
                exception_constants.NEWICK_UNNAMED_LEAF, line=node.line, column=node.column
            )

    def _length(self, node: _Node) -> None:
        if not self._at(":"):
            label = node.name or "(unnamed)"
            raise InstanceFormatError(
                exception_constants.NEWICK_MISSING_LENGTH.format(node=label),
                line=self._current.line,
                column=self._current.column,
            )
        self._advance()
        if self._current.kind != "word":
            raise self._fail("a branch length")
        node.length = _branch_length(self._advance())


def _branch_length(token: _Token) -> int:
    text = token.text
    if _INTEGER.match(text):
        value = int(text)
        if value < 0:
            raise InstanceFormatError(
                exception_constants.NEWICK_NEGATIVE_LENGTH.format(value=text),
                line=token.line,
                column=token.column,
            )
        return value
    if _NUMBER.match(text):
        raise InstanceFormatError(
            exception_constants.NEWICK_NON_INTEGER_LENGTH.format(value=text),
            line=token.line,
            column=token.column,
        )
    raise InstanceFormatError(
        exception_constants.NEWICK_UNEXPECTED_TOKEN.format(found=f"'{text}'", expected="a branch length"),
        line=token.line,
        column=token.column,
    )


def _walk(node: _Node) -> Iterator[_Node]:
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(current.children))


def _name_anonymous(root: _Node) -> None:
    taken: Set[str] = {node.name for node in _walk(root) if node.name}
    if root.name is None and DEFAULT_ROOT not in taken:
        root.name = DEFAULT_ROOT
        taken.add(DEFAULT_ROOT)

    counter = 0
    for node in _walk(root):
        if node.name is not None:
            continue
        counter += 1
        while f"{SYNTHETIC_PREFIX}{counter}" in taken:
            counter += 1
        node.name = f"{SYNTHETIC_PREFIX}{counter}"
        taken.add(node.name)


def parse_tree(text: str, first_line: int = 1) -> PhyloTree:
    """
    Parse one Newick tree. `first_line` shifts reported line numbers when the
    tree is embedded in a larger file.

    Unnamed inner nodes receive synthetic names (`_n1`, `_n2`, ... in preorder);
    an unnamed root is called `r`.
    """
    root = _Parser(text, first_line).parse()
    _name_anonymous(root)

    edges = [
        {"parent": parent.name, "child": child.name, "weight": child.length}
        for parent in _walk(root)
        for child in parent.children
    ]
    tree = build_validated(PhyloTree, root=root.name, edges=tuple(edges))
    logger.debug(f"Parsed tree with {len(tree.leaves)} leaves and {len(edges)} edges")
    return tree


def serialize_tree(tree: PhyloTree) -> str:
    """Canonical Newick text: every node named, children in stored order."""
    rendered: Dict[str, str] = {}
    stack = [(tree.root, False)]
    while stack:
        node, expanded = stack.pop()
        kids = tree.children(node)
        if not kids:
            rendered[node] = node
        elif not expanded:
            stack.append((node, True))
            stack.extend((child, False) for child in kids)
        else:
            inner = ",".join(f"{rendered.pop(child)}:{tree.parent(child)[1]}" for child in kids)
            rendered[node] = f"({inner}){node}"
    return f"{rendered[tree.root]};"
