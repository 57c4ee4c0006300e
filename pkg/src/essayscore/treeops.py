"""Constituency trees: PTB bracket parsing, tree-pattern matching, and the
node counts behind the syntactic complexity features.

Pattern language (documented subset)::

    expr  := prim (rel prim)*
    prim  := label | "(" expr ")"
    rel   := "<" | "<<" | "!<" | "$+"
    label := PTB tag, alternation with "|" (e.g. WHNP|WHPP)

``A < B`` matches an A-labeled node with a B child, ``<<`` any descendant,
``!<`` no B child, ``$+`` a B among the immediately following sisters.
Chained relations all attach to the head label ("S < NP < VP").

Pinned structural definitions (the counts are only meaningful relative to
these):

* clause: S|SINV|SQ node dominating, with no intervening clause node, a VP
  whose head verb is finite (VBD|VBP|VBZ|MD as an immediate child of that
  VP or of a VP it immediately dominates).
* T-unit: clause with no clause ancestor; when such a top clause directly
  coordinates two or more clause children next to a CC, the coordinated
  children are the T-units instead.
* dependent clause: clause with an SBAR ancestor.
* complex T-unit: T-unit dominating a dependent clause.
* coordinate phrase: ADJP|ADVP|NP|VP immediately dominating a CC.
* complex nominal: NP immediately dominating an adjective (JJ/JJR/JJS),
  possessive (POS/PRP$), PP, SBAR, participle (VBG/VBN), or an appositive
  (two adjacent NP children with no CC between them); plus nominal clauses
  (SBAR immediately under VP) and gerund/infinitive subjects (S whose VP
  starts with VBG or TO, immediately preceding a VP sister).
* height: nodes on the longest root-to-terminal path, root = 1; the
  preterminal POS node is the terminal, its surface text is not a node.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

PUNCT_TAGS = {".", ",", ":", "``", "''", "-LRB-", "-RRB-"}
SYMBOL_TAGS = {"SYM", "#", "$"}
NONWORD_TAGS = PUNCT_TAGS | SYMBOL_TAGS

CLAUSE_LABELS = {"S", "SINV", "SQ"}
FINITE_TAGS = {"VBD", "VBP", "VBZ", "MD"}
WH_PHRASE_LABELS = {"WHNP", "WHPP", "WHADJP", "WHADVP"}
COORD_PHRASE_LABELS = {"ADJP", "ADVP", "NP", "VP"}


class TreeParseError(ValueError):
    """Malformed bracket string; carries the character offset."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class PatternError(ValueError):
    pass


class ParseTree:
    """Rooted ordered labeled tree. Terminals carry surface text and have
    no children. Immutable by convention after parse_ptb builds it."""

    __slots__ = ("label", "children", "text", "parent", "_height", "_size")

    def __init__(self, label, children=(), text=None):
        self.label = label
        self.children = tuple(children)
        self.text = text
        self.parent = None
        for child in self.children:
            child.parent = self
        self._height = None
        self._size = None

    @property
    def is_terminal(self):
        return not self.children

    @property
    def height(self):
        if self._height is None:
            if self.is_terminal:
                self._height = 1
            else:
                self._height = 1 + max(c.height for c in self.children)
        return self._height

    @property
    def size(self):
        """Total node count, terminals included."""
        if self._size is None:
            self._size = 1 + sum(c.size for c in self.children)
        return self._size

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()

    def terminals(self):
        return [n for n in self.walk() if n.is_terminal]

    def leaves(self):
        """Surface forms, left to right."""
        return [n.text for n in self.terminals()]

    def word_count(self):
        """Terminals whose tag is not punctuation or a symbol."""
        return sum(1 for n in self.terminals() if n.label not in NONWORD_TAGS)

    def ancestors(self):
        node = self.parent
        while node is not None:
            yield node
            node = node.parent

    def render(self):
        """Canonical bracket string: single spaces, no empty nodes."""
        if self.is_terminal:
            return f"({self.label} {self.text})"
        inner = " ".join(c.render() for c in self.children)
        return f"({self.label} {inner})"

    def __repr__(self):
        return f"ParseTree({self.render()!r})"


_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")


def parse_ptb(bracket: str) -> ParseTree:
    """Parse a PTB-style bracket string into a ParseTree.

    Raises TreeParseError with a character offset on unbalanced or empty
    input. Rendering the result reproduces the input modulo whitespace.
    """
    if not bracket or not bracket.strip():
        raise TreeParseError("empty input", 0)
    tokens = [(m.group(), m.start()) for m in _TOKEN_RE.finditer(bracket)]
    pos = 0

    def parse_node():
        nonlocal pos
        if pos >= len(tokens):
            raise TreeParseError("unexpected end of input", len(bracket))
        tok, off = tokens[pos]
        if tok != "(":
            raise TreeParseError(f"expected '(' but found {tok!r}", off)
        pos += 1
        if pos >= len(tokens):
            raise TreeParseError("unclosed '('", off)
        label, _ = tokens[pos]
        if label in ("(", ")"):
            raise TreeParseError("missing node label", tokens[pos][1])
        pos += 1
        children = []
        text = None
        while True:
            if pos >= len(tokens):
                raise TreeParseError("unclosed '('", off)
            tok, toff = tokens[pos]
            if tok == ")":
                pos += 1
                break
            if tok == "(":
                children.append(parse_node())
            else:
                if children:
                    raise TreeParseError(
                        "mixed terminal text and children", toff)
                if text is not None:
                    text = f"{text} {tok}"
                else:
                    text = tok
                pos += 1
        if text is not None:
            return ParseTree(label, (), text)
        if not children:
            raise TreeParseError(f"empty node {label!r}", off)
        return ParseTree(label, children)

    root = parse_node()
    if pos != len(tokens):
        raise TreeParseError("trailing material after tree", tokens[pos][1])
    return root


# ---------------------------------------------------------------------------
# Tree patterns

@dataclass(frozen=True)
class _Rel:
    op: str  # "<", "<<", "!<", "$+"
    target: "TreePattern"


@dataclass(frozen=True)
class TreePattern:
    labels: frozenset
    relations: tuple

    def matches(self, node: ParseTree) -> bool:
        if node.label not in self.labels:
            return False
        for rel in self.relations:
            if rel.op == "<":
                if not any(rel.target.matches(c) for c in node.children):
                    return False
            elif rel.op == "!<":
                if any(rel.target.matches(c) for c in node.children):
                    return False
            elif rel.op == "<<":
                if not any(rel.target.matches(d)
                           for c in node.children for d in c.walk()):
                    return False
            elif rel.op == "$+":
                if node.parent is None:
                    return False
                sisters = node.parent.children
                idx = next(i for i, s in enumerate(sisters) if s is node)
                if not any(rel.target.matches(s) for s in sisters[idx + 1:]):
                    return False
        return True


_RELATION_OPS = ("<<", "!<", "$+", "<")


def parse_pattern(pattern: str) -> TreePattern:
    """Compile a pattern string; raises PatternError on malformed input.
    Relation operators must be whitespace-separated from labels (tags
    such as PRP$ are themselves legal labels)."""
    if not pattern or not pattern.strip():
        raise PatternError("empty pattern")
    tokens = pattern.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def parse_prim():
        nonlocal pos
        if pos >= len(tokens):
            raise PatternError("pattern ended unexpectedly")
        tok = tokens[pos]
        if tok == "(":
            pos += 1
            inner = parse_expr()
            if pos >= len(tokens) or tokens[pos] != ")":
                raise PatternError("missing ')' in pattern")
            pos += 1
            return inner
        if tok in ("<", "<<", "!<", "$+", ")"):
            raise PatternError(f"expected label, found {tok!r}")
        pos += 1
        return TreePattern(frozenset(tok.split("|")), ())

    def parse_expr():
        nonlocal pos
        head = parse_prim()
        rels = list(head.relations)
        while pos < len(tokens) and tokens[pos] in ("<", "<<", "!<", "$+"):
            op = tokens[pos]
            pos += 1
            rels.append(_Rel(op, parse_prim()))
        return TreePattern(head.labels, tuple(rels))

    result = parse_expr()
    if pos != len(tokens):
        raise PatternError(f"trailing pattern text {tokens[pos]!r}")
    return result


def match_count(tree: ParseTree, pattern) -> int:
    """Number of nodes in the tree matching the pattern (string or
    compiled TreePattern)."""
    if isinstance(pattern, str):
        pattern = parse_pattern(pattern)
    return sum(1 for node in tree.walk() if pattern.matches(node))


# ---------------------------------------------------------------------------
# Structural predicates and counts

def _finite_vp(vp: ParseTree) -> bool:
    # Finite tag directly under this VP, or under a VP it immediately
    # dominates (auxiliary chains like "will run").
    for child in vp.children:
        if child.label in FINITE_TAGS:
            return True
    for child in vp.children:
        if child.label == "VP" and any(
                g.label in FINITE_TAGS for g in child.children):
            return True
    return False


def is_clause(node: ParseTree) -> bool:
    if node.label not in CLAUSE_LABELS:
        return False
    # VP reachable without crossing another clause node.
    stack = list(node.children)
    while stack:
        cur = stack.pop()
        if cur.label == "VP" and _finite_vp(cur):
            return True
        if cur.label in CLAUSE_LABELS:
            continue
        stack.extend(cur.children)
    return False


def clauses(tree: ParseTree):
    return [n for n in tree.walk() if is_clause(n)]


def t_units(tree: ParseTree):
    """Top-level clauses, with ROOT-level clause coordination split into
    its coordinated members."""
    units = []
    for node in tree.walk():
        if not is_clause(node):
            continue
        if any(is_clause(a) for a in node.ancestors()):
            continue
        clause_kids = [c for c in node.children if is_clause(c)]
        has_cc = any(c.label == "CC" for c in node.children)
        if len(clause_kids) >= 2 and has_cc:
            units.extend(clause_kids)
        else:
            units.append(node)
    return units


def dependent_clauses(tree: ParseTree):
    return [n for n in tree.walk()
            if is_clause(n) and any(a.label == "SBAR" for a in n.ancestors())]


def _dominates_dependent_clause(node: ParseTree) -> bool:
    for d in node.walk():
        if d is node:
            continue
        if is_clause(d) and any(
                a.label == "SBAR" for a in d.ancestors()):
            return True
    return False


def _is_appositive_np(node: ParseTree) -> bool:
    np_positions = [i for i, c in enumerate(node.children)
                    if c.label == "NP"]
    for a, b in zip(np_positions, np_positions[1:]):
        between = node.children[a + 1:b]
        if not any(c.label == "CC" for c in between):
            return True
    return False


_CN_CHILD_TAGS = {"JJ", "JJR", "JJS", "POS", "PRP$", "PP", "SBAR",
                  "VBG", "VBN"}


def is_complex_nominal(node: ParseTree) -> bool:
    if node.label == "NP":
        if any(c.label in _CN_CHILD_TAGS for c in node.children):
            return True
        return _is_appositive_np(node)
    if node.label == "SBAR":
        return node.parent is not None and node.parent.label == "VP"
    if node.label == "S":
        # Gerund or infinitive in subject position.
        vp = next((c for c in node.children if c.label == "VP"), None)
        if vp is None or not vp.children:
            return False
        if vp.children[0].label not in ("VBG", "TO"):
            return False
        if node.parent is None:
            return False
        sisters = node.parent.children
        idx = next(i for i, s in enumerate(sisters) if s is node)
        return idx + 1 < len(sisters) and sisters[idx + 1].label == "VP"
    return False


def is_coordinate_phrase(node: ParseTree) -> bool:
    return (node.label in COORD_PHRASE_LABELS
            and any(c.label == "CC" for c in node.children))


@dataclass(frozen=True)
class SyntacticCounts:
    words: int
    clauses: int
    t_units: int
    complex_t_units: int
    dependent_clauses: int
    coordinate_phrases: int
    complex_nominals: int
    verb_phrases: int
    noun_phrases: int
    prep_phrases: int
    sbars: int
    rrcs: int
    conjps: int
    wh_phrases: int
    constituents: int
    subtrees: int
    height: int
    np_words: int
    vp_words: int
    pp_words: int


def syntactic_counts(tree: ParseTree) -> SyntacticCounts:
    """All per-sentence counts needed by the syntactic complexity
    features, using the pinned definitions above."""
    nodes = list(tree.walk())
    clause_nodes = [n for n in nodes if is_clause(n)]
    units = t_units(tree)
    nps = [n for n in nodes if n.label == "NP"]
    vps = [n for n in nodes if n.label == "VP"]
    pps = [n for n in nodes if n.label == "PP"]
    return SyntacticCounts(
        words=tree.word_count(),
        clauses=len(clause_nodes),
        t_units=len(units),
        complex_t_units=sum(
            1 for u in units if _dominates_dependent_clause(u)),
        dependent_clauses=len(dependent_clauses(tree)),
        coordinate_phrases=sum(
            1 for n in nodes if is_coordinate_phrase(n)),
        complex_nominals=sum(1 for n in nodes if is_complex_nominal(n)),
        verb_phrases=len(vps),
        noun_phrases=len(nps),
        prep_phrases=len(pps),
        sbars=sum(1 for n in nodes if n.label == "SBAR"),
        rrcs=sum(1 for n in nodes if n.label == "RRC"),
        conjps=sum(1 for n in nodes if n.label == "CONJP"),
        wh_phrases=sum(1 for n in nodes if n.label in WH_PHRASE_LABELS),
        constituents=sum(1 for n in nodes if not n.is_terminal),
        subtrees=len(nodes),
        height=tree.height,
        np_words=sum(n.word_count() for n in nps),
        vp_words=sum(n.word_count() for n in vps),
        pp_words=sum(n.word_count() for n in pps),
    )
