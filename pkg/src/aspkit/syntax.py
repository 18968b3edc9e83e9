"""AST for the input rule language.

Terms, literals, aggregates, rules and programs are immutable dataclasses.
Source locations ride along on the nodes that need them for diagnostics but
are excluded from structural equality, so parse -> print -> parse round-trips
compare equal.
"""

from dataclasses import dataclass, field

ARITH_OPS = ("+", "-", "*", "/", "mod")
COMPARISON_OPS = ("==", "!=", "<", "<=", ">", ">=")

# Binding strength used by the printer; the parser encodes the same table in
# its grammar: mul ops bind tighter than add ops, unary minus and abs tightest.
_ADD_LEVEL = 1
_MUL_LEVEL = 2
_UNARY_LEVEL = 3


@dataclass(frozen=True)
class Loc:
    file: str
    line: int
    col: int

    def __str__(self):
        return f"{self.file}:{self.line}:{self.col}"


@dataclass(frozen=True)
class Variable:
    name: str

    def to_source(self):
        return self.name


@dataclass(frozen=True)
class SymbolicConst:
    name: str

    def to_source(self):
        return self.name


@dataclass(frozen=True)
class Integer:
    value: int

    def to_source(self):
        return str(self.value)


@dataclass(frozen=True)
class Range:
    """Inclusive integer range, argument positions only (e.g. d(1..8))."""

    lo: "Term"
    hi: "Term"

    def to_source(self):
        return f"{term_source(self.lo)}..{term_source(self.hi)}"


@dataclass(frozen=True)
class Pool:
    """Alternative terms at one argument position (e.g. node(a; b; c))."""

    members: tuple

    def to_source(self):
        return "; ".join(term_source(m) for m in self.members)


@dataclass(frozen=True)
class FuncApp:
    """Built-in arithmetic application; op in ARITH_OPS or "abs".

    Unary minus is FuncApp("-", (x,)); the parser folds it on integer
    literals so plain negative numbers stay Integer nodes.
    """

    op: str
    args: tuple

    def to_source(self):
        return _func_source(self, 0, False)


Term = Variable | SymbolicConst | Integer | Range | Pool | FuncApp


def _level(t):
    if isinstance(t, FuncApp):
        if t.op in ("+", "-") and len(t.args) == 2:
            return _ADD_LEVEL
        if t.op in ("*", "/", "mod"):
            return _MUL_LEVEL
        return _UNARY_LEVEL
    return _UNARY_LEVEL + 1


def _func_source(t, parent_level, right_side):
    lvl = _level(t)
    if isinstance(t, FuncApp):
        if t.op == "abs":
            s = f"abs({term_source(t.args[0])})"
        elif len(t.args) == 1:
            s = f"-{_func_source(t.args[0], lvl, False)}"
        else:
            a, b = t.args
            op = t.op
            s = f"{_func_source(a, lvl, False)} {op} {_func_source(b, lvl, True)}"
    else:
        s = t.to_source()
    # Parenthesize when binding is weaker than the context, or equal on the
    # right of a non-commutative operator (a - (b - c), a / (b / c)).
    if lvl < parent_level or (lvl == parent_level and right_side):
        return f"({s})"
    return s


def term_source(t):
    return _func_source(t, 0, False)


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()
    loc: Loc | None = field(default=None, compare=False)

    def key(self):
        return (self.pred, len(self.args))

    def to_source(self):
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(term_source(a) for a in self.args)})"


@dataclass(frozen=True)
class Comparison:
    """Built-in comparison between two terms; always positive polarity."""

    lhs: Term
    op: str
    rhs: Term
    loc: Loc | None = field(default=None, compare=False)

    def to_source(self):
        return f"{term_source(self.lhs)} {self.op} {term_source(self.rhs)}"


@dataclass(frozen=True)
class Literal:
    """An atom or comparison with polarity and optional conditions.

    A non-empty `conditions` tuple makes this a conditional literal
    (a(X):d(X)); conditions are atoms over domain predicates, checked by
    domain analysis.  Comparisons never carry `not` or conditions.
    """

    positive: bool
    atom: Atom | Comparison
    conditions: tuple = ()

    def to_source(self):
        s = self.atom.to_source()
        if self.conditions:
            s += "".join(":" + c.to_source() for c in self.conditions)
        return s if self.positive else f"not {s}"


@dataclass(frozen=True)
class AggregateElem:
    literal: Literal
    weight: Term | None = None

    def to_source(self):
        s = self.literal.to_source()
        if self.weight is not None:
            s += f"={term_source(self.weight)}"
        return s


@dataclass(frozen=True)
class Aggregate:
    """Cardinality ({...}) or weight ([...]) aggregate with optional bounds.

    Serves both as a rule head (choice with bounds; element literals must be
    positive atoms) and as a body element.  Missing lower bound means 0,
    missing upper bound means unbounded.
    """

    weighted: bool
    lower: Term | None
    elements: tuple
    upper: Term | None
    loc: Loc | None = field(default=None, compare=False)

    def to_source(self):
        o, c = ("[", "]") if self.weighted else ("{", "}")
        inner = ", ".join(e.to_source() for e in self.elements)
        parts = []
        if self.lower is not None:
            parts.append(term_source(self.lower))
        parts.append(f"{o} {inner} {c}" if inner else f"{o}{c}")
        if self.upper is not None:
            parts.append(term_source(self.upper))
        return " ".join(parts)


BodyElem = Literal | Aggregate
Head = Atom | Aggregate | None  # None: integrity constraint


@dataclass(frozen=True)
class Rule:
    head: Head
    body: tuple = ()
    loc: Loc | None = field(default=None, compare=False)

    def is_fact(self):
        return isinstance(self.head, Atom) and not self.body

    def to_source(self):
        body = ", ".join(b.to_source() for b in self.body)
        if self.head is None:
            return f":- {body}."
        head = self.head.to_source()
        return f"{head} :- {body}." if body else f"{head}."


@dataclass(frozen=True)
class Program:
    rules: tuple = ()
    compute: tuple | None = None       # literals; None when absent
    const_decls: dict = field(default_factory=dict)  # name -> int

    def to_source(self):
        lines = [f"#const {n} = {v}." for n, v in self.const_decls.items()]
        lines += [r.to_source() for r in self.rules]
        if self.compute is not None:
            inner = ", ".join(l.to_source() for l in self.compute)
            lines.append(f"compute {{ {inner} }}.")
        return "\n".join(lines) + "\n"


def head_atoms(rule):
    """Atoms a rule defines: the normal head or the aggregate element atoms."""
    if isinstance(rule.head, Atom):
        return [rule.head]
    if isinstance(rule.head, Aggregate):
        return [e.literal.atom for e in rule.head.elements]
    return []
