"""Grounder: arithmetic, range expansion, domain evaluation, instantiation.

Ground values are plain Python ints and strs (symbolic constants). The
grounder fully evaluates domain predicates bottom-up in dependency order,
then instantiates the remaining rules by joining over the positive domain
literals in their bodies. Negative domain literals are always evaluated
away; positive ones stay in rule bodies only in "keep" mode, where domain
extensions are also emitted as facts ahead of all other rules.
"""

import itertools
from dataclasses import dataclass

from .analysis import Diagnostic, atom_vars, term_vars
from .lexer import INT64_MAX, INT64_MIN
from .syntax import (
    Aggregate,
    Atom,
    Comparison,
    FuncApp,
    Integer,
    Literal,
    Pool,
    Program,
    Range,
    Rule,
    SymbolicConst,
    Variable,
)

FALSITY = 1  # reserved atom id, never user-visible


class GroundingError(Exception):
    def __init__(self, loc, message):
        self.loc = loc
        self.message = message
        super().__init__(f"{loc}: {message}" if loc else message)


class ArithmeticEvalError(GroundingError):
    """Division by zero or 64-bit overflow during term evaluation."""


class UnboundConstantError(GroundingError):
    def __init__(self, loc, name):
        self.name = name
        super().__init__(loc, f"unbound symbolic constant '{name}' used as an integer")


def _check64(v, loc):
    if v > INT64_MAX or v < INT64_MIN:
        raise ArithmeticEvalError(loc, "integer overflow in arithmetic")
    return v


def eval_term(t, binding, loc):
    """Evaluate a ground or bound term to an int or a symbolic-constant str."""
    if isinstance(t, Integer):
        return t.value
    if isinstance(t, SymbolicConst):
        return t.name
    if isinstance(t, Variable):
        try:
            return binding[t.name]
        except KeyError:
            raise GroundingError(loc, f"unbound variable '{t.name}'") from None
    # FuncApp
    vals = []
    for arg in t.args:
        v = eval_term(arg, binding, loc)
        if not isinstance(v, int):
            if isinstance(arg, SymbolicConst):
                raise UnboundConstantError(loc, arg.name)
            raise GroundingError(loc, f"arithmetic on non-integer value '{v}'")
        vals.append(v)
    op = t.op
    if op == "abs":
        return _check64(abs(vals[0]), loc)
    if op == "-" and len(vals) == 1:
        return _check64(-vals[0], loc)
    a, b = vals
    if op == "+":
        return _check64(a + b, loc)
    if op == "-":
        return _check64(a - b, loc)
    if op == "*":
        return _check64(a * b, loc)
    if b == 0:
        raise ArithmeticEvalError(loc, "division by zero")
    # / and mod truncate toward zero; the remainder keeps the dividend's sign
    q = abs(a) // abs(b)
    if (a < 0) != (b < 0):
        q = -q
    if op == "/":
        return _check64(q, loc)
    return _check64(a - q * b, loc)


def compare_values(op, a, b, loc):
    if op == "==":
        return a == b
    if op == "!=":
        return a != b
    if not (isinstance(a, int) and isinstance(b, int)):
        bad = a if not isinstance(a, int) else b
        raise GroundingError(loc, f"ordering comparison on non-integer value '{bad}'")
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    return a >= b


def format_value(v):
    return str(v)


def format_atom(pred, vals):
    if not vals:
        return pred
    return f"{pred}({','.join(format_value(v) for v in vals)})"


# -- range and pool expansion --------------------------------------------------

def _range_bound(term, loc):
    if term_vars(term):
        raise GroundingError(loc, "range bounds must not contain variables")
    v = eval_term(term, {}, loc)
    if not isinstance(v, int):
        raise UnboundConstantError(loc, v)
    return v


def _expand_arg(t, loc, warnings):
    if isinstance(t, Range):
        lo = _range_bound(t.lo, loc)
        hi = _range_bound(t.hi, loc)
        if lo > hi:
            warnings.append(Diagnostic(loc, "warning", f"empty range ({lo}..{hi})"))
            return []
        return [Integer(v) for v in range(lo, hi + 1)]
    if isinstance(t, Pool):
        out = []
        for m in t.members:
            out.extend(_expand_arg(m, loc, warnings))
        return out
    return [t]


def _expand_atom(a, warnings):
    alts = [_expand_arg(t, a.loc, warnings) for t in a.args]
    return [Atom(a.pred, combo, a.loc) for combo in itertools.product(*alts)]


def desugar_program(program):
    """Expand ranges and pools; each alternative yields its own rule copy.

    A range behaves like a fresh variable over the interval, so an atom with
    n alternatives multiplies the rule n ways (for facts this is the familiar
    node(a;b;c) -> three facts). An empty interval drops the affected copies
    and emits a warning.
    """
    warnings = []
    rules = []
    for rule in program.rules:
        if isinstance(rule.head, Atom):
            heads = _expand_atom(rule.head, warnings)
        else:
            heads = [rule.head]  # aggregate or None; no ranges inside by grammar
        elem_alts = []
        for b in rule.body:
            if isinstance(b, Literal) and isinstance(b.atom, Atom):
                elem_alts.append(
                    [Literal(b.positive, a, b.conditions) for a in _expand_atom(b.atom, warnings)])
            else:
                elem_alts.append([b])
        for h in heads:
            for combo in itertools.product(*elem_alts):
                rules.append(Rule(h, tuple(combo), rule.loc))
    return Program(tuple(rules), program.compute, program.const_decls), warnings


# -- symbol table ---------------------------------------------------------------

class SymbolTable:
    """Dense atom numbering starting at 2; id 1 is the reserved falsity atom."""

    def __init__(self):
        self._ids = {}
        self._names = {}
        self._next = 2

    def intern(self, name):
        i = self._ids.get(name)
        if i is None:
            i = self._next
            self._next += 1
            self._ids[name] = i
            self._names[i] = name
        return i

    def lookup(self, name):
        return self._ids.get(name)

    def new_aux(self):
        i = self._next
        self._next += 1
        return i

    def name(self, i):
        return self._names.get(i)

    @property
    def next_id(self):
        return self._next

    def named_items(self):
        """(id, name) pairs for user-visible atoms, in id order."""
        return sorted(self._names.items())

    def __len__(self):
        return self._next - 2


# -- extensions ----------------------------------------------------------------

class Extension:
    """Ordered set of ground argument tuples with memoized position indexes."""

    def __init__(self):
        self.rows = {}
        self._indexes = {}

    def add(self, row):
        if row in self.rows:
            return False
        self.rows[row] = True
        if self._indexes:
            self._indexes.clear()
        return True

    def __contains__(self, row):
        return row in self.rows

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def index(self, positions):
        idx = self._indexes.get(positions)
        if idx is None:
            idx = {}
            for row in self.rows:
                key = tuple(row[p] for p in positions)
                idx.setdefault(key, []).append(row)
            self._indexes[positions] = idx
        return idx


_EMPTY_EXT = Extension()


# -- join planning and execution -------------------------------------------------

class _Step:
    __slots__ = ("ext", "key_positions", "key_terms", "outs", "intra", "checks")

    def __init__(self, ext, key_positions, key_terms, outs, intra):
        self.ext = ext
        self.key_positions = key_positions
        self.key_terms = key_terms
        self.outs = outs          # (position, name) pairs newly bound here
        self.intra = intra        # (position, earlier position) equalities
        self.checks = []          # checks runnable once this step has bound

    def rows(self, binding, loc):
        if self.key_positions:
            key = tuple(eval_term(t, binding, loc) for t in self.key_terms)
            return self.ext.index(self.key_positions).get(key, ())
        return self.ext.rows


class _Plan:
    """Static join order for one rule body, greedy by extension size.

    Literals whose arithmetic arguments are fully bound are preferred; when
    none qualifies the smallest extension is taken anyway and its computed
    arguments turn into deferred equality checks.
    """

    def __init__(self, atoms, checks, bound0, ext_of, loc):
        self.loc = loc
        self.pre_checks = []
        self.steps = []
        bound = set(bound0)
        remaining = list(atoms)
        fresh_n = 0
        deferred = []
        while remaining:
            ready = [a for a in remaining
                     if all(not (isinstance(arg, FuncApp) and term_vars(arg) - bound)
                            for arg in a.args)]
            pool = ready or remaining
            pick = min(pool, key=lambda a: (len(ext_of(a.key())), remaining.index(a)))
            remaining.remove(pick)
            key_positions = []
            key_terms = []
            outs = []
            intra = []
            local = {}
            for i, arg in enumerate(pick.args):
                if isinstance(arg, Variable):
                    if arg.name in bound:
                        key_positions.append(i)
                        key_terms.append(arg)
                    elif arg.name in local:
                        intra.append((i, local[arg.name]))
                    else:
                        local[arg.name] = i
                        outs.append((i, arg.name))
                elif isinstance(arg, (Integer, SymbolicConst)):
                    key_positions.append(i)
                    key_terms.append(arg)
                else:  # FuncApp
                    if term_vars(arg) <= bound:
                        key_positions.append(i)
                        key_terms.append(arg)
                    else:
                        name = f"\x00{fresh_n}"
                        fresh_n += 1
                        outs.append((i, name))
                        deferred.append((term_vars(arg), _DeferredEq(name, arg)))
            self.steps.append(_Step(ext_of(pick.key()), tuple(key_positions),
                                    tuple(key_terms), tuple(outs), tuple(intra)))
            bound.update(local)

        bound = set(bound0)
        pending = list(checks) + deferred
        for step in [None] + self.steps:
            if step is not None:
                bound.update(name for _, name in step.outs if not name.startswith("\x00"))
            rest = []
            for needed, check in pending:
                if needed <= bound:
                    (self.pre_checks if step is None else step.checks).append(check)
                else:
                    rest.append((needed, check))
            pending = rest
        if pending:
            raise GroundingError(loc, "internal: unbindable variable in rule body")

    def run(self, binding):
        for check in self.pre_checks:
            if not check(binding, self.loc):
                return
        yield from self._run(0, binding)

    def _run(self, depth, binding):
        if depth == len(self.steps):
            yield binding
            return
        step = self.steps[depth]
        for row in step.rows(binding, self.loc):
            if any(row[i] != row[j] for i, j in step.intra):
                continue
            nb = dict(binding)
            for i, name in step.outs:
                nb[name] = row[i]
            if all(check(nb, self.loc) for check in step.checks):
                yield from self._run(depth + 1, nb)


class _DeferredEq:
    __slots__ = ("name", "term")

    def __init__(self, name, term):
        self.name = name
        self.term = term

    def __call__(self, binding, loc):
        return binding[self.name] == eval_term(self.term, binding, loc)


class _ComparisonCheck:
    __slots__ = ("comp",)

    def __init__(self, comp):
        self.comp = comp

    def __call__(self, binding, loc):
        c = self.comp
        return compare_values(c.op, eval_term(c.lhs, binding, c.loc),
                              eval_term(c.rhs, binding, c.loc), c.loc)


class _AbsentCheck:
    """Negative literal over a fully evaluated (domain) predicate."""
    __slots__ = ("atom", "ext")

    def __init__(self, atom, ext):
        self.atom = atom
        self.ext = ext

    def __call__(self, binding, loc):
        row = tuple(eval_term(t, binding, self.atom.loc) for t in self.atom.args)
        return row not in self.ext


class _ConditionalTruth:
    """All-instances truth check for a conditional domain literal."""
    __slots__ = ("expander", "exts")

    def __init__(self, expander, exts):
        self.expander = expander
        self.exts = exts

    def __call__(self, binding, loc):
        ext = self.exts.get(self.expander.atom.key(), _EMPTY_EXT)
        for row, _, _ in self.expander.instances(binding):
            present = row in ext
            if present != self.expander.positive:
                return False
        return True


class _ElementExpander:
    """Enumerates ground instances of a conditional literal or element."""

    def __init__(self, literal, weight, globals_, exts, loc):
        self.atom = literal.atom
        self.positive = literal.positive
        self.weight = weight
        self.loc = loc
        checks = []
        self.plan = _Plan(list(literal.conditions), checks, globals_,
                          lambda key: exts.get(key, _EMPTY_EXT), loc)

    def instances(self, binding):
        """Yields (args_row, weight, pred) per condition instance."""
        for b in self.plan.run(binding):
            row = tuple(eval_term(t, b, self.atom.loc) for t in self.atom.args)
            w = 1 if self.weight is None else eval_term(self.weight, b, self.loc)
            if not isinstance(w, int):
                raise GroundingError(self.loc, f"non-integer weight '{w}'")
            yield row, w, self.atom.pred


# -- ground rule representation ---------------------------------------------------

@dataclass(frozen=True)
class GAgg:
    weighted: bool
    lower: int | None
    upper: int | None
    elements: tuple  # ((signed atom id, weight), ...)


@dataclass(frozen=True)
class GRule:
    head: int | None      # atom id, or None for an integrity constraint
    head_agg: GAgg | None
    body: tuple           # signed atom ids and GAggs, in source order


def _rule_globals(rule):
    """Variables of a rule that are not local to some conditional element."""
    out = set()

    def lit_vars(lit, weight):
        if lit.conditions:
            return  # locals, bound by the conditions
        if isinstance(lit.atom, Comparison):
            term_vars(lit.atom.lhs, out)
            term_vars(lit.atom.rhs, out)
        else:
            atom_vars(lit.atom, out)
        if weight is not None:
            term_vars(weight, out)

    def agg_vars(agg):
        for bound in (agg.lower, agg.upper):
            if bound is not None:
                term_vars(bound, out)
        for e in agg.elements:
            lit_vars(e.literal, e.weight)

    if isinstance(rule.head, Atom):
        atom_vars(rule.head, out)
    elif isinstance(rule.head, Aggregate):
        agg_vars(rule.head)
    for b in rule.body:
        if isinstance(b, Aggregate):
            agg_vars(b)
        else:
            lit_vars(b, None)
    return out


# -- domain predicate evaluation ---------------------------------------------------

def evaluate_domain_predicates(program, analysis):
    """Computes the extension of every domain predicate.

    The domain component is acyclic by construction, so evaluating each
    predicate once in dependency order reaches the bottom-up fixpoint (the
    degenerate case of semi-naive iteration, with nothing left for a second
    pass to add).
    """
    domain = analysis.domain
    exts = {}
    by_head = {}
    for rule in program.rules:
        if isinstance(rule.head, Atom) and rule.head.key() in domain:
            by_head.setdefault(rule.head.key(), []).append(rule)

    def ext_of(key):
        return exts.get(key, _EMPTY_EXT)

    for scc in analysis.graph.sccs():
        key = scc[0]
        if key not in domain:
            continue
        ext = exts.setdefault(key, Extension())
        for rule in by_head.get(key, ()):
            globals_ = _rule_globals(rule)
            join_atoms = []
            checks = []
            for b in rule.body:
                if isinstance(b.atom, Comparison):
                    needed = frozenset(term_vars(b.atom.lhs) | term_vars(b.atom.rhs))
                    checks.append((needed, _ComparisonCheck(b.atom)))
                elif b.conditions:
                    exp = _ElementExpander(b, None, globals_, exts, rule.loc)
                    used = atom_vars(b.atom) | atom_vars_of(b.conditions)
                    checks.append((frozenset(used & globals_), _ConditionalTruth(exp, exts)))
                elif b.positive:
                    join_atoms.append(b.atom)
                else:
                    needed = frozenset(atom_vars(b.atom))
                    checks.append((needed, _AbsentCheck(b.atom, ext_of(b.atom.key()))))
            plan = _Plan(join_atoms, checks, set(), ext_of, rule.loc)
            head = rule.head
            for binding in plan.run({}):
                row = tuple(eval_term(t, binding, head.loc) for t in head.args)
                ext.add(row)
    return exts


def atom_vars_of(atoms):
    out = set()
    for a in atoms:
        atom_vars(a, out)
    return out


# -- rule instantiation ---------------------------------------------------------

class _RuleInstantiator:
    def __init__(self, rule, domain, exts, mode, loc):
        self.rule = rule
        self.domain = domain
        self.exts = exts
        self.keep = mode == "keep"
        self.loc = loc
        globals_ = _rule_globals(rule)
        join_atoms = []
        checks = []
        shape = []  # assembly recipe in source body order

        def ext_of(key):
            return exts.get(key, _EMPTY_EXT)

        for b in rule.body:
            if isinstance(b, Aggregate):
                expanders = [
                    _ElementExpander(e.literal, e.weight, globals_, exts, rule.loc)
                    for e in b.elements]
                shape.append(("agg", b, expanders))
            elif isinstance(b.atom, Comparison):
                needed = frozenset(term_vars(b.atom.lhs) | term_vars(b.atom.rhs))
                checks.append((needed, _ComparisonCheck(b.atom)))
            elif b.conditions:
                exp = _ElementExpander(b, None, globals_, exts, rule.loc)
                shape.append(("cond", exp))
            elif b.atom.key() in domain:
                if b.positive:
                    join_atoms.append(b.atom)
                    shape.append(("domkeep", b.atom))
                else:
                    needed = frozenset(atom_vars(b.atom))
                    checks.append((needed, _AbsentCheck(b.atom, ext_of(b.atom.key()))))
            else:
                shape.append(("lit", b))

        self.shape = shape
        self.plan = _Plan(join_atoms, checks, set(), ext_of, rule.loc)
        if isinstance(rule.head, Aggregate):
            agg = rule.head
            self.head_kind = "agg"
            self.head_data = (agg, [
                _ElementExpander(e.literal, e.weight, globals_, exts, rule.loc)
                for e in agg.elements])
        elif isinstance(rule.head, Atom):
            self.head_kind = "atom"
            self.head_data = rule.head
        else:
            self.head_kind = "none"
            self.head_data = None

    def _bound(self, term, binding):
        if term is None:
            return None
        v = eval_term(term, binding, self.loc)
        if not isinstance(v, int):
            raise GroundingError(self.loc, f"non-integer aggregate bound '{v}'")
        return v

    def _domain_truth(self, key, row):
        return row in self.exts.get(key, _EMPTY_EXT)

    def _build_agg(self, agg, expanders, binding, in_head):
        lower = self._bound(agg.lower, binding)
        upper = self._bound(agg.upper, binding)
        elements = []   # (positive, name, weight) staged
        index = {}      # (positive, name) -> element position, for merging
        for exp in expanders:
            for row, w, pred in exp.instances(binding):
                key = (pred, len(row))
                if not in_head and key in self.domain:
                    truth = self._domain_truth(key, row)
                    if exp.positive:
                        if truth and self.keep:
                            pass  # fall through and keep the atom
                        elif truth:
                            lower = None if lower is None else lower - w
                            upper = None if upper is None else upper - w
                            continue
                        else:
                            continue  # can never contribute
                    else:
                        # negative domain literals are always evaluated away
                        if truth:
                            continue
                        lower = None if lower is None else lower - w
                        upper = None if upper is None else upper - w
                        continue
                name = format_atom(pred, row)
                mkey = (exp.positive, name)
                if mkey in index:
                    if agg.weighted:
                        pos = index[mkey]
                        old = elements[pos]
                        elements[pos] = (old[0], old[1], old[2] + w)
                    continue
                index[mkey] = len(elements)
                elements.append((exp.positive, name, w))
        return lower, upper, elements

    def _assemble(self, binding):
        """Returns (head_stage, body_stage) or None if the instance dies."""
        body = []
        signs = {}

        def push(positive, name):
            prev = signs.get(name)
            if prev is None:
                signs[name] = positive
                body.append((positive, name))
                return True
            return prev == positive  # p and not p in one body: never fires

        for entry in self.shape:
            kind = entry[0]
            if kind == "domkeep":
                if self.keep:
                    atom = entry[1]
                    row = tuple(eval_term(t, binding, atom.loc) for t in atom.args)
                    if not push(True, format_atom(atom.pred, row)):
                        return None
            elif kind == "lit":
                lit = entry[1]
                row = tuple(eval_term(t, binding, lit.atom.loc) for t in lit.atom.args)
                if not push(lit.positive, format_atom(lit.atom.pred, row)):
                    return None
            elif kind == "cond":
                exp = entry[1]
                key = exp.atom.key()
                for row, _, pred in exp.instances(binding):
                    if key in self.domain:
                        truth = self._domain_truth(key, row)
                        if truth != exp.positive:
                            return None
                        if exp.positive and self.keep:
                            if not push(True, format_atom(pred, row)):
                                return None
                    elif not push(exp.positive, format_atom(pred, row)):
                        return None
            else:  # agg
                agg, expanders = entry[1], entry[2]
                lower, upper, elements = self._build_agg(agg, expanders, binding, False)
                if not elements:
                    total = 0
                    sat = ((lower is None or lower <= 0)
                           and (upper is None or upper >= total))
                    if sat:
                        continue
                    return None
                body.append(("agg", agg.weighted, lower, upper, tuple(elements)))

        if self.head_kind == "atom":
            atom = self.head_data
            row = tuple(eval_term(t, binding, atom.loc) for t in atom.args)
            head = ("atom", format_atom(atom.pred, row))
        elif self.head_kind == "agg":
            agg, expanders = self.head_data
            lower, upper, elements = self._build_agg(agg, expanders, binding, True)
            head = ("agg", agg.weighted, lower, upper, tuple(elements))
        else:
            head = None
        return head, body

    def instances(self):
        for binding in self.plan.run({}):
            staged = self._assemble(binding)
            if staged is not None:
                yield staged


def _intern_staged(head, body, table):
    def agg_of(stage):
        _, weighted, lower, upper, elements = stage
        elems = tuple((table.intern(name) if pos else -table.intern(name), w)
                      for pos, name, w in elements)
        return GAgg(weighted, lower, upper, elems)

    head_id = None
    head_agg = None
    if head is not None:
        if head[0] == "atom":
            head_id = table.intern(head[1])
        else:
            head_agg = agg_of(head)
    out = []
    for entry in body:
        if entry[0] == "agg":
            out.append(agg_of(entry))
        else:
            pos, name = entry
            i = table.intern(name)
            out.append(i if pos else -i)
    return GRule(head_id, head_agg, tuple(out))


@dataclass
class GroundResult:
    rules: list
    table: SymbolTable
    compute_true: tuple
    compute_false: tuple
    exts: dict
    warnings: list


def _first_definition_order(program, domain):
    order = []
    seen = set()
    for rule in program.rules:
        if isinstance(rule.head, Atom):
            key = rule.head.key()
            if key in domain and key not in seen:
                seen.add(key)
                order.append(key)
    return order


def ground_program(program, analysis, domain_mode="keep"):
    """Instantiate a desugared, constant-substituted program."""
    if domain_mode not in ("keep", "none"):
        raise ValueError(f"unknown domain mode {domain_mode!r}")
    domain = analysis.domain
    exts = evaluate_domain_predicates(program, analysis)
    table = SymbolTable()
    rules = []
    warnings = []

    if domain_mode == "keep":
        for key in _first_definition_order(program, domain):
            pred = key[0]
            for row in exts.get(key, _EMPTY_EXT):
                rules.append(GRule(table.intern(format_atom(pred, row)), None, ()))

    for rule in program.rules:
        if isinstance(rule.head, Atom) and rule.head.key() in domain:
            continue  # fully evaluated above
        inst = _RuleInstantiator(rule, domain, exts, domain_mode, rule.loc)
        for head, body in inst.instances():
            rules.append(_intern_staged(head, body, table))

    compute_true = []
    compute_false = []
    for lit in program.compute or ():
        atom = lit.atom
        row = tuple(eval_term(t, {}, atom.loc) for t in atom.args)
        name = format_atom(atom.pred, row)
        key = atom.key()
        if domain_mode == "none" and key in domain:
            truth = row in exts.get(key, _EMPTY_EXT)
            if truth != lit.positive:
                rules.append(GRule(FALSITY, None, ()))  # no model can satisfy this
            continue
        i = table.lookup(name)
        if i is None:
            if not lit.positive:
                continue  # underivable atom required false: trivially met
            i = table.intern(name)
        target = compute_true if lit.positive else compute_false
        if i not in target:
            target.append(i)
    return GroundResult(rules, table, tuple(compute_true), tuple(compute_false),
                        exts, warnings)


# -- source-syntax printing of ground rules ----------------------------------------

def _glit_source(lit, table):
    i = abs(lit)
    name = table.name(i) or f"_aux_{i}"
    return name if lit > 0 else f"not {name}"


def _gagg_source(agg, table):
    if agg.weighted:
        inner = ", ".join(f"{_glit_source(l, table)}={w}" for l, w in agg.elements)
        body = f"[ {inner} ]" if inner else "[]"
    else:
        inner = ", ".join(_glit_source(l, table) for l, _ in agg.elements)
        body = f"{{ {inner} }}" if inner else "{}"
    parts = []
    if agg.lower is not None:
        parts.append(str(agg.lower))
    parts.append(body)
    if agg.upper is not None:
        parts.append(str(agg.upper))
    return " ".join(parts)


def grule_source(rule, table):
    if rule.head == FALSITY:
        head = ""
    elif rule.head is not None:
        head = table.name(rule.head) or f"_aux_{rule.head}"
    elif rule.head_agg is not None:
        head = _gagg_source(rule.head_agg, table)
    else:
        head = ""
    body = ", ".join(
        _gagg_source(b, table) if isinstance(b, GAgg) else _glit_source(b, table)
        for b in rule.body)
    if not body:
        return f"{head}." if head else ":- ."
    if not head:
        return f":- {body}."
    return f"{head} :- {body}."


def ground_text(result):
    lines = [grule_source(r, result.table) for r in result.rules]
    if result.compute_true or result.compute_false:
        lits = [result.table.name(i) for i in result.compute_true]
        lits += [f"not {result.table.name(i)}" for i in result.compute_false]
        lines.append(f"compute {{ {', '.join(lits)} }}.")
    return "\n".join(lines) + ("\n" if lines else "")
