"""Backtracking stable-model search over primitive rules.

Propagation combines two closures run to a joint fixpoint:

  * forward/backward inference on rule counters (body satisfied => head
    true; head false => literals that would satisfy the body are refuted;
    an atom whose last possible supporting rule remains must be derived by
    it, so that rule's body literals get forced);
  * unfounded-set falsification: atoms outside the maximal optimistically
    derivable set are false. Recomputation is incremental per strongly
    connected component of the positive dependency graph, with a full
    recompute available behind a flag for cross-checking.

Branching uses lookahead with failed-literal forcing: every candidate is
probed both ways, a probe that conflicts forces the opposite value, and
otherwise the candidate fixing the most atoms (ties to the lowest id) is
chosen, positive branch first. Enumeration is chronological backtracking
with a decision flip, which visits each model exactly once.
"""

import random
from dataclasses import dataclass

from .primitives import (
    BasicRule,
    ChoiceRule,
    ConstraintRule,
    WeightRule,
    normalize_weight_elements,
)

FALSITY = 1
UNKNOWN, TRUE, FALSE = 0, 1, 2


class UnsupportedRuleTypeError(Exception):
    pass


@dataclass(frozen=True)
class Conflict:
    atom: int


@dataclass(frozen=True)
class ComputeSpec:
    """Search control: atoms forced true or false, and a model cap (0 = all)."""

    required_true: frozenset = frozenset()
    required_false: frozenset = frozenset()
    model_count: int = 0

    def __post_init__(self):
        object.__setattr__(self, "required_true", frozenset(self.required_true))
        object.__setattr__(self, "required_false", frozenset(self.required_false))
        if self.required_true & self.required_false:
            raise ValueError("an atom is required both true and false")
        if self.model_count < 0:
            raise ValueError("model count must be nonnegative")


@dataclass
class SolveStats:
    decisions: int = 0
    conflicts: int = 0
    propagations: int = 0


class _ConflictSignal(Exception):
    def __init__(self, atom):
        self.atom = atom
        super().__init__(f"conflict on atom {atom}")


class _Rule:
    __slots__ = ("heads", "pos", "neg", "pw", "nw", "bound", "choice",
                 "wsat", "wmax", "active")

    def __init__(self, heads, pos, neg, pw, nw, bound, choice):
        self.heads = heads
        self.pos = pos
        self.neg = neg
        self.pw = pw  # None means unit weights
        self.nw = nw
        self.bound = bound
        self.choice = choice
        total = (len(pos) + len(neg)) if pw is None else (sum(pw) + sum(nw))
        self.wsat = 0
        self.wmax = total
        self.active = total >= bound

    def pos_items(self):
        return zip(self.pos, self.pw) if self.pw is not None else ((a, 1) for a in self.pos)

    def neg_items(self):
        return zip(self.neg, self.nw) if self.nw is not None else ((a, 1) for a in self.neg)


def _nontrivial_sccs(n, adj):
    """Strongly connected components of size > 1 (or with a self-loop)
    among atoms 2..n, sorted. `adj[a]` lists the atoms a depends on."""
    index = [0] * (n + 1)   # 0 = unvisited
    low = [0] * (n + 1)
    on_stack = [False] * (n + 1)
    stack = []
    counter = 0
    sccs = []
    for root in range(2, n + 1):
        if index[root]:
            continue
        counter += 1
        index[root] = low[root] = counter
        stack.append(root)
        on_stack[root] = True
        work = [(root, 0)]
        while work:
            node, i = work[-1]
            if i < len(adj[node]):
                work[-1] = (node, i + 1)
                dep = adj[node][i]
                if dep < 2:
                    continue
                if not index[dep]:
                    counter += 1
                    index[dep] = low[dep] = counter
                    stack.append(dep)
                    on_stack[dep] = True
                    work.append((dep, 0))
                elif on_stack[dep]:
                    if index[dep] < low[node]:
                        low[node] = index[dep]
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[node] < low[parent]:
                    low[parent] = low[node]
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == node:
                        break
                if len(comp) > 1 or node in adj[node]:
                    sccs.append(sorted(comp))
    return sorted(sccs)


def _unify(rule):
    """Internal form: (heads, pos, neg, pw, nw, bound, choice)."""
    if isinstance(rule, BasicRule):
        return _Rule((rule.head,), rule.pos, rule.neg, None, None,
                     len(rule.pos) + len(rule.neg), False)
    if isinstance(rule, ConstraintRule):
        return _Rule((rule.head,), rule.pos, rule.neg, None, None, rule.bound, False)
    if isinstance(rule, ChoiceRule):
        return _Rule(rule.heads, rule.pos, rule.neg, None, None,
                     len(rule.pos) + len(rule.neg), True)
    if isinstance(rule, WeightRule):
        pos, neg = rule.pos, rule.neg
        pw, nw = rule.pos_weights, rule.neg_weights
        bound = rule.bound
        if any(w < 0 for w in pw) or any(w < 0 for w in nw):
            elems = [(a, w) for a, w in zip(pos, pw)]
            elems += [(-a, w) for a, w in zip(neg, nw)]
            elems, bound = normalize_weight_elements(elems, bound)
            pos = tuple(l for l, _ in elems if l > 0)
            pw = tuple(w for l, w in elems if l > 0)
            neg = tuple(-l for l, _ in elems if l < 0)
            nw = tuple(w for l, w in elems if l < 0)
        return _Rule((rule.head,), pos, neg, pw, nw, bound, False)
    raise UnsupportedRuleTypeError(f"unsupported rule {rule!r}")


class Solver:
    """Enumerates the stable models of a ground primitive program."""

    def __init__(self, gp, lookahead_limit=32, seed=None, full_atmost=False):
        self.stats = SolveStats()
        self.lookahead_limit = max(1, lookahead_limit)
        self._rng = random.Random(seed) if seed is not None else None
        self.full_atmost = full_atmost

        n = max(gp.atom_count(), FALSITY)
        self.n_atoms = n
        self.values = [UNKNOWN] * (n + 1)
        self.trail = []
        self.qhead = 0
        self._pending = []
        self._started = False

        self.rules = [_unify(r) for r in gp.rules]
        self.occ_pos = [[] for _ in range(n + 1)]
        self.occ_neg = [[] for _ in range(n + 1)]
        self.defs = [[] for _ in range(n + 1)]
        self.supports = [0] * (n + 1)
        for r in self.rules:
            for a, w in r.pos_items():
                self.occ_pos[a].append((r, w))
            for a, w in r.neg_items():
                self.occ_neg[a].append((r, w))
            for h in r.heads:
                self.defs[h].append(r)
                if r.active:
                    self.supports[h] += 1

        self.compute_true = gp.compute_true
        self.compute_false = gp.compute_false
        self._setup_sccs()
        self._setup_branch_order()

    # -- static structure -------------------------------------------------------

    def _setup_sccs(self):
        """Nontrivial SCCs of the positive dependency graph, for ATMOST."""
        n = self.n_atoms
        adj = [()] * (n + 1)
        tmp = {}
        for r in self.rules:
            if not r.pos:
                continue
            for h in r.heads:
                tmp.setdefault(h, set()).update(r.pos)
        for h, deps in tmp.items():
            adj[h] = tuple(sorted(deps))
        sccs = _nontrivial_sccs(n, adj)

        self.scc_of = [-1] * (n + 1)
        self.scc_atoms = []
        self.scc_rules = []
        for ci, comp in enumerate(sccs):
            self.scc_atoms.append(comp)
            self.scc_rules.append([])
            for a in comp:
                self.scc_of[a] = ci
        seen = [set() for _ in self.scc_atoms]
        for r in self.rules:
            for h in r.heads:
                ci = self.scc_of[h]
                if ci >= 0 and id(r) not in seen[ci]:
                    seen[ci].add(id(r))
                    self.scc_rules[ci].append(r)

        self.dirty_on_false = [()] * (n + 1)
        self.dirty_on_true = [()] * (n + 1)
        df = [set() for _ in range(n + 1)]
        dt = [set() for _ in range(n + 1)]
        for r in self.rules:
            cis = {self.scc_of[h] for h in r.heads if self.scc_of[h] >= 0}
            if not cis:
                continue
            for a in r.pos:
                df[a].update(cis)
            for a in r.neg:
                dt[a].update(cis)
        for a in range(n + 1):
            if df[a]:
                self.dirty_on_false[a] = tuple(sorted(df[a]))
            if dt[a]:
                self.dirty_on_true[a] = tuple(sorted(dt[a]))
        self._dirty = set(range(len(self.scc_atoms)))

    def _setup_branch_order(self):
        """Branch on choice/constraint heads and on negative literals that
        sit on a dependency cycle; everything else follows by propagation."""
        n = self.n_atoms
        adj = [()] * (n + 1)
        tmp = {}
        negs = set()
        cands = set()
        for r in self.rules:
            if r.choice or r.bound != len(r.pos) + len(r.neg) or r.pw is not None:
                cands.update(h for h in r.heads if h != FALSITY)
            negs.update(r.neg)
            for h in r.heads:
                tmp.setdefault(h, set()).update(r.pos)
                tmp.setdefault(h, set()).update(r.neg)
        for h, deps in tmp.items():
            adj[h] = tuple(sorted(deps))
        cyclic = set()
        for comp in _nontrivial_sccs(n, adj):
            cyclic.update(comp)
        cands.update(negs & cyclic)
        cands.discard(FALSITY)
        self.branch_order = sorted(cands)

    # -- assignment primitives ----------------------------------------------------

    def _set(self, atom, value):
        cur = self.values[atom]
        if cur == value:
            return
        if cur != UNKNOWN:
            raise _ConflictSignal(atom)
        self.values[atom] = value
        self.trail.append(atom)

    def _undo_to(self, mark):
        values = self.values
        trail = self.trail
        for i in range(len(trail) - 1, mark - 1, -1):
            a = trail[i]
            if i < self.qhead:
                if values[a] == TRUE:
                    for r, w in self.occ_pos[a]:
                        r.wsat -= w
                    for r, w in self.occ_neg[a]:
                        self._unshrink(r, w)
                else:
                    for r, w in self.occ_pos[a]:
                        self._unshrink(r, w)
                    for r, w in self.occ_neg[a]:
                        r.wsat -= w
            values[a] = UNKNOWN
        del trail[mark:]
        if self.qhead > mark:
            self.qhead = mark

    def _unshrink(self, r, w):
        r.wmax += w
        if not r.active and r.wmax >= r.bound:
            r.active = True
            for h in r.heads:
                self.supports[h] += 1

    # -- ATLEAST propagation -----------------------------------------------------

    def _body_sat(self, r, w, pend):
        r.wsat += w
        if r.wsat >= r.bound and not r.choice:
            pend.append((r.heads[0], TRUE))
        elif not r.choice and self.values[r.heads[0]] == FALSE:
            self._contrapose(r, pend)

    def _body_shrink(self, r, w, pend):
        r.wmax -= w
        if r.active and r.wmax < r.bound:
            r.active = False
            for h in r.heads:
                self.supports[h] -= 1
                if self.supports[h] == 0:
                    pend.append((h, FALSE))
                elif self.supports[h] == 1 and self.values[h] == TRUE:
                    self._backchain_atom(h, pend)
        elif r.active and not r.choice and self.values[r.heads[0]] == TRUE:
            if self.supports[r.heads[0]] == 1:
                self._backchain_atom(r.heads[0], pend)

    def _contrapose(self, r, pend):
        """Head is false: refute any literal that alone satisfies the body."""
        if r.wsat >= r.bound:
            # body already satisfied; the flush below reports the conflict
            pend.append((r.heads[0], TRUE))
            return
        if not r.active:
            return
        gap = r.bound - r.wsat
        for a, w in r.pos_items():
            if self.values[a] == UNKNOWN and w >= gap:
                pend.append((a, FALSE))
        for a, w in r.neg_items():
            if self.values[a] == UNKNOWN and w >= gap:
                pend.append((a, TRUE))

    def _backchain_atom(self, h, pend):
        """h is true with one potential supporter left: its body must fire."""
        last = None
        for r in self.defs[h]:
            if r.active:
                if last is not None:
                    return  # supports[] counts rule occurrences, recheck
                last = r
        if last is None:
            pend.append((h, FALSE))
            return
        r = last
        slack = r.wmax - r.bound
        for a, w in r.pos_items():
            if self.values[a] == UNKNOWN and w > slack:
                pend.append((a, TRUE))
        for a, w in r.neg_items():
            if self.values[a] == UNKNOWN and w > slack:
                pend.append((a, FALSE))

    def _propagate(self):
        while self.qhead < len(self.trail):
            a = self.trail[self.qhead]
            self.qhead += 1
            self.stats.propagations += 1
            v = self.values[a]
            pend = []
            if v == TRUE:
                for r, w in self.occ_pos[a]:
                    self._body_sat(r, w, pend)
                for r, w in self.occ_neg[a]:
                    self._body_shrink(r, w, pend)
                if self.supports[a] == 0:
                    pend.append((a, FALSE))
                elif self.supports[a] == 1:
                    self._backchain_atom(a, pend)
                self._dirty.update(self.dirty_on_true[a])
            else:
                for r, w in self.occ_pos[a]:
                    self._body_shrink(r, w, pend)
                for r, w in self.occ_neg[a]:
                    self._body_sat(r, w, pend)
                for r in self.defs[a]:
                    if not r.choice:
                        self._contrapose(r, pend)
                self._dirty.update(self.dirty_on_false[a])
            for atom, value in pend:
                self._set(atom, value)

    # -- ATMOST (unfounded sets) ---------------------------------------------------

    def _atmost_scc(self, ci):
        values = self.values
        scc_of = self.scc_of
        derivable = set()
        queue = []
        avail = {}
        watch = {}
        for r in self.scc_rules[ci]:
            credit = 0
            for a, w in r.pos_items():
                if scc_of[a] == ci:
                    watch.setdefault(a, []).append((r, w))
                elif values[a] != FALSE:
                    credit += w
            for a, w in r.neg_items():
                if values[a] != TRUE:
                    credit += w
            avail[id(r)] = credit
            if credit >= r.bound:
                for h in r.heads:
                    if scc_of[h] == ci and values[h] != FALSE and h not in derivable:
                        derivable.add(h)
                        queue.append(h)
        qi = 0
        while qi < len(queue):
            a = queue[qi]
            qi += 1
            for r, w in watch.get(a, ()):
                before = avail[id(r)]
                avail[id(r)] = before + w
                if before < r.bound <= before + w:
                    for h in r.heads:
                        if scc_of[h] == ci and values[h] != FALSE and h not in derivable:
                            derivable.add(h)
                            queue.append(h)
        for a in self.scc_atoms[ci]:
            if values[a] != FALSE and a not in derivable:
                self._set(a, FALSE)

    def _atmost_full(self):
        """Global recompute of the optimistic derivable set (verification)."""
        values = self.values
        derivable = [False] * (self.n_atoms + 1)
        changed = True
        while changed:
            changed = False
            for r in self.rules:
                credit = 0
                for a, w in r.pos_items():
                    if derivable[a]:
                        credit += w
                for a, w in r.neg_items():
                    if values[a] != TRUE:
                        credit += w
                if credit >= r.bound:
                    for h in r.heads:
                        if not derivable[h] and values[h] != FALSE:
                            derivable[h] = True
                            changed = True
        for a in range(2, self.n_atoms + 1):
            if values[a] != FALSE and not derivable[a]:
                self._set(a, FALSE)

    # -- expand ---------------------------------------------------------------------

    def _start(self):
        self._started = True
        self._set(FALSITY, FALSE)
        for a in self.compute_true:
            self._set(a, TRUE)
        for a in self.compute_false:
            self._set(a, FALSE)
        for a in range(2, self.n_atoms + 1):
            if self.supports[a] == 0:
                self._set(a, FALSE)
        pend = []
        for r in self.rules:
            if r.wsat >= r.bound and not r.choice:
                pend.append((r.heads[0], TRUE))
        for atom, value in pend:
            self._set(atom, value)

    def expand(self):
        """Run propagation to fixpoint; None on success, else Conflict."""
        try:
            if not self._started:
                self._start()
            while True:
                self._propagate()
                if self.full_atmost:
                    mark = len(self.trail)
                    self._atmost_full()
                    self._dirty.clear()
                    if len(self.trail) == mark:
                        return None
                    continue
                if self._dirty:
                    ci = min(self._dirty)
                    self._dirty.discard(ci)
                    self._atmost_scc(ci)
                    continue
                return None
        except _ConflictSignal as c:
            self.stats.conflicts += 1
            return Conflict(c.atom)

    # -- lookahead and enumeration -----------------------------------------------

    def _probe(self, atom, value):
        mark = len(self.trail)
        self._set(atom, value)
        conflict = self.expand()
        fixed = len(self.trail) - mark
        self._undo_to(mark)
        return conflict, fixed

    def _choose(self):
        """Next branching atom, or None when assignment is total.

        Failed literals found while probing are forced immediately and the
        scan restarts on the new fixpoint.
        """
        values = self.values
        while True:
            cands = [a for a in self.branch_order if values[a] == UNKNOWN]
            if not cands:
                cands = [a for a in range(2, self.n_atoms + 1)
                         if values[a] == UNKNOWN]
                if not cands:
                    return None
            if self._rng is not None:
                self._rng.shuffle(cands)
            limit = self.lookahead_limit
            if len(cands) > limit:
                step = len(cands) / limit
                cands = [cands[int(i * step)] for i in range(limit)]
            best_atom = None
            best_score = -1
            forced = False
            for a in cands:
                conflict_t, fixed_t = self._probe(a, TRUE)
                conflict_f, fixed_f = self._probe(a, FALSE)
                if conflict_t and conflict_f:
                    return Conflict(a)
                if conflict_t or conflict_f:
                    self._set(a, FALSE if conflict_t else TRUE)
                    c = self.expand()
                    if c:
                        return c
                    forced = True
                    break
                score = fixed_t + fixed_f
                if score > best_score or (score == best_score and a < best_atom):
                    best_score = score
                    best_atom = a
            if not forced:
                return best_atom

    def _model(self):
        return tuple(a for a in range(2, self.n_atoms + 1)
                     if self.values[a] == TRUE)

    def models(self):
        """Yields stable models as sorted tuples of true atom ids."""
        if self.expand() is not None:
            return
        stack = []
        while True:
            chosen = self._choose()
            if isinstance(chosen, Conflict):
                if not self._backtrack(stack):
                    return
                continue
            if chosen is None:
                yield self._model()
                if not self._backtrack(stack):
                    return
                continue
            self.stats.decisions += 1
            stack.append([chosen, len(self.trail), False])
            self._set(chosen, TRUE)
            if self.expand() is not None:
                if not self._backtrack(stack):
                    return

    def _backtrack(self, stack):
        """Flip the deepest untried decision; False when tree is exhausted."""
        while stack:
            atom, mark, flipped = stack.pop()
            self._undo_to(mark)
            if flipped:
                continue
            stack.append([atom, mark, True])
            self.stats.decisions += 1
            self._set(atom, FALSE)
            if self.expand() is None:
                return True
            stack.pop()
            self._undo_to(mark)
        return False

    # -- state digest used by the property tests ------------------------------------

    def state_fingerprint(self):
        return (tuple(self.values),
                tuple((r.wsat, r.wmax, r.active) for r in self.rules),
                tuple(self.supports))


# -- well-founded model --------------------------------------------------------------

def _least_model_basic(rules, assumed_true):
    """Least model of the basic-rule reduct w.r.t. the given negation set."""
    derived = set()
    remaining = []
    for r in rules:
        if any(b in assumed_true for b in r.neg):
            continue
        remaining.append([r.head, set(r.pos)])
    changed = True
    while changed:
        changed = False
        rest = []
        for item in remaining:
            item[1] -= derived
            if item[1]:
                rest.append(item)
            elif item[0] not in derived:
                derived.add(item[0])
                changed = True
        remaining = rest
    return derived


def well_founded(rules, extra_atoms=()):
    """Alternating-fixpoint well-founded model of a basic-rule program.

    Returns (true_set, false_set, unknown_set) over the atoms mentioned in
    the rules (plus extra_atoms), excluding the reserved falsity atom.
    """
    for r in rules:
        if not isinstance(r, BasicRule):
            raise UnsupportedRuleTypeError(
                f"well-founded mode handles basic rules only, got {type(r).__name__}")
    universe = set(extra_atoms)
    for r in rules:
        universe.add(r.head)
        universe.update(r.pos)
        universe.update(r.neg)
    universe.discard(FALSITY)

    known_true = set()
    while True:
        upper = _least_model_basic(rules, known_true)
        next_true = _least_model_basic(rules, upper)
        if next_true == known_true:
            break
        known_true = next_true
    known_true.discard(FALSITY)
    upper.discard(FALSITY)
    false = frozenset(universe - upper)
    return frozenset(known_true), false, frozenset(universe - known_true - false)
