"""Bounded model search for normal-form sentences.

Canonical enumeration order: ``<=0`` fixed to the natural ranking (or all
rankings when symmetry breaking is off), then ``<=1`` rankings in
lexicographic order (an order absent from the sentence stays natural), then predicate bits in lexicographic order with
``False`` before ``True``.  Bits are laid out element-major: all atoms whose
largest element is 0, then those whose largest element is 1, and so on;
inside a block, atoms of the input signature come before the auxiliary
predicates added by normalization, binary before unary, then by name and
arguments.  This layout lets a forall-forall clause be decided as soon as
both of its elements are filled in.

The search is a depth-first walk over that bit order.  The forall-forall
part is ground to clauses that are checked and unit-propagated after every
assignment; each forall-exists obligation is ground to a disjunction of
cubes, rejected once every cube contains a false literal and propagated
when a single cube is left.  Pruning
only removes subtrees without models, so the first model found is the
first one in canonical order.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .checker import evaluate
from .formula import And, Eq, Formula, Iff, Implies, Leq, Not, Or, Pred, signature_of
from .normal_form import NormalForm, size_bound
from .structures import Structure, validate

log = logging.getLogger(__name__)


class InternalInvariantError(RuntimeError):
    """A result that the construction guarantees turned out wrong."""


# ------------------------------------------------- symbolic clause compilation
# A symbolic literal is (atom, polarity) with atom one of
#   ("pred", name, args) | ("eq", u, v) | ("ord", key, u, v)


def _atom_key(f):
    if isinstance(f, Pred):
        return ("pred", f.name, f.args)
    if isinstance(f, Eq):
        return ("eq", f.left, f.right)
    return ("ord", f.order, f.left, f.right)


def _product(a, b):
    out = set()
    for c in a:
        for d in b:
            merged = c | d
            if not any((atom, not pol) in merged for atom, pol in merged):
                out.add(merged)
    return out


def to_cnf(f: Formula, positive: bool = True) -> set[frozenset]:
    """Clauses (sets of literals) equivalent to ``f`` (or to ``!f``)."""
    if isinstance(f, (Pred, Eq, Leq)):
        return {frozenset([(_atom_key(f), positive)])}
    if isinstance(f, Not):
        return to_cnf(f.arg, not positive)
    if isinstance(f, Iff):
        a, b = f.left, f.right
        f = And(Or(Not(a), b), Or(a, Not(b)))
    if isinstance(f, Implies):
        f = Or(Not(f.left), f.right)
    conjunctive = isinstance(f, And) == positive
    left, right = to_cnf(f.left, positive), to_cnf(f.right, positive)
    return left | right if conjunctive else _product(left, right)


def to_dnf(f: Formula) -> set[frozenset]:
    """Cubes (sets of literals) whose disjunction is equivalent to ``f``."""
    # DNF of f is the negated CNF of !f
    return {frozenset((atom, not pol) for atom, pol in clause) for clause in to_cnf(f, positive=False)}


# ------------------------------------------------------------------ grounding


def atom_layout(nf: NormalForm, n: int) -> list[tuple[str, tuple[int, ...]]]:
    """Ground predicate atoms in canonical bit order."""
    sig = nf.signature
    out = []
    for k in range(n):
        pairs = [(a, k) for a in range(k)] + [(k, b) for b in range(k + 1)]  # max element k, sorted
        block = [(p, (k,)) for p in sig.unary] + [(r, pq) for r in sig.binary for pq in pairs]
        block.sort(key=lambda atom: (atom[0] in nf.auxiliary, len(atom[1]) == 1, atom))
        out += block
    return out


class _Grounder:
    def __init__(self, nf: NormalForm, n: int):
        self.nf = nf
        self.n = n
        self.layout = atom_layout(nf, n)
        self.index = {atom: i + 1 for i, atom in enumerate(self.layout)}
        self.chi_clauses = [c for i in (0, 1) for c in to_cnf(nf.chi[i])]
        self.gamma_cubes = [to_dnf(g) for i in (0, 1) for g in nf.gammas[i]]

    def literal(self, lit, env, ranks):
        """Ground literal as +-index, or True/False for a decided one."""
        atom, pol = lit
        if atom[0] == "pred":
            return self.index[(atom[1], tuple(env[v] for v in atom[2]))] * (1 if pol else -1)
        if atom[0] == "eq":
            return (env[atom[1]] == env[atom[2]]) == pol
        rank = ranks[atom[1]]
        return (rank[env[atom[2]]] <= rank[env[atom[3]]]) == pol

    def ground(self, ranks):
        """Ground clauses and witness constraints, or None if trivially unsat."""
        clauses = set()
        for a in range(self.n):
            for b in range(self.n):
                env = {"x": a, "y": b}
                for clause in self.chi_clauses:
                    lits = []
                    for lit in clause:
                        g = self.literal(lit, env, ranks)
                        if g is True:
                            break
                        if g is not False:
                            lits.append(g)
                    else:
                        if not lits:
                            return None
                        clauses.add(tuple(sorted(set(lits), key=abs)))
        witnesses = []
        for cubes in self.gamma_cubes:
            for a in range(self.n):
                alive = set()
                trivially = False
                for b in range(self.n):
                    env = {"x": a, "y": b}
                    for cube in cubes:
                        lits = []
                        for lit in cube:
                            g = self.literal(lit, env, ranks)
                            if g is False:
                                break
                            if g is not True:
                                lits.append(g)
                        else:
                            if not lits:
                                trivially = True
                                break
                            alive.add(tuple(sorted(set(lits), key=abs)))
                    if trivially:
                        break
                if trivially:
                    continue
                if not alive:
                    return None
                witnesses.append(sorted(alive))
        return sorted(clauses), witnesses

    def decode(self, values, ranks) -> Structure:
        sig = self.nf.signature
        unary = {p: set() for p in sig.unary}
        binary = {r: set() for r in sig.binary}
        for i, (name, args) in enumerate(self.layout):
            if values[i + 1] > 0:
                if len(args) == 1:
                    unary[name].add(args[0])
                else:
                    binary[name].add(args)
        return Structure(self.n, unary, binary, ranks)


# --------------------------------------------------------------------- search


def _dfs(nvars: int, clauses, witnesses):
    """First satisfying assignment in False-first order, or None."""
    val = [0] * (nvars + 1)
    clause_occ = [[] for _ in range(nvars + 1)]
    wit_occ = [[] for _ in range(nvars + 1)]
    for ci, c in enumerate(clauses):
        for lit in c:
            clause_occ[abs(lit)].append(ci)
    for wi, cubes in enumerate(witnesses):
        for v in {abs(lit) for cube in cubes for lit in cube}:
            wit_occ[v].append(wi)

    def lit_val(lit):
        v = val[abs(lit)]
        return v if lit > 0 else -v

    trail: list[int] = []

    def assign(lit) -> bool:
        """Set ``lit`` true and propagate; False on conflict."""
        queue = [lit]
        while queue:
            lit = queue.pop()
            v = abs(lit)
            if val[v]:
                if lit_val(lit) < 0:
                    return False
                continue
            val[v] = 1 if lit > 0 else -1
            trail.append(v)
            for ci in clause_occ[v]:
                unassigned = None
                count = 0
                for l2 in clauses[ci]:
                    lv = lit_val(l2)
                    if lv > 0:
                        break
                    if lv == 0:
                        count += 1
                        unassigned = l2
                else:
                    if count == 0:
                        return False
                    if count == 1:
                        queue.append(unassigned)
            for wi in wit_occ[v]:
                alive = [cube for cube in witnesses[wi] if not any(lit_val(l2) < 0 for l2 in cube)]
                if not alive:
                    return False
                if len(alive) == 1:
                    queue.extend(l2 for l2 in alive[0] if lit_val(l2) == 0)
        return True

    def undo(mark):
        while len(trail) > mark:
            val[trail.pop()] = 0

    # unit clauses first
    for c in clauses:
        if len(c) == 1 and not assign(c[0]):
            return None
    if any(all(any(lit_val(l) < 0 for l in cube) for cube in cubes) for cubes in witnesses):
        return None

    def rec(v) -> bool:
        while v <= nvars and val[v]:
            v += 1
        if v > nvars:
            return True
        for lit in (-v, v):
            mark = len(trail)
            if assign(lit) and rec(v + 1):
                return True
            undo(mark)
        return False

    return val if rec(1) else None


def _used_orders(nf: NormalForm) -> set[str]:
    parts = [*nf.chi, *nf.gammas[0], *nf.gammas[1]]
    return {o for g in parts for o in signature_of(g).orders}


def _rankings(n: int, break_symmetry: bool, used=("leq0", "leq1")):
    """Ranking pairs in canonical order.  An order the sentence never
    mentions stays natural: any model survives that change."""
    natural = [tuple(range(n))]

    def perms():
        return itertools.permutations(range(n))

    firsts = natural if break_symmetry or "leq0" not in used else perms()
    for r0 in firsts:
        for r1 in perms() if "leq1" in used else natural:
            yield r0, r1


def _search_chunk(nf: NormalForm, n: int, pairs, offset: int):
    g = _Grounder(nf, n)
    failed = set()  # ground problems already shown to have no model
    for k, (r0, r1) in enumerate(pairs):
        ranks = {"leq0": r0, "leq1": r1}
        grounded = g.ground(ranks)
        if grounded is None:
            continue
        key = (tuple(grounded[0]), tuple(tuple(w) for w in grounded[1]))
        if key in failed:
            continue
        values = _dfs(len(g.layout), *grounded)
        if values is None:
            failed.add(key)
        else:
            return offset + k, g.decode(values, ranks)
    return None


def find_model(nf: NormalForm, n: int, *, break_symmetry: bool = True, jobs: int = 1) -> Structure | None:
    """First model of ``nf`` of size exactly ``n`` in canonical order, else None.

    With ``jobs > 1`` the ranking pairs are split across worker processes;
    the answer is the same as the sequential one.
    """
    if n < 1:
        raise ValueError("universe size must be at least 1")
    pairs = _rankings(n, break_symmetry, _used_orders(nf))
    if jobs <= 1:
        found = _search_chunk(nf, n, pairs, 0)
    else:
        pairs = list(pairs)
        step = -(-len(pairs) // jobs)
        chunks = [(pairs[i : i + step], i) for i in range(0, len(pairs), step)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_search_chunk, *zip(*[(nf, n, c, off) for c, off in chunks])))
        hits = [r for r in results if r is not None]
        found = min(hits, key=lambda r: r[0]) if hits else None
    if found is None:
        return None
    model = found[1]
    validate(model, nf.signature)
    if not evaluate(model, nf.sentence()):
        raise InternalInvariantError(f"search returned a non-model of size {n}")
    return model


@dataclass(frozen=True)
class SearchResult:
    model: Structure | None
    cap: int
    bound: int

    @property
    def found(self) -> bool:
        return self.model is not None

    @property
    def complete(self) -> bool:
        """True when the cap reaches the small-model bound, making "no model" final."""
        return self.cap >= self.bound


def find_model_up_to(nf: NormalForm, cap: int, *, jobs: int = 1) -> SearchResult:
    if cap < 1:
        raise ValueError("cap must be at least 1")
    bound = size_bound(nf)
    for n in range(1, cap + 1):
        log.debug("searching size %d", n)
        model = find_model(nf, n, jobs=jobs)
        if model is not None:
            return SearchResult(model, cap, bound)
    return SearchResult(None, cap, bound)
