"""Propositional grounding of "a model of size n exists" and a small DPLL solver.

Variable numbering is deterministic and element-major: ground atoms are
grouped by their largest element, predicate atoms before order facts
inside a group, then by name and argument tuple; Tseitin auxiliaries
follow in creation order.  Since the solver branches on the lowest
variable first, this fills in the structure element by element, which
exposes conflicts early.  The DIMACS output is byte-stable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .formula import And, Eq, Formula, Iff, Implies, Leq, Not, Or, Pred
from .normal_form import NormalForm
from .structures import Structure

DEFAULT_VAR_BUDGET = 2_000_000

Atom = tuple[str, tuple[int, ...]]


class BudgetError(ValueError):
    pass


@dataclass
class CnfInstance:
    num_vars: int
    clauses: list[list[int]]
    decode: dict[int, Atom]
    n: int = 0
    unary: tuple[str, ...] = ()
    binary: tuple[str, ...] = ()
    orders: tuple[str, ...] = ()
    encode: dict[Atom, int] = field(init=False)

    def __post_init__(self):
        self.encode = {atom: v for v, atom in self.decode.items()}
        for c in self.clauses:
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} outside 1..{self.num_vars}")

    def to_dimacs(self) -> str:
        lines = [f"c map {v} {_atom_text(atom)}" for v, atom in sorted(self.decode.items())]
        lines.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        lines += [" ".join(map(str, c + [0])) for c in self.clauses]
        return "\n".join(lines) + "\n"

    def structure(self, assignment: dict[int, bool]) -> Structure:
        """Decode a satisfying assignment into a structure."""
        unary = {p: set() for p in self.unary}
        binary = {r: set() for r in self.binary}
        below = {o: [0] * self.n for o in self.orders}
        for v, (name, args) in self.decode.items():
            if not assignment.get(v, False):
                continue
            if name in below:
                # count elements a with a <= b; the rank of b is that count minus one
                below[name][args[1]] += 1
            elif name in unary:
                unary[name].add(args[0])
            else:
                binary[name].add(args)
        orders = {o: [c - 1 for c in counts] for o, counts in below.items()}
        return Structure(self.n, unary, binary, orders)


def _atom_text(atom: Atom) -> str:
    name, args = atom
    return f"{name}({','.join(map(str, args))})"


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    num_vars, clauses, current = 0, [], []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            num_vars = int(parts[2])
            continue
        for tok in parts:
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    return num_vars, clauses


class _Tseitin:
    def __init__(self, encode: dict[Atom, int], next_var: int, budget: int):
        self.encode = encode
        self.next_var = next_var
        self.budget = budget
        self.clauses: list[list[int]] = []

    def fresh(self) -> int:
        v = self.next_var
        if v > self.budget:
            raise BudgetError(f"grounding needs more than {self.budget} variables")
        self.next_var += 1
        return v

    def lit(self, f: Formula, env: dict[str, int]):
        """Literal for ground ``f``, or a Python bool when ``f`` is decided."""
        if isinstance(f, Pred):
            return self.encode[(f.name, tuple(env[v] for v in f.args))]
        if isinstance(f, Eq):
            return env[f.left] == env[f.right]
        if isinstance(f, Leq):
            return self.encode[(f.order, (env[f.left], env[f.right]))]
        if isinstance(f, Not):
            a = self.lit(f.arg, env)
            return (not a) if isinstance(a, bool) else -a
        if isinstance(f, Implies):
            return self.lit(Or(Not(f.left), f.right), env)
        a, b = self.lit(f.left, env), self.lit(f.right, env)
        if isinstance(f, Iff):
            if isinstance(a, bool) and isinstance(b, bool):
                return a == b
            if isinstance(a, bool):
                return b if a else -b
            if isinstance(b, bool):
                return a if b else -a
            t = self.fresh()
            self.clauses += [[-t, -a, b], [-t, a, -b], [t, a, b], [t, -a, -b]]
            return t
        absorbing = isinstance(f, Or)  # True absorbs a disjunction, False a conjunction
        parts = []
        for x in (a, b):
            if isinstance(x, bool):
                if x == absorbing:
                    return absorbing
            else:
                parts.append(x)
        if not parts:
            return not absorbing
        if len(parts) == 1:
            return parts[0]
        t = self.fresh()
        if isinstance(f, And):
            self.clauses += [[-t, p] for p in parts]
            self.clauses.append([t] + [-p for p in parts])
        else:
            self.clauses.append([-t] + parts)
            self.clauses += [[t, -p] for p in parts]
        return t


def ground_to_cnf(
    nf: NormalForm, n: int, *, budget: int = DEFAULT_VAR_BUDGET, break_symmetry: bool = True
) -> CnfInstance:
    if n < 1:
        raise ValueError("universe size must be at least 1")
    sig = nf.signature
    orders = tuple(sorted(sig.orders))
    pairs = list(itertools.product(range(n), repeat=2))
    atoms: list[Atom] = [(o, pq) for o in orders for pq in pairs]
    for name, arity in sig.preds:
        atoms += [(name, (a,)) for a in range(n)] if arity == 1 else [(name, pq) for pq in pairs]
    atoms.sort(key=lambda atom: (max(atom[1]), atom[0] in orders, atom))
    if len(atoms) > budget:
        raise BudgetError(f"{len(atoms)} ground atoms exceed the variable budget {budget}")
    decode = {i + 1: atom for i, atom in enumerate(atoms)}
    encode = {atom: v for v, atom in decode.items()}
    clauses: list[list[int]] = []

    # linear-order axioms
    for o in orders:
        def v(a, b, o=o):
            return encode[(o, (a, b))]

        for a in range(n):
            clauses.append([v(a, a)])
        for a, b in itertools.combinations(range(n), 2):
            clauses.append([-v(a, b), -v(b, a)])
            clauses.append([v(a, b), v(b, a)])
        for a, b, c in itertools.permutations(range(n), 3):
            clauses.append([-v(a, b), -v(b, c), v(a, c)])
    # symmetry breaking: <=0 is the natural order
    if break_symmetry and "leq0" in orders:
        for a, b in pairs:
            lit = encode[("leq0", (a, b))]
            clauses.append([lit if a <= b else -lit])

    ts = _Tseitin(encode, len(atoms) + 1, budget)
    for i in (0, 1):
        for a, b in pairs:
            root = ts.lit(nf.chi[i], {"x": a, "y": b})
            if root is False:
                ts.clauses.append([])
            elif root is not True:
                ts.clauses.append([root])
    for i in (0, 1):
        for g in nf.gammas[i]:
            for a in range(n):
                witness = []
                satisfied = False
                for b in range(n):
                    lit = ts.lit(g, {"x": a, "y": b})
                    if lit is True:
                        satisfied = True
                        break
                    if lit is not False:
                        witness.append(lit)
                if not satisfied:
                    ts.clauses.append(witness)
    clauses += ts.clauses
    return CnfInstance(
        ts.next_var - 1, clauses, decode, n, tuple(sig.unary), tuple(sig.binary), orders
    )


def solve_cnf(c: CnfInstance | tuple[int, list[list[int]]]) -> dict[int, bool] | None:
    """Plain DPLL with unit propagation (two watched literals), no learning.

    Branches on the lowest-numbered unassigned variable that occurs in a
    clause, trying True first.  Variables in no clause are False.
    Returns the full assignment, or None when unsatisfiable.
    """
    if isinstance(c, CnfInstance):
        num_vars, raw = c.num_vars, c.clauses
    else:
        num_vars, raw = c
    value = [0] * (num_vars + 1)
    clauses = []
    units = []
    for cl in raw:
        cl = list(dict.fromkeys(cl))
        if any(-lit in cl for lit in cl):
            continue
        if not cl:
            return None
        if len(cl) == 1:
            units.append(cl[0])
        else:
            clauses.append(cl)
    occurring = sorted({abs(lit) for cl in clauses for lit in cl} | {abs(lit) for lit in units})
    watches: dict[int, list[int]] = {}
    for ci, cl in enumerate(clauses):
        watches.setdefault(cl[0], []).append(ci)
        watches.setdefault(cl[1], []).append(ci)

    trail: list[int] = []

    def lit_value(lit):
        v = value[abs(lit)]
        return v if lit > 0 else -v

    def enqueue(lit) -> bool:
        lv = lit_value(lit)
        if lv:
            return lv > 0
        value[abs(lit)] = 1 if lit > 0 else -1
        trail.append(lit)
        return True

    def propagate(start: int) -> bool:
        i = start
        while i < len(trail):
            false_lit = -trail[i]
            i += 1
            watching = watches.get(false_lit, [])
            keep = []
            conflict = False
            for j, ci in enumerate(watching):
                if conflict:
                    keep.append(ci)
                    continue
                cl = clauses[ci]
                if cl[0] == false_lit:
                    cl[0], cl[1] = cl[1], cl[0]
                if lit_value(cl[0]) > 0:
                    keep.append(ci)
                    continue
                for k in range(2, len(cl)):
                    if lit_value(cl[k]) >= 0:
                        cl[1], cl[k] = cl[k], cl[1]
                        watches.setdefault(cl[1], []).append(ci)
                        break
                else:
                    keep.append(ci)
                    if not enqueue(cl[0]):
                        conflict = True
            watches[false_lit] = keep
            if conflict:
                return False
        return True

    for lit in units:
        if not enqueue(lit):
            return None
    if not propagate(0):
        return None

    # decisions: (trail length before decision, variable, flipped already)
    decisions: list[tuple[int, int, bool]] = []
    pos = 0
    while True:
        while pos < len(occurring) and value[occurring[pos]]:
            pos += 1
        if pos == len(occurring):
            break
        var = occurring[pos]
        mark = len(trail)
        decisions.append((mark, var, False))
        enqueue(var)
        ok = propagate(mark)
        while not ok:
            while decisions and decisions[-1][2]:
                decisions.pop()
            if not decisions:
                return None
            mark, var, _ = decisions.pop()
            while len(trail) > mark:
                value[abs(trail.pop())] = 0
            decisions.append((mark, var, True))
            enqueue(-var)
            ok = propagate(mark)
        pos = 0
    return {v: value[v] > 0 for v in range(1, num_vars + 1)}
