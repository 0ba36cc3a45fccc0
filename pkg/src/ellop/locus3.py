"""Third-order one-pole integrability loci.

For gaps (q, r) the middle-index obstruction splits into weighted-
homogeneous conditions on (c, e, g2, g3), one per power of the spectral
parameter.  This module generates them, solves them in triangular fashion
with explicit branching, classifies the branches, computes j-invariants,
reconstructs closed forms as rational functions of q, and sweeps grids
over generic and degenerate curves.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .rationals import ONE, Rat, ZERO, as_rat
from .poly import MultiPoly, RatFunc
from .monodromy import Condition, ConstraintSet, trivial_monodromy_constraints
from .operators import InvalidGapsError, third_order_from_gaps
from .interp import ReconstructionError, rational_interpolate

GENERIC_UNIVERSE = ("c", "e", "g2", "g3")
PRECEDENCE = ("g3", "g2", "c", "e", "w")


def constraints_for(q: int, r: int) -> ConstraintSet:
    """Integrability conditions for the gap-(q, r) one-pole family,
    ordered by spectral-parameter degree, descending."""
    if q < 1 or r < 1:
        raise InvalidGapsError("gaps must be positive")
    op = third_order_from_gaps(q, r).localize(r + 4)
    cs = trivial_monodromy_constraints(op, mode="middle-only")
    cs.conditions.sort(key=lambda c: -c.lambda_degree)
    cs.q, cs.r = q, r
    for c in cs.conditions:
        if not c.poly.is_weighted_homogeneous():
            raise ArithmeticError("condition not weighted-homogeneous")
        if c.poly.weighted_degree() != r - 3 * c.lambda_degree:
            raise ArithmeticError("condition weight inconsistent with gap r")
    return cs


def substitute_constraints(cs: ConstraintSet, mapping) -> ConstraintSet:
    """Apply a substitution (e.g. a degenerate-curve parametrization) to
    every condition, dropping those that become zero."""
    out = []
    for c in cs.conditions:
        p = c.poly.substitute(mapping)
        if isinstance(p, RatFunc):
            p = p.num
        if p.is_zero():
            continue
        out.append(Condition(p.primitive(), c.lambda_degree, c.provenance))
    return ConstraintSet(cs.n, out, q=cs.q, r=cs.r)


# -- branch solving ----------------------------------------------------------


@dataclass
class LocusBranch:
    q: int
    r: int
    assignments: dict            # var -> RatFunc, fully back-substituted
    relation: tuple | None       # ("c", RatFunc value of c^2) or None
    free: list
    nonzero: list                # variables assumed nonzero on this branch
    residuals: list              # unsolved leftover conditions
    classification: str
    witness: MultiPoly | None = None

    def curve(self):
        """(g2, g3) as RatFunc or None when unconstrained."""
        return self.assignments.get("g2"), self.assignments.get("g3")

    def j(self):
        g2, g3 = self.curve()
        if g2 is None or g3 is None:
            return "generic"
        if g2.is_zero() and g3.is_zero():
            return "cusp"
        return j_invariant(g2, g3)


def j_invariant(g2, g3):
    """j = 1728 g2^3 / (g2^3 - 27 g3^2); "infinite" at zero discriminant."""
    g2 = RatFunc.from_value(g2)
    g3 = RatFunc.from_value(g3)
    disc = g2**3 - g3**2 * 27
    if disc.is_zero():
        return "infinite"
    return g2**3 * 1728 / disc


def _num_primitive(v) -> MultiPoly:
    if isinstance(v, RatFunc):
        v = v.num
    return v.primitive()


def _reduce_relation_poly(p: MultiPoly, var: str, val: RatFunc) -> RatFunc:
    """Rewrite p modulo var^2 = val; result has var-degree <= 1."""
    out = RatFunc(0)
    x = RatFunc(MultiPoly.var(var))
    for pw, cf in p.coefficients_in(var).items():
        t = RatFunc(cf) * val ** (pw // 2)
        if pw % 2:
            t = t * x
        out = out + t
    return out


def _normalize(p: MultiPoly, assignments, relation) -> MultiPoly:
    # substitution is simultaneous; iterate until no assigned variable is left
    for _ in range(len(assignments) + 2):
        used = set(p.used_vars())
        sub = {v: x for v, x in assignments.items() if v in used}
        if not sub:
            break
        q = p.substitute(sub)
        p = q.num if isinstance(q, RatFunc) else q
    if relation is not None and relation[0] in p.used_vars():
        p = _reduce_relation_poly(p, relation[0], relation[1]).num
    if p.is_zero():
        return p
    return p.primitive()


def _monomial_vars(p: MultiPoly):
    """Variables with positive exponent, if p is a single monomial."""
    if len(p.terms) != 1:
        return None
    expo = next(iter(p.terms))
    return [v for v, k in zip(p.vars, expo) if k > 0]


def _single_var_monomial(p: MultiPoly):
    vs = _monomial_vars(p)
    if vs is not None and len(vs) == 1:
        return vs[0]
    return None


class _State:
    __slots__ = ("conds", "assignments", "relation", "nonzero", "residuals")

    def __init__(self, conds, assignments, relation, nonzero, residuals):
        self.conds = list(conds)
        self.assignments = dict(assignments)
        self.relation = relation
        self.nonzero = list(nonzero)
        self.residuals = list(residuals)

    def fork(self):
        return _State(
            self.conds, self.assignments, self.relation, self.nonzero, self.residuals
        )


def triangular_solve(cs: ConstraintSet, universe=GENERIC_UNIVERSE):
    """Solve the conditions by sequential elimination with branching.

    Rules, in order, applied to each condition after substituting what is
    already solved: pure monomials force a variable to zero (branching when
    several could vanish); conditions linear in the highest-weight unsolved
    variable are solved for it, branching on the vanishing of a monomial
    pivot coefficient; a pure quadratic in c is kept as a square relation.
    Anything else is left as an unsolved residual.  Every surviving branch
    is verified by exact back-substitution.
    """
    if cs.unsatisfiable:
        return []
    original = [c.poly for c in cs.conditions]
    state = _State(original, {}, None, [], [])
    branches = []
    _run(state, branches)
    q = cs.q if cs.q is not None else 0
    r = cs.r if cs.r is not None else 0
    return [_finalize(st, witness, original, universe, q, r) for st, witness in branches]


def _run(state: _State, sink: list):
    while state.conds:
        p = _normalize(state.conds.pop(0), state.assignments, state.relation)
        if p.is_zero():
            continue
        if p.is_constant():
            sink.append((state, p))
            return
        mono = _monomial_vars(p)
        if mono is not None:
            cands = [v for v in mono if v not in state.nonzero]
            if not cands:
                sink.append((state, p))
                return
            # overlap-free fan-out: kth branch assumes earlier cands nonzero
            for pos, v in enumerate(cands[1:], start=1):
                side = state.fork()
                side.nonzero.extend(cands[:pos])
                _assign_zero(side, v)
                side.conds.insert(0, p)
                _run(side, sink)
            _assign_zero(state, cands[0])
            continue
        if _try_linear(state, p, sink):
            continue
        if _try_square(state, p):
            continue
        state.residuals.append(p)
    sink.append((state, None))


def _assign_zero(state: _State, v: str):
    state.assignments[v] = RatFunc(0)
    if state.relation is not None and state.relation[0] == v:
        # c = 0 forces the squared value to vanish too
        state.conds.insert(0, state.relation[1].num)
        state.relation = None


def _try_linear(state: _State, p: MultiPoly, sink: list) -> bool:
    for x in PRECEDENCE:
        if x not in p.used_vars() or x in state.assignments:
            continue
        if state.relation is not None and state.relation[0] == x:
            continue
        if p.degree_in(x) != 1:
            continue
        A = p.coefficient_of(x, 1)
        B = p.coefficient_of(x, 0)
        if A.is_constant():
            state.assignments[x] = RatFunc(-B) / RatFunc(A)
            return True
        v = _single_var_monomial(A)
        if v is not None and v != x:
            if v in state.nonzero:
                state.assignments[x] = RatFunc(-B) / RatFunc(A)
                return True
            # pivot coefficient may vanish: fork on v = 0
            side = state.fork()
            _assign_zero(side, v)
            side.conds.insert(0, p)
            _run(side, sink)
            state.nonzero.append(v)
            state.assignments[x] = RatFunc(-B) / RatFunc(A)
            return True
    return False


def _try_square(state: _State, p: MultiPoly) -> bool:
    if "c" in state.assignments or state.relation is not None:
        return False
    if p.degree_in("c") != 2 or not p.coefficient_of("c", 1).is_zero():
        return False
    A = p.coefficient_of("c", 2)
    if not A.is_constant():
        return False
    B = p.coefficient_of("c", 0)
    state.relation = ("c", RatFunc(-B) / RatFunc(A))
    return True


def _ratfunc_vars(expr: RatFunc):
    return set(expr.num.used_vars()) | set(expr.den.used_vars())


def _close_assignments(assignments, relation):
    closed = dict(assignments)
    for _ in range(len(closed) + 2):
        changed = False
        for x, expr in closed.items():
            sub = {v: closed[v] for v in _ratfunc_vars(expr) if v in closed and v != x}
            if sub:
                closed[x] = expr.substitute(sub)
                changed = True
        if not changed:
            break
    if relation is not None:
        expr = relation[1]
        for _ in range(len(closed) + 2):
            sub = {v: closed[v] for v in _ratfunc_vars(expr) if v in closed}
            if not sub:
                break
            expr = expr.substitute(sub)
        relation = (relation[0], expr)
    return closed, relation


def _verify(original, assignments, relation):
    for p in original:
        val = RatFunc(p)
        for _ in range(len(assignments) + 2):
            used = _ratfunc_vars(val)
            sub = {v: x for v, x in assignments.items() if v in used}
            if not sub:
                break
            val = val.substitute(sub)
        if relation is not None:
            num = _reduce_relation_poly(val.num, relation[0], relation[1])
            val = num / RatFunc(val.den)
        if not val.is_zero():
            raise ArithmeticError("branch fails back-substitution")


def _finalize(state: _State, witness, original, universe, q, r) -> LocusBranch:
    assignments, relation = _close_assignments(state.assignments, state.relation)
    free = [
        v
        for v in universe
        if v not in assignments and (relation is None or relation[0] != v)
    ]
    if witness is not None:
        cls = "inconsistent"
    elif state.residuals:
        cls = "unsolved"
    else:
        _verify(original, assignments, relation)
        cls = _classify(assignments, relation, universe)
    return LocusBranch(
        q, r, assignments, relation, free, state.nonzero, state.residuals, cls, witness
    )


def _classify(assignments, relation, universe) -> str:
    def zero(v):
        a = assignments.get(v)
        return a is not None and a.is_zero()

    czero = zero("c") or (relation is not None and relation[1].is_zero())
    if czero and zero("e"):
        return "cyclic-point"
    constraints = sum(1 for v in ("g2", "g3", "w") if v in universe and v in assignments)
    if relation is not None and not relation[1].is_zero():
        constraints += 1
    if constraints >= 2:
        return "exotic-j"
    if constraints == 1:
        return "finite-set"
    return "one-parameter-family"


# -- closed forms in q -------------------------------------------------------

#: degree bounds (numerator, denominator) before the retry margin
_BOUNDS = {
    (2, "c/e2"): (0, 2),
    (5, "c/e2"): (2, 4),
    (8, "c/e2"): (4, 6),
    (5, "g2/e4"): (4, 8),
    (8, "g2/e4"): (12, 16),
    (4, "g2/c2"): (0, 2),
    (7, "g2/c2"): (2, 4),
    (10, "g2/c2"): (4, 6),
    (13, "g2/c2"): (8, 10),
    (10, "g3/c3"): (6, 8),
    (13, "g3/c3"): (10, 12),
    (4, "c2/g2"): (2, 0),
    (7, "c2/g2"): (4, 2),
    (8, "g3/e6"): (18, 24),
    (8, "j"): (14, 16),
    (10, "j"): (14, 16),
    (13, "j"): (20, 22),
}

_QUANTITIES = ("c/e2", "g2/e4", "g3/e6", "g2/c2", "g3/c3", "c2/g2", "j")


def solved_branch(q: int, r: int) -> LocusBranch:
    """The unique non-cyclic, non-inconsistent branch for (q, r)."""
    branches = triangular_solve(constraints_for(q, r))
    picked = [
        b
        for b in branches
        if b.classification in ("one-parameter-family", "finite-set", "exotic-j")
    ]
    if len(picked) != 1:
        raise ArithmeticError(
            f"expected one solved branch for ({q},{r}), got {len(picked)}"
        )
    return picked[0]


def branch_quantity(branch: LocusBranch, quantity: str):
    """Evaluate a homogeneity-invariant ratio on a solved branch, exactly."""
    if quantity == "j":
        j = branch.j()
        if isinstance(j, str):
            raise ValueError(f"j is {j} on this branch")
        return j.constant_value()
    target, base = quantity.split("/")
    flip = False
    if target == "c2":  # the inverted spelling c^2 / g2
        target, base, flip = base, "c2", True
    basevar = base[0]
    point = {basevar: ONE}
    if target == "c" and branch.relation is not None:
        raise ValueError("c is determined only up to sign on this branch")
    expr = branch.assignments.get(target)
    if expr is None:
        raise ValueError(f"{target} is not determined on this branch")
    if base == "c2" and branch.relation is not None:
        # express through c^2 = V: evaluate at the base variable of V
        val = branch.relation[1]
        vvars = set(val.num.used_vars()) | set(val.den.used_vars())
        if vvars:
            raise ValueError("square relation is not constant")
        c2 = val.constant_value()
        num = expr.evaluate_exact({ "c": 1 })
        v = num / c2 if c2 != 0 else None
        if v is None:
            raise ValueError("zero square relation")
        return 1 / v if flip else v
    v = expr.evaluate_exact(point)
    return 1 / v if flip else v


def reconstruct_in_q(r: int, quantity: str, samples=None) -> RatFunc:
    """Recover a locus quantity as an exact rational function of q by
    exact sampling at valid gaps and kernel interpolation."""
    if quantity not in _QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}")
    dn, dd = _BOUNDS.get((r, quantity), (10, 10))
    for attempt in range(2):
        dn_a, dd_a = dn + 2 + 4 * attempt, dd + 2 + 4 * attempt
        need = dn_a + dd_a + 1 + 2
        qs = samples if samples is not None else [r + 3 * t for t in range(need)]
        if len(qs) < dn_a + dd_a + 1:
            raise ReconstructionError("not enough samples for the bounds")
        pts = []
        for qv in qs:
            b = solved_branch(qv, r)
            pts.append((Rat(qv), branch_quantity(b, quantity)))
        try:
            return rational_interpolate(pts, dn_a, dd_a, var="q")
        except ReconstructionError:
            if attempt == 1 or samples is not None:
                raise
    raise ReconstructionError("reconstruction failed")  # pragma: no cover


# -- grid scans --------------------------------------------------------------


@dataclass
class ScanRow:
    r: int
    q: int
    branch: int
    classification: str
    c_text: str
    g2_text: str
    g3_text: str
    j_text: str


@dataclass
class ScanReport:
    curve: str
    rows: list = field(default_factory=list)

    @property
    def supports_conjecture(self) -> bool:
        return all(
            row.classification in ("cyclic-point", "inconsistent")
            for row in self.rows
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["r", "q", "branch", "classification", "c_over_e2",
                    "g2_relation", "g3_relation", "j"])
        for row in self.rows:
            w.writerow([row.r, row.q, row.branch, row.classification,
                        row.c_text, row.g2_text, row.g3_text, row.j_text])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({
            "curve": self.curve,
            "supports_conjecture": self.supports_conjecture,
            "rows": [
                {"r": row.r, "q": row.q, "branch": row.branch,
                 "classification": row.classification, "c_over_e2": row.c_text,
                 "g2_relation": row.g2_text, "g3_relation": row.g3_text,
                 "j": row.j_text}
                for row in self.rows
            ],
        })


_CURVE_SUBS = {
    "generic": None,
    "cuspidal": {"g2": MultiPoly.zero(), "g3": MultiPoly.zero()},
    "nodal": {
        "g2": MultiPoly.var("w", 2, 3),
        "g3": MultiPoly.var("w", 3),
    },
}

_CURVE_UNIVERSE = {
    "generic": GENERIC_UNIVERSE,
    "cuspidal": ("c", "e"),
    "nodal": ("c", "e", "w"),
}


def valid_r(r: int) -> bool:
    return r >= 1 and r % 3 != 0


def scan_grid(r_values, q_offset: int = 9, curve: str = "generic") -> ScanReport:
    if curve not in _CURVE_SUBS:
        raise ValueError(f"unknown curve mode {curve!r}")
    report = ScanReport(curve)
    for r in sorted(r_values):
        if not valid_r(r):
            continue
        for q in range(r, r + q_offset + 1, 3):
            cs = constraints_for(q, r)
            _check_cyclic_point(cs)
            if _CURVE_SUBS[curve] is not None:
                cs = substitute_constraints(cs, _CURVE_SUBS[curve])
            for bid, b in enumerate(triangular_solve(cs, _CURVE_UNIVERSE[curve])):
                report.rows.append(ScanRow(
                    r, q, bid, b.classification,
                    _var_text(b, "c", curve), _var_text(b, "g2", curve),
                    _var_text(b, "g3", curve), _j_text(b, curve),
                ))
    return report


def _check_cyclic_point(cs: ConstraintSet):
    """The cyclic operator on the equianharmonic curve (c = e = g2 = 0)
    must annihilate every condition."""
    zero = MultiPoly.zero()
    for c in cs.conditions:
        v = c.poly.substitute({"c": zero, "e": zero, "g2": zero})
        if isinstance(v, RatFunc):
            v = v.num
        if not v.is_zero():
            raise ArithmeticError("cyclic point fails the constraints")


def _var_text(b: LocusBranch, v: str, curve: str = "generic") -> str:
    if v == "c" and b.relation is not None:
        return f"c^2 = {b.relation[1].text()}"
    if v in ("g2", "g3") and curve != "generic":
        # w may itself have been forced to zero on this branch
        val = RatFunc(_CURVE_SUBS[curve][v])
        for _ in range(3):
            sub = {x: b.assignments[x] for x in _ratfunc_vars(val) if x in b.assignments}
            if not sub:
                break
            val = val.substitute(sub)
        return val.text()
    a = b.assignments.get(v)
    if a is None:
        return "free"
    return a.text()


def _j_text(b: LocusBranch, curve: str = "generic") -> str:
    if b.classification == "inconsistent":
        return "none"
    if curve == "cuspidal":
        return "cusp"
    if curve == "nodal":
        return "infinite"
    j = b.j()
    if isinstance(j, str):
        return j
    if j.is_zero():
        return "0"
    return j.text()
