"""Exact evaluation of closed decorated foams and their degree.

A closed foam with facets colored by pigment subsets of {1..N} evaluates to
a signed ratio of products in Z[X_1..X_N]; summed over all admissible
colorings the result is a symmetric polynomial whose degree is determined
by the topology and the decorations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    InputError,
    NonHomogeneous,
    NotPolynomial,
    NotSymmetric,
    OddEuler,
)
from .foamcore import (
    Binding,
    Coloring,
    FoamComplex,
    Movie,
    bichrome_data,
    compile_movie,
    enumerate_colorings,
    monochrome_euler,
)
from .polyring import (
    CoefRing,
    MultiPoly,
    RatFun,
    SymPoly,
    ZZ,
    is_symmetric,
    ratfun_sum,
    xvars,
)

# ---------------------------------------------------------------------------
# facet decoration evaluation
# ---------------------------------------------------------------------------


def _decoration_value(
    dec: SymPoly, color: frozenset[int], N: int, ring: CoefRing
) -> MultiPoly:
    """Evaluate a decoration on (X_color, X_complement)."""
    inner = sorted(color)
    outer = sorted(set(range(1, N + 1)) - color)
    blocks = dec.blocks
    if len(blocks) == 1:
        a = blocks[0]
        m = 0
    elif len(blocks) == 2:
        a, m = blocks
    else:
        raise InputError(f"decoration has {len(blocks)} blocks; expected 1 or 2")
    if a != len(inner):
        raise InputError(
            f"decoration inner block size {a} != facet thickness {len(inner)}"
        )
    if m not in (0, N - a):
        raise InputError(
            f"decoration outer block size {m} incompatible with N={N}, a={a}"
        )
    vs = xvars(N)
    mapping = {}
    names = dec.poly.vars
    for k, pig in enumerate(inner):
        mapping[names[k]] = MultiPoly.var(ring, vs, f"X{pig}")
    for k in range(m):
        mapping[names[a + k]] = MultiPoly.var(ring, vs, f"X{outer[k]}")
    poly = dec.poly
    if poly.ring != ring:
        poly = poly.map_coefficients(ring, ring.normalize)
    return poly.subs(mapping)


# ---------------------------------------------------------------------------
# colored evaluation
# ---------------------------------------------------------------------------


def colored_eval(
    F: FoamComplex, c: Coloring, N: int, ring: CoefRing = ZZ
) -> RatFun:
    """The signed rational value of one coloring of a closed foam."""
    vs = xvars(N)
    sign_exp = 0
    for i in range(1, N + 1):
        chi_i = monochrome_euler(F, c, i)
        if chi_i % 2:
            raise OddEuler(f"pigment {i}: surface has odd Euler characteristic {chi_i}")
        sign_exp += i * (chi_i // 2)

    num = MultiPoly.const(ring, vs, 1)
    den: dict[tuple[int, int], int] = {}
    for i in range(1, N + 1):
        for j in range(i + 1, N + 1):
            chi_ij, theta_plus, _, _ = bichrome_data(F, c, i, j)
            if chi_ij % 2:
                raise OddEuler(
                    f"pigments ({i},{j}): bichrome surface has odd Euler "
                    f"characteristic {chi_ij}"
                )
            sign_exp += theta_plus
            q = chi_ij // 2
            if q > 0:
                den[(i - 1, j - 1)] = q
            elif q < 0:
                xi = MultiPoly.var(ring, vs, f"X{i}")
                xj = MultiPoly.var(ring, vs, f"X{j}")
                num = num * ((xi - xj) ** (-q))

    for f in F.facets.values():
        for dec in f.decorations:
            num = num * _decoration_value(dec, c[f.id], N, ring)

    if sign_exp % 2:
        num = -num
    return RatFun(num, den)


# ---------------------------------------------------------------------------
# summed evaluation
# ---------------------------------------------------------------------------


@dataclass
class EvalResult:
    value: MultiPoly
    breakdown: list[tuple[Coloring, RatFun]]
    N: int


def _cache(F: FoamComplex) -> dict:
    cache = getattr(F, "_eval_cache", None)
    if cache is None:
        cache = {}
        object.__setattr__(F, "_eval_cache", cache)
    return cache


def _coloring_key(c: Coloring) -> tuple:
    return tuple(sorted((f, tuple(sorted(s))) for f, s in c.items()))


def evaluate(
    F: FoamComplex | Movie, N: int, ring: CoefRing = ZZ, check_degree: bool = True
) -> EvalResult:
    """Sum the colored evaluations of a closed foam.

    Asserts that the sum is a symmetric polynomial (raising
    ``NotPolynomial`` / ``NotSymmetric`` otherwise) and, for homogeneous
    decorations and nonzero value, that its degree matches :func:`degree`.
    """
    if isinstance(F, Movie):
        F = compile_movie(F)
    if not F.closed:
        raise InputError("only closed foams are evaluated")
    cache = _cache(F)
    breakdown = []
    vs = xvars(N)
    for c in enumerate_colorings(F, N):
        key = (_coloring_key(c), N, str(ring))
        if key not in cache:
            cache[key] = colored_eval(F, c, N, ring)
        breakdown.append((c, cache[key]))
    if not breakdown:
        total = RatFun(MultiPoly.zero(ring, vs))
    else:
        total = ratfun_sum(r for _, r in breakdown)
    value = total.as_polynomial()
    if not is_symmetric(value):
        raise NotSymmetric(f"evaluation {value} is not symmetric")
    if check_degree and not value.is_zero():
        d = degree(F, N)
        if value.qdegree() != d or not value.is_homogeneous():
            raise NotPolynomial(
                f"evaluation has degree {value.qdegree()}, expected {d}"
            )
    return EvalResult(value, breakdown, N)


# ---------------------------------------------------------------------------
# degree
# ---------------------------------------------------------------------------


def _binding_term(b: Binding, F: FoamComplex, N: int) -> int:
    a, bb = b.thin_thicknesses(F.facets)
    return a * bb + (a + bb) * (N - a - bb)


def degree(F: FoamComplex | Movie, N: int) -> int:
    """The intrinsic degree of a compiled foam for N pigments."""
    if isinstance(F, Movie):
        F = compile_movie(F)
    total = 0
    for f in F.facets.values():
        dec_deg = 0
        for dec in f.decorations:
            if not dec.poly.is_homogeneous():
                raise NonHomogeneous(f"decoration {dec.poly} on facet {f.id}")
            dec_deg += dec.poly.qdegree()
        ell = f.thickness
        total += dec_deg - ell * (N - ell) * f.chi
    for b in F.bindings.values():
        if not b.is_circle and not b.boundary:
            # each interval seam arc between two singular points
            total += _binding_term(b, F, N)
    for v in F.vertices.values():
        a, bb, cc = v.thin_thicknesses
        total -= (
            a * bb + bb * cc + a * cc + (a + bb + cc) * (N - a - bb - cc)
        )
    return total


_MOVE_LOCAL_DEGREE = {
    "cup": lambda a, b, N: -a * (N - a),
    "cap": lambda a, b, N: -a * (N - a),
    "saddle": lambda a, b, N: a * (N - a),
    "zip": lambda a, b, N: a * b,
    "unzip": lambda a, b, N: a * b,
    "digon_cup": lambda a, b, N: -a * b,
    "digon_cap": lambda a, b, N: -a * b,
}


def degree_incremental(mov: Movie, N: int) -> int:
    """Degree as the sum of the local degrees of the basic moves."""
    total = 0
    webs = mov.slices()
    for idx, mv in enumerate(mov.moves):
        from .foamcore import (
            Assoc, Cap, Coassoc, Cup, Decorate, DigonCap, DigonCup,
            Isotopy, Saddle, Unzip, Zip,
        )

        if isinstance(mv, Decorate):
            if not mv.poly.poly.is_homogeneous():
                raise NonHomogeneous(f"decoration {mv.poly.poly}")
            total += mv.poly.poly.qdegree()
        elif isinstance(mv, (Assoc, Coassoc, Isotopy)):
            pass
        elif isinstance(mv, Cup):
            total += _MOVE_LOCAL_DEGREE["cup"](mv.thickness, 0, N)
        elif isinstance(mv, Cap):
            a = webs[idx].edges[mv.edge].thickness
            total += _MOVE_LOCAL_DEGREE["cap"](a, 0, N)
        elif isinstance(mv, Saddle):
            a = webs[idx].edges[mv.edge1].thickness
            total += _MOVE_LOCAL_DEGREE["saddle"](a, 0, N)
        elif isinstance(mv, Zip):
            a = webs[idx].edges[mv.edge_a].thickness
            b = webs[idx].edges[mv.edge_b].thickness
            total += _MOVE_LOCAL_DEGREE["zip"](a, b, N)
        elif isinstance(mv, Unzip):
            t = webs[idx].edges[mv.thick_edge]
            mvx = webs[idx].vertices[t.tail]
            a = webs[idx].edges[mvx.ins[0]].thickness
            b = webs[idx].edges[mvx.ins[1]].thickness
            total += _MOVE_LOCAL_DEGREE["unzip"](a, b, N)
        elif isinstance(mv, DigonCup):
            total += _MOVE_LOCAL_DEGREE["digon_cup"](mv.a, mv.b, N)
        elif isinstance(mv, DigonCap):
            a = webs[idx].edges[mv.edge_a].thickness
            b = webs[idx].edges[mv.edge_b].thickness
            total += _MOVE_LOCAL_DEGREE["digon_cap"](a, b, N)
        else:
            raise InputError(f"unknown move {mv!r}")
    return total


# ---------------------------------------------------------------------------
# generalized decoration (bubble) calculus
# ---------------------------------------------------------------------------


def trivial_degree_check(F: FoamComplex, N: int) -> bool:
    """For undecorated foams the degree equals −Σ χ(bichrome) per coloring."""
    d = degree(F, N)
    for c in enumerate_colorings(F, N):
        total = 0
        for i in range(1, N + 1):
            for j in range(i + 1, N + 1):
                chi_ij, _, _, _ = bichrome_data(F, c, i, j)
                total += chi_ij
        if d != -total:
            return False
    return True


@dataclass
class CheckReport:
    ok: bool
    witness: Coloring | None = None
    detail: str = ""


def _find_edge_slice(mov: Movie, edge: str) -> tuple[int, int]:
    """First slice index at which the edge exists, and its thickness."""
    webs = mov.slices()
    for idx, w in enumerate(webs):
        if edge in w.edges:
            return idx, w.edges[edge].thickness
    raise InputError(f"edge {edge} never appears in the movie")


_FACET_CREATIONS = {
    "Cup": 1,
    "Zip": 1,
    "DigonCup": 2,
    "Assoc": 1,
    "Coassoc": 1,
}


def _facets_created_before(mov: Movie, idx: int) -> int:
    n = len(mov.input_web.edges)
    for mv in mov.moves[:idx]:
        n += _FACET_CREATIONS.get(type(mv).__name__, 0)
    return n


def with_bubble(mov: Movie, edge: str, R: SymPoly, N: int, side: str = "good") -> Movie:
    """Glue a decorated thickness-N bubble onto the facet carrying ``edge``.

    The bubble is realized as five inserted moves: a membrane circle is
    born, zipped with the facet edge (the facet edge sits in the first zip
    slot for ``side="good"`` and in the second for ``side="other"``), the
    membrane arc is decorated by R, the thick edge is unzipped and the
    re-closed membrane circle dies.  The facet edge id is reused by the
    unzip so the remainder of the movie applies unchanged.
    """
    from .foamcore import Cap, Cup, Decorate, Unzip, Zip

    idx, a = _find_edge_slice(mov, edge)
    m = N - a
    if m < 0:
        raise InputError(f"facet thickness {a} exceeds N={N}")
    if len(R.blocks) != 1 or R.blocks[0] != m:
        raise InputError(f"bubble decoration must be symmetric in {m} variables")
    web = mov.slices()[idx]
    used = set(web.edges) | set(web.vertices)
    for w in mov.slices():
        used |= set(w.edges) | set(w.vertices)
    fresh = iter(f"bub{k}" for k in range(1, 100))

    def new_id():
        while True:
            x = next(fresh)
            if x not in used:
                return x

    d = new_id()
    mvv, svv, thick, arc = new_id(), new_id(), new_id(), new_id()
    if m == 0:
        # empty complement: the bubble degenerates to nothing; identity gluing
        return mov
    e_circle = web.edges[edge].is_circle
    e1 = new_id()
    e2 = e1 if e_circle else new_id()
    if side == "good":
        zip_mv = Zip(edge, d, mvv, svv, thick, e1, e2, arc, arc)
        inserted = [
            Cup(m, d),
            zip_mv,
            Decorate(arc, R),
            Unzip(thick, edge, d),
            Cap(d),
        ]
    else:
        zip_mv = Zip(d, edge, mvv, svv, thick, arc, arc, e1, e2)
        inserted = [
            Cup(m, d),
            zip_mv,
            Decorate(arc, R),
            Unzip(thick, d, edge),
            Cap(d),
        ]
    out = Movie(mov.input_web, mov.moves[:idx] + tuple(inserted) + mov.moves[idx:])
    return out


def _blown_facet_map(base: Movie, idx: int) -> dict[str, str]:
    """Map blown-movie facet ids back to base facet ids.

    Both compiles create facets in move order and keep the earliest label
    as the canonical union-find root, so the bubble's two extra facets
    (membrane then thick) simply shift all later facet numbers by two.
    """
    n_before = _facets_created_before(base, idx)
    total = n_before
    for mv in base.moves[idx:]:
        total += _FACET_CREATIONS.get(type(mv).__name__, 0)
    mapping = {}
    for k in range(1, n_before + 1):
        mapping[f"f{k}"] = f"f{k}"
    for k in range(n_before + 1, total + 1):
        mapping[f"f{k + 2}"] = f"f{k}"
    return mapping


def bubble_check(
    base: Movie,
    facet_edge: str,
    R: SymPoly,
    N: int,
    ring: CoefRing = ZZ,
) -> CheckReport:
    """Validate the decorated-bubble reduction per coloring, on both sides.

    Gluing a thickness-N bubble with membrane decoration R onto a facet of
    thickness a multiplies each colored evaluation by R evaluated on the
    complementary pigments, up to the closed-form sign
    ``(−1)^{(N−a)(N−a+1)/2}`` — with an extra ``(−1)^{a(N−a)}`` when the
    bubble is glued from the other side.
    """
    idx, a = _find_edge_slice(base, facet_edge)
    m = N - a
    Fb = compile_movie(base)
    base_vals = {
        _coloring_key(c): (c, colored_eval(Fb, c, N, ring))
        for c in enumerate_colorings(Fb, N)
    }
    vs = xvars(N)
    fmap = None
    sign_main = (-1) ** ((m * (m + 1)) // 2)
    for side, sign in (("good", sign_main), ("other", sign_main * (-1) ** (a * m))):
        blown = with_bubble(base, facet_edge, R, N, side)
        if m == 0:
            continue  # degenerate: nothing to compare beyond identity
        Fg = compile_movie(blown)
        fmap = _blown_facet_map(base, idx)
        seen = 0
        for c in enumerate_colorings(Fg, N):
            restricted = {fmap[f]: col for f, col in c.items() if f in fmap}
            key = _coloring_key(restricted)
            if key not in base_vals:
                return CheckReport(False, c, "no matching base coloring")
            c0, base_val = base_vals[key]
            # the target facet is the one the bubble's thick facet refines
            n_before = _facets_created_before(base, idx)
            membrane = f"f{n_before + 1}"
            outer = sorted(c[membrane])
            mapping = {
                name: MultiPoly.var(ring, vs, f"X{p}")
                for name, p in zip(R.poly.vars, outer)
            }
            poly = R.poly
            if poly.ring != ring:
                poly = poly.map_coefficients(ring, ring.normalize)
            r_val = poly.subs(mapping)
            lhs = colored_eval(Fg, c, N, ring) * sign
            rhs = base_val * r_val
            if lhs != rhs:
                return CheckReport(
                    False, c, f"side={side}: {lhs} != ({r_val})*({base_val})"
                )
            seen += 1
        if seen != len(base_vals):
            return CheckReport(False, None, "coloring counts differ")
    return CheckReport(True)


# ---------------------------------------------------------------------------
# dot migration
# ---------------------------------------------------------------------------


def split_decoration(
    R: SymPoly, a: int, b: int, ring: CoefRing = ZZ
) -> list[tuple[SymPoly, SymPoly]]:
    """Write a symmetric polynomial in a+b variables as Σ_j P_j(x)·Q_j(y).

    The output pieces are symmetric in the first a and last b variables
    respectively; substituting x=x_1..x_a, y=x_{a+1}..x_{a+b} and summing
    products recovers R.
    """
    if len(R.blocks) != 1 or R.blocks[0] != a + b:
        raise InputError(f"decoration must be symmetric in {a + b} variables")
    poly = R.poly
    if poly.ring != ring:
        poly = poly.map_coefficients(ring, ring.normalize)
    xv = tuple(f"x{i}" for i in range(1, a + 1))
    yv = tuple(f"x{i}" for i in range(1, b + 1))
    groups: dict[tuple[int, ...], dict[tuple[int, ...], object]] = {}
    for exp, coef in poly.terms.items():
        left, right = exp[:a], exp[a:]
        groups.setdefault(left, {})[right] = coef
    # gather the left monomials into S_a-orbits
    orbit_of: dict[tuple[int, ...], tuple[int, ...]] = {}
    for left in groups:
        orbit_of[left] = tuple(sorted(left, reverse=True))
    out = []
    done = set()
    for left, rep in orbit_of.items():
        if rep in done:
            continue
        done.add(rep)
        # monomial symmetric polynomial of the orbit
        orbit = {p for p in _permutations_of(rep)}
        left_terms = {p: 1 for p in orbit}
        left_poly = MultiPoly(ring, xv, left_terms)
        right_poly = MultiPoly(ring, yv, dict(groups[left]))
        out.append((SymPoly(left_poly, (a,)), SymPoly(right_poly, (b,))))
    return out


def _permutations_of(exp: tuple[int, ...]) -> set[tuple[int, ...]]:
    import itertools

    return set(itertools.permutations(exp))


def dot_migration_check(
    a: int, b: int, R: SymPoly, N: int, ring: CoefRing = ZZ
) -> CheckReport:
    """Check decoration migration through a digon seam, per coloring.

    Compares the theta-like closed foam with R on its thick facet against
    the sum of the same foam with the split pieces of R on the two thin
    facets, coloring by coloring.
    """
    from .foamcore import MovieBuilder

    def build(thick_dec: SymPoly | None, thin_decs=None):
        bld = MovieBuilder()
        t = bld.cup(a + b)
        if thick_dec is not None:
            bld.decorate(t, thick_dec)
        dc = bld.digon_cup(t, a, b)
        if thin_decs is not None:
            pa, pb = thin_decs
            bld.decorate(dc.edge_a, pa)
            bld.decorate(dc.edge_b, pb)
        out = bld.digon_cap(dc.edge_a, dc.edge_b)
        bld.cap(out.out_edge)
        return bld.movie()

    lhs_movie = build(R)
    Fl = compile_movie(lhs_movie)
    pieces = split_decoration(R, a, b, ring)
    rhs_movies = [compile_movie(build(None, (pa, pb))) for pa, pb in pieces]
    for c in enumerate_colorings(Fl, N):
        lhs = colored_eval(Fl, c, N, ring)
        rhs = None
        for Fr in rhs_movies:
            term = colored_eval(Fr, c, N, ring)
            rhs = term if rhs is None else rhs + term
        if not pieces:
            continue
        if lhs != rhs:
            return CheckReport(False, c, f"{lhs} != {rhs}")
    return CheckReport(True)
