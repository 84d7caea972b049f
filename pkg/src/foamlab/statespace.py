"""Web state spaces from the pairing of build-up movies.

A web's state space is presented by a finite family of movies from the
empty web to the target web.  Pairing two such movies — composing one
with the time reversal of the other and evaluating the closed foam —
produces a Gram matrix whose rank (graded by the movies' degrees) is the
graded rank of the span of the family.  On top of this sit kernel-membership
tests, matrices for the operators of :mod:`foamlab.actions` expressed in a
generator family, and checks of the standard local rank relations.

All rank statements are relative to the supplied generator family: the
pairing certifies linear independence exactly, but spanning the full state
space is only validated against the known graded ranks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .actions import ActionParams, FoamSum, act_pdg, act_sl2, act_witt
from .errors import (
    DivisionNotExact,
    InputError,
    NotWellDefined,
    RankUnstable,
    WrongRing,
)
from .foamcore import (
    Movie,
    MovieBuilder,
    Saddle,
    Web,
    compose,
    mirror,
)
from .foameval import CheckReport, degree, evaluate
from .polyring import (
    CoefRing,
    MultiPoly,
    Scalar,
    SymPoly,
    ZZ,
    elementary,
    kill_equivariance,
    qbinom_laurent,
    xvars,
)

__all__ = [
    "Presentation",
    "GramMatrix",
    "InducedAction",
    "presentation",
    "circle_presentation",
    "theta_presentation",
    "zipped_presentation",
    "necklace_presentation",
    "chain_presentation",
    "box_partitions",
    "elementary_product",
    "pair_movies",
    "gram_matrix",
    "graded_rank",
    "is_zero_in_statespace",
    "induced_action",
    "moy_check",
    "laurent_add",
    "laurent_mul",
    "laurent_scale",
    "quantum_integer",
    "mat_add",
    "mat_sub",
    "mat_mul",
    "mat_scale",
    "mat_pow",
    "mat_is_zero",
    "scalar_matrix",
    "base_derivation",
    "operator_compose",
    "operator_commutator",
    "operator_power",
]

#: A prime larger than 2**31 used for randomized rank specializations.
_RANK_PRIME = 2147483659


# ---------------------------------------------------------------------------
# Laurent polynomial helpers (exponent -> coefficient maps)
# ---------------------------------------------------------------------------

Laurent = dict[int, int]


def _laurent_clean(d: Laurent) -> Laurent:
    return {e: c for e, c in sorted(d.items()) if c != 0}


def laurent_add(a: Laurent, b: Laurent) -> Laurent:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
    return _laurent_clean(out)


def laurent_mul(a: Laurent, b: Laurent) -> Laurent:
    out: Laurent = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return _laurent_clean(out)


def laurent_scale(a: Laurent, c: int) -> Laurent:
    return _laurent_clean({e: c * v for e, v in a.items()})


def quantum_integer(k: int) -> Laurent:
    """The balanced q-integer ``q^{k-1} + q^{k-3} + ... + q^{1-k}``."""
    if k <= 0:
        return {}
    return qbinom_laurent(k, 1)


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    """A web together with a finite family of build-up movies.

    ``base`` selects the coefficient base of the pairing: ``"equivariant"``
    keeps values as polynomials in the full alphabet, ``"phi0"`` kills the
    positive-degree symmetric part so values become scalars.
    """

    web: Web
    movies: tuple[Movie, ...]
    degrees: tuple[int, ...]
    N: int
    ring: CoefRing
    base: str
    spherical: bool

    def __len__(self) -> int:
        return len(self.movies)


def presentation(
    movies: Sequence[Movie], N: int, ring: CoefRing = ZZ, base: str = "equivariant"
) -> Presentation:
    movies = tuple(movies)
    if not movies:
        raise InputError("a presentation needs at least one movie")
    if base not in ("equivariant", "phi0"):
        raise InputError(f"unknown base {base!r}")
    web = movies[0].output_web
    for m in movies[1:]:
        if m.output_web != web:
            raise InputError("presentation movies do not share a boundary web")
        if not m.input_web.is_empty():
            raise InputError("presentation movies must start at the empty web")
    raw = tuple(degree(m, N) for m in movies)
    # The degree of an open movie is additive under gluing only up to a
    # constant depending on the boundary web; calibrate it so that pairing
    # two generators is homogeneous of the sum of their degrees.
    offset = degree(compose(movies[0], mirror(movies[0])), N) - 2 * raw[0]
    if offset % 2:
        raise InputError("odd boundary offset: degrees cannot be calibrated")
    degrees = tuple(d + offset // 2 for d in raw)
    spherical = not any(
        isinstance(mv, Saddle) for m in movies for mv in m.moves
    )
    return Presentation(web, movies, degrees, N, ring, base, spherical)


def box_partitions(rows: int, cols: int) -> list[tuple[int, ...]]:
    """All partitions with at most ``rows`` parts, each at most ``cols``."""
    if rows < 0 or cols < 0:
        return []
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], bound: int) -> None:
        out.append(prefix)
        if len(prefix) == rows:
            return
        for part in range(1, bound + 1):
            rec(prefix + (part,), part)

    rec((), cols)
    return sorted(out, key=lambda mu: (sum(mu), mu))


def elementary_product(ring: CoefRing, a: int, mu: Sequence[int]) -> SymPoly:
    """The product ``e_{mu_1} e_{mu_2} ...`` on a thickness-``a`` alphabet."""
    vs = tuple(f"x{i}" for i in range(1, a + 1))
    poly = MultiPoly.const(ring, vs, 1)
    for part in mu:
        poly = poly * elementary(ring, vs, part)
    return SymPoly(poly, (a,))


def circle_presentation(
    a: int, N: int, ring: CoefRing = ZZ, base: str = "equivariant"
) -> Presentation:
    """Cups decorated by elementary products indexed by the (N-a) x a box."""
    if not 0 < a <= N:
        raise InputError(f"circle thickness {a} out of range for N={N}")
    movies = []
    for mu in box_partitions(N - a, a):
        b = MovieBuilder()
        c = b.cup(a)
        b.decorate(c, elementary_product(ring, a, mu))
        movies.append(b.movie())
    return presentation(movies, N, ring, base)


def theta_presentation(
    a: int, b: int, N: int, ring: CoefRing = ZZ, base: str = "equivariant"
) -> Presentation:
    """The two-vertex web read as a thick circle with a pinched-in bigon."""
    if a + b > N:
        raise InputError(f"total thickness {a + b} exceeds N={N}")
    movies = []
    for lam in box_partitions(N - a - b, a + b):
        for mu in box_partitions(b, a):
            bld = MovieBuilder()
            c = bld.cup(a + b)
            bld.decorate(c, elementary_product(ring, a + b, lam))
            d = bld.digon_cup(c, a, b)
            bld.decorate(d.edge_a, elementary_product(ring, a, mu))
            movies.append(bld.movie())
    return presentation(movies, N, ring, base)


def zipped_presentation(
    a: int, b: int, N: int, ring: CoefRing = ZZ, base: str = "equivariant"
) -> Presentation:
    """The two-vertex web read as two circles merged along a seam pair."""
    if a + b > N:
        raise InputError(f"total thickness {a + b} exceeds N={N}")
    movies = []
    for lam in box_partitions(N - a, a):
        for nu in box_partitions(N - a - b, b):
            bld = MovieBuilder()
            ca = bld.cup(a)
            bld.decorate(ca, elementary_product(ring, a, lam))
            cb = bld.cup(b)
            bld.decorate(cb, elementary_product(ring, b, nu))
            bld.zip(ca, cb)
            movies.append(bld.movie())
    return presentation(movies, N, ring, base)


def necklace_presentation(
    N: int, ring: CoefRing = ZZ, base: str = "equivariant"
) -> Presentation:
    """Thickness-2 circle carrying two thin bigons (the four-vertex ladder)."""
    if N < 2:
        raise InputError("the ladder web needs N >= 2")
    movies = []
    for lam in box_partitions(N - 2, 2):
        for mu in box_partitions(1, 1):
            for nu in box_partitions(1, 1):
                bld = MovieBuilder()
                c = bld.cup(2)
                bld.decorate(c, elementary_product(ring, 2, lam))
                d1 = bld.digon_cup(c, 1, 1)
                bld.decorate(d1.edge_a, elementary_product(ring, 1, mu))
                d2 = bld.digon_cup(d1.out_low, 1, 1)
                bld.decorate(d2.edge_a, elementary_product(ring, 1, nu))
                movies.append(bld.movie())
    return presentation(movies, N, ring, base)


def chain_presentation(
    order: str, a: int, b: int, c: int, N: int,
    ring: CoefRing = ZZ, base: str = "equivariant",
) -> Presentation:
    """A thick circle split twice, with the two bracketings of (a, b, c)."""
    s = a + b + c
    if s > N:
        raise InputError(f"total thickness {s} exceeds N={N}")
    movies = []
    if order == "left":
        pairs = [
            (lam, mu, nu)
            for lam in box_partitions(N - s, s)
            for mu in box_partitions(c, a + b)
            for nu in box_partitions(b, a)
        ]
    elif order == "right":
        pairs = [
            (lam, mu, nu)
            for lam in box_partitions(N - s, s)
            for mu in box_partitions(b + c, a)
            for nu in box_partitions(c, b)
        ]
    else:
        raise InputError(f"unknown bracketing {order!r}")
    for lam, mu, nu in pairs:
        bld = MovieBuilder()
        c0 = bld.cup(s)
        bld.decorate(c0, elementary_product(ring, s, lam))
        if order == "left":
            d1 = bld.digon_cup(c0, a + b, c)
            bld.decorate(d1.edge_a, elementary_product(ring, a + b, mu))
            d2 = bld.digon_cup(d1.edge_a, a, b)
            bld.decorate(d2.edge_a, elementary_product(ring, a, nu))
        else:
            d1 = bld.digon_cup(c0, a, b + c)
            bld.decorate(d1.edge_a, elementary_product(ring, a, mu))
            d2 = bld.digon_cup(d1.edge_b, b, c)
            bld.decorate(d2.edge_a, elementary_product(ring, b, nu))
        movies.append(bld.movie())
    return presentation(movies, N, ring, base)


# ---------------------------------------------------------------------------
# Pairing and Gram matrices
# ---------------------------------------------------------------------------


def pair_movies(F: Movie, G: Movie, N: int, ring: CoefRing = ZZ) -> MultiPoly:
    """Total evaluation of ``F`` composed with the time reversal of ``G``."""
    return evaluate(compose(F, mirror(G)), N, ring).value


def _base_entry(value: MultiPoly, base: str) -> MultiPoly:
    if base == "phi0":
        return MultiPoly.const(value.ring, (), kill_equivariance(value))
    return value


@dataclass(frozen=True)
class GramMatrix:
    """Matrix of pairings between two generator families of one web."""

    entries: tuple[tuple[MultiPoly, ...], ...]
    row_degrees: tuple[int, ...]
    col_degrees: tuple[int, ...]
    N: int
    ring: CoefRing
    base: str

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.entries), len(self.entries[0]) if self.entries else 0)


def gram_matrix(
    gens: Presentation, N: int | None = None, cols: Presentation | None = None
) -> GramMatrix:
    if N is not None and N != gens.N:
        raise InputError(f"presentation was built for N={gens.N}, not N={N}")
    cols = cols if cols is not None else gens
    if cols.web != gens.web or cols.N != gens.N:
        raise InputError("row and column families must present the same web")
    rows = []
    for F in gens.movies:
        row = []
        for G in cols.movies:
            row.append(_base_entry(pair_movies(F, G, gens.N, gens.ring), gens.base))
        rows.append(tuple(row))
    return GramMatrix(
        tuple(rows), gens.degrees, cols.degrees, gens.N, gens.ring, gens.base
    )


# ---------------------------------------------------------------------------
# Graded rank via randomized specialization
# ---------------------------------------------------------------------------


def _specialize(entry: MultiPoly, values: dict[str, int], p: int) -> int:
    s = entry.eval_scalar({v: values[v] for v in entry.vars})
    if isinstance(s, int):
        return s % p
    return s.numerator * pow(s.denominator, -1, p) % p


def _rank_once(G: GramMatrix, rng: random.Random, p: int) -> Laurent:
    n, m = G.shape
    vs = xvars(G.N)
    values = dict(zip(vs, rng.sample(range(1, p), len(vs))))
    spec = [
        [_specialize(e, values, p) for e in row] for row in G.entries
    ]
    order = sorted(range(n), key=lambda i: (G.row_degrees[i], i))
    pivots: list[tuple[int, list[int]]] = []  # (pivot column, normalized row)
    rank: Laurent = {}
    for i in order:
        row = list(spec[i])
        for col, prow in pivots:
            f = row[col]
            if f:
                row = [(x - f * y) % p for x, y in zip(row, prow)]
        col = next((j for j in range(m) if row[j]), None)
        if col is None:
            continue
        inv = pow(row[col], -1, p)
        pivots.append((col, [x * inv % p for x in row]))
        d = G.row_degrees[i]
        rank[d] = rank.get(d, 0) + 1
    return _laurent_clean(rank)


def graded_rank(G: GramMatrix, trials: int = 3, seed: int = 0) -> Laurent:
    """Graded rank of the pairing, by repeated random specialization.

    Each trial specializes the full alphabet to distinct random values in a
    prime field of size > 2**31 and row-reduces with pivots chosen greedily
    in generator-degree order; the contributions appear as ``q^degree``.
    Disagreeing trials raise :class:`RankUnstable` rather than averaging.
    """
    if G.ring.kind not in ("Z", "Q"):
        raise WrongRing("graded ranks are computed over Z or Q coefficients")
    if trials < 1:
        raise InputError("at least one specialization is required")
    rng = random.Random(seed)
    results = [_rank_once(G, rng, _RANK_PRIME) for _ in range(max(trials, 3))]
    if any(r != results[0] for r in results[1:]):
        raise RankUnstable(f"specializations disagree: {results}")
    return results[0]


# ---------------------------------------------------------------------------
# Kernel membership
# ---------------------------------------------------------------------------


def is_zero_in_statespace(
    v: FoamSum | Iterable[tuple[Scalar | MultiPoly, Movie]],
    gens: Presentation,
    N: int | None = None,
) -> bool:
    """Whether ``v`` pairs to zero against every generator.

    This certifies membership in the kernel of the pairing *relative to the
    supplied family*: it is exact when the family spans the state space and
    one-sided otherwise.  Coefficients may be scalars or polynomials in the
    full alphabet.
    """
    if N is not None and N != gens.N:
        raise InputError(f"presentation was built for N={gens.N}, not N={N}")
    pairs = list(v.movies()) if isinstance(v, FoamSum) else list(v)
    vs = xvars(gens.N)
    for G in gens.movies:
        total = MultiPoly.zero(gens.ring, vs)
        for coef, mov in pairs:
            val = pair_movies(mov, G, gens.N, gens.ring)
            if isinstance(coef, MultiPoly):
                val = val * coef.extend(vs)
            else:
                val = val * coef
            total = total + val
        if not _base_entry(total, gens.base).is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# Exact linear algebra over polynomial entries
# ---------------------------------------------------------------------------


def _poly_one(ring: CoefRing, vs: tuple[str, ...]) -> MultiPoly:
    return MultiPoly.const(ring, vs, 1)


def _bareiss_det(rows: list[list[MultiPoly]]) -> MultiPoly:
    """Fraction-free determinant (all intermediate divisions are exact)."""
    n = len(rows)
    ring = rows[0][0].ring
    vs = rows[0][0].vars
    if n == 0:
        return _poly_one(ring, vs)
    m = [list(r) for r in rows]
    sign = 1
    prev = _poly_one(ring, vs)
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return MultiPoly.zero(ring, vs)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]).exact_div(prev)
            m[i][k] = MultiPoly.zero(ring, vs)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


class _Frac:
    """A quotient of two polynomials, reduced only when division is exact."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        one = _poly_one(num.ring, num.vars)
        if den is None:
            den = one
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = MultiPoly.zero(num.ring, num.vars), one
        else:
            try:
                num, den = num.exact_div(den), one
            except DivisionNotExact:
                pass
        self.num = num
        self.den = den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "_Frac") -> "_Frac":
        return _Frac(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "_Frac") -> "_Frac":
        return _Frac(self.num * other.den - other.num * self.den, self.den * other.den)

    def __mul__(self, other: "_Frac") -> "_Frac":
        return _Frac(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "_Frac") -> "_Frac":
        if other.is_zero():
            raise ZeroDivisionError("division by zero fraction")
        return _Frac(self.num * other.den, self.den * other.num)


def _frac_rref(rows: list[list[_Frac]]) -> tuple[list[list[_Frac]], list[int]]:
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if not m[i][c].is_zero()), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(nrows):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def _kernel_basis(rows: list[list[MultiPoly]]) -> list[list[MultiPoly]]:
    """Polynomial spanning vectors of the right kernel (denominators cleared)."""
    if not rows:
        return []
    fr = [[_Frac(e) for e in row] for row in rows]
    red, pivots = _frac_rref(fr)
    ncols = len(rows[0])
    free = [c for c in range(ncols) if c not in pivots]
    ring = rows[0][0].ring
    vs = rows[0][0].vars
    basis: list[list[MultiPoly]] = []
    for fc in free:
        vec = [_Frac(MultiPoly.zero(ring, vs)) for _ in range(ncols)]
        vec[fc] = _Frac(_poly_one(ring, vs))
        for r, pc in enumerate(pivots):
            vec[pc] = _Frac(MultiPoly.zero(ring, vs)) - red[r][fc]
        den = _poly_one(ring, vs)
        for x in vec:
            den = den * x.den
        basis.append([(x.num * den).exact_div(x.den) for x in vec])
    return basis


def _solve_exact(
    M: list[list[MultiPoly]], B: list[list[MultiPoly]]
) -> list[list[MultiPoly]]:
    """Solve ``M X = B`` with polynomial entries (Cramer over Bareiss)."""
    n = len(M)
    det = _bareiss_det(M)
    ring = M[0][0].ring
    vs = M[0][0].vars
    if det.is_zero():
        return _solve_singular(M, B)
    ncols = len(B[0])
    X = [[MultiPoly.zero(ring, vs)] * ncols for _ in range(n)]
    for col in range(ncols):
        rhs = [B[i][col] for i in range(n)]
        for k in range(n):
            mk = [
                [rhs[i] if j == k else M[i][j] for j in range(n)] for i in range(n)
            ]
            X[k][col] = _bareiss_det(mk).exact_div(det)
    return X


def _solve_singular(
    M: list[list[MultiPoly]], B: list[list[MultiPoly]]
) -> list[list[MultiPoly]]:
    n = len(M)
    ncols = len(B[0])
    ring = M[0][0].ring
    vs = M[0][0].vars
    aug = [[_Frac(e) for e in M[i]] + [_Frac(e) for e in B[i]] for i in range(n)]
    red, pivots = _frac_rref(aug)
    if any(p >= n for p in pivots):
        raise NotWellDefined(
            "operator image is not in the span of the generator pairings"
        )
    X = [[MultiPoly.zero(ring, vs)] * ncols for _ in range(n)]
    for r, pc in enumerate(pivots):
        for col in range(ncols):
            f = red[r][n + col]
            try:
                X[pc][col] = f.num.exact_div(f.den)
            except DivisionNotExact:
                raise NotWellDefined(
                    "operator matrix entry is not polynomial over the base"
                )
    return X


# ---------------------------------------------------------------------------
# Matrix helpers (entries are MultiPoly over a shared base)
# ---------------------------------------------------------------------------

Matrix = tuple[tuple[MultiPoly, ...], ...]


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(A: Matrix, c: Scalar) -> Matrix:
    return tuple(tuple(x * c for x in row) for row in A)


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for t in range(1, k):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_pow(A: Matrix, k: int) -> Matrix:
    if k < 1:
        raise InputError("matrix power needs a positive exponent")
    out = A
    for _ in range(k - 1):
        out = mat_mul(out, A)
    return out


def mat_is_zero(A: Matrix) -> bool:
    return all(e.is_zero() for row in A for e in row)


def scalar_matrix(A: Matrix) -> list[list[Scalar]]:
    """Constant values of a matrix whose entries are all constants."""
    out = []
    for row in A:
        if not all(e.is_constant() for e in row):
            raise InputError("matrix has non-constant entries")
        out.append([e.constant_value() for e in row])
    return out


# ---------------------------------------------------------------------------
# Induced operator matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InducedAction:
    """An operator expressed in a generator family, column convention.

    ``matrix[k][i]`` is the coefficient of generator ``k`` in the image of
    generator ``i``; composition of operators is matrix product.
    """

    op: str
    matrix: Matrix
    certificate: CheckReport
    base: str


def _apply_operator(op: str, params: ActionParams, mov: Movie) -> FoamSum:
    if op == "e" or op == "h" or op == "f":
        return act_sl2(op, params, mov)
    if op == "d":
        return act_pdg(params, mov)
    if op.startswith("L:"):
        return act_witt(int(op[2:]), params, mov)
    raise InputError(f"unknown operator {op!r}")


def _pair_sum(S: FoamSum, G: Movie, N: int, ring: CoefRing) -> MultiPoly:
    total = MultiPoly.zero(ring, xvars(N))
    for coef, mov in S.movies():
        total = total + pair_movies(mov, G, N, ring) * coef
    return total


def induced_action(
    op: str, params: ActionParams, gens: Presentation, N: int | None = None
) -> InducedAction:
    """The matrix of an operator on the span of a generator family.

    Solves the pairing equations exactly and certifies well-definedness:
    when the Gram matrix is degenerate, the operator must map the pairing
    kernel into itself, otherwise :class:`NotWellDefined` is raised.
    """
    if N is not None and N != gens.N:
        raise InputError(f"presentation was built for N={gens.N}, not N={N}")
    if params.N != gens.N or params.ring != gens.ring:
        raise InputError("operator parameters and presentation disagree on ring/N")
    if gens.base == "phi0" and op != "d":
        raise InputError(
            "the non-equivariant base only carries the p-differential"
        )
    G = gram_matrix(gens)
    n = len(gens)
    # rows of the system are indexed by the pairing partner G_j, columns by
    # the generator coordinates, i.e. the transpose of the Gram entries
    M = [[G.entries[k][j] for k in range(n)] for j in range(n)]
    B: list[list[MultiPoly]] = [
        [None] * n for _ in range(n)  # type: ignore[list-item]
    ]
    for i, F in enumerate(gens.movies):
        S = _apply_operator(op, params, F)
        for j, Gm in enumerate(gens.movies):
            B[j][i] = _base_entry(_pair_sum(S, Gm, gens.N, gens.ring), gens.base)
    det = _bareiss_det(M)
    if det.is_zero():
        # A vector of coefficients in the pairing kernel must stay in the
        # kernel; the operator acts on its coefficients by the base
        # derivation and on the generators by the pairing columns.
        deriv = base_derivation(op) if gens.base == "equivariant" else None
        kernel = _kernel_basis(M)
        for vec in kernel:
            for j in range(n):
                acc = MultiPoly.zero(det.ring, det.vars)
                for k in range(n):
                    acc = acc + B[j][k] * vec[k]
                    if deriv is not None:
                        acc = acc + M[j][k] * deriv(vec[k])
                if not acc.is_zero():
                    raise NotWellDefined(
                        f"operator {op} moves a pairing-kernel vector out of the"
                        f" kernel (generator coordinates {vec})"
                    )
        cert = CheckReport(
            True, None, f"kernel of dimension {len(kernel)} is preserved"
        )
    else:
        cert = CheckReport(True, None, "pairing nondegenerate; kernel trivial")
    X = _solve_exact(M, B)
    return InducedAction(op, tuple(tuple(row) for row in X), cert, gens.base)


# ---------------------------------------------------------------------------
# Operator algebra on coordinates
# ---------------------------------------------------------------------------
#
# On the equivariant base the operators are derivations: they move the
# generators (the matrix part) *and* differentiate base coefficients (the
# derivation part).  Composition is therefore matrix product plus the
# derivation applied entrywise, and operator identities must be checked
# with these connection-style formulas.  Over the ``phi0`` base the
# derivation part vanishes and plain matrix algebra applies.


def base_derivation(op: str):
    """The action of an operator on base-ring coefficients."""
    from .polyring import witt_act as _witt

    if op == "e":
        return lambda q: _witt(-1, q)
    if op == "h":
        return lambda q: _witt(0, q) * 2
    if op == "f" or op == "d":
        return lambda q: -_witt(1, q)
    if op.startswith("L:"):
        n = int(op[2:])
        return lambda q: _witt(n, q)
    raise InputError(f"unknown operator {op!r}")


def _derive_matrix(op: str, M: Matrix) -> Matrix:
    d = base_derivation(op)
    return tuple(tuple(d(e) for e in row) for row in M)


def operator_compose(a: InducedAction, b: InducedAction) -> Matrix:
    """Matrix of ``a`` after ``b`` in the same generator family."""
    if a.base != b.base:
        raise InputError("operators live over different bases")
    out = mat_mul(a.matrix, b.matrix)
    if a.base == "equivariant":
        out = mat_add(out, _derive_matrix(a.op, b.matrix))
    return out


def operator_commutator(a: InducedAction, b: InducedAction) -> Matrix:
    return mat_sub(operator_compose(a, b), operator_compose(b, a))


def operator_power(a: InducedAction, k: int) -> Matrix:
    if k < 1:
        raise InputError("operator power needs a positive exponent")
    out = a.matrix
    for _ in range(k - 1):
        step = mat_mul(a.matrix, out)
        if a.base == "equivariant":
            step = mat_add(step, _derive_matrix(a.op, out))
        out = step
    return out


# ---------------------------------------------------------------------------
# Local rank relations
# ---------------------------------------------------------------------------


def _rank_of(p: Presentation, trials: int, seed: int) -> Laurent:
    return graded_rank(gram_matrix(p), trials=trials, seed=seed)


def moy_check(
    relation: str,
    N: int,
    a: int = 1,
    b: int = 1,
    c: int = 1,
    ring: CoefRing = ZZ,
    base: str = "equivariant",
    trials: int = 3,
    seed: int = 0,
) -> CheckReport:
    """Check one of the local graded-rank relations of web state spaces.

    ``circle``, ``digon``, ``bad_digon``, ``assoc`` and ``square`` compare a
    computed graded rank against the predicted Laurent polynomial;
    ``bad_square`` is outside the move family used by the presentations
    (its defining foams are not built from the spherical moves), so only
    the numeric rank identity is verified and the report says so.
    """
    if relation == "circle":
        got = _rank_of(circle_presentation(a, N, ring, base), trials, seed)
        want = qbinom_laurent(N, a)
    elif relation == "digon":
        got = _rank_of(theta_presentation(a, b, N, ring, base), trials, seed)
        want = laurent_mul(qbinom_laurent(a + b, a), qbinom_laurent(N, a + b))
    elif relation == "bad_digon":
        got = _rank_of(zipped_presentation(a, b, N, ring, base), trials, seed)
        want = laurent_mul(qbinom_laurent(N - a, b), qbinom_laurent(N, a))
    elif relation == "assoc":
        left = _rank_of(chain_presentation("left", a, b, c, N, ring, base), trials, seed)
        right = _rank_of(
            chain_presentation("right", a, b, c, N, ring, base), trials, seed
        )
        want = laurent_mul(
            laurent_mul(qbinom_laurent(a + b + c, a + b), qbinom_laurent(a + b, a)),
            qbinom_laurent(N, a + b + c),
        )
        if left != right or left != want:
            return CheckReport(
                False,
                (left, right, want),
                "bracketing ranks disagree",
            )
        return CheckReport(True, None, f"both bracketings have rank {want}")
    elif relation == "square":
        got = _rank_of(necklace_presentation(N, ring, base), trials, seed)
        circ = quantum_integer(N)
        want = laurent_add(
            laurent_mul(circ, circ),
            laurent_mul(quantum_integer(N - 2), circ),
        )
    elif relation == "bad_square":
        lhs = laurent_mul(
            laurent_mul(quantum_integer(2), quantum_integer(2)),
            qbinom_laurent(N, 2),
        )
        circ = quantum_integer(N)
        rhs = laurent_add(
            laurent_mul(circ, circ), laurent_mul(quantum_integer(N - 2), circ)
        )
        ok = lhs == rhs
        return CheckReport(
            ok,
            None if ok else (lhs, rhs),
            "state-space comparison skipped: the defining foams are outside"
            " the move family of these presentations; rank identity"
            + (" holds" if ok else " fails"),
        )
    else:
        raise InputError(f"unknown relation {relation!r}")
    if got != want:
        return CheckReport(False, (got, want), f"{relation}: rank mismatch")
    return CheckReport(True, None, f"{relation}: rank {want}")
