"""Independent reference computations used by the tests.

Everything here works over a prime field with its own small Gaussian
elimination on plain lists, so it shares no linear algebra with the package.
"""
from __future__ import annotations

import itertools
from collections import Counter


# ---------------------------------------------------------------------------
# linear algebra mod p

def rref_mod(rows, ncols, p):
    m = [[v % p for v in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(v * inv) % p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank_mod(rows, ncols, p):
    if not rows or ncols == 0:
        return 0
    return len(rref_mod(rows, ncols, p)[1])


def nullspace_mod(rows, ncols, p):
    red, piv = rref_mod(rows, ncols, p) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, c in zip(red, piv):
            v[c] = (-r[f]) % p
        basis.append(v)
    return basis


def matmul(a, b, p):
    if not a or not b:
        inner = len(b)
        cols = len(b[0]) if b else 0
        return [[0] * cols for _ in a]
    return [[sum(x * y for x, y in zip(row, col)) % p for col in zip(*b)] for row in a]


def zeros(r, c):
    return [[0] * c for _ in range(r)]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def columns_of(vecs, nrows):
    return [[v[i] for v in vecs] for i in range(nrows)]


# ---------------------------------------------------------------------------
# brute-force Krull-Schmidt over F_p for quiver representations

class PlainRep:
    """Representation as plain integer lists: dims[v], maps[(s, t, id)]."""

    def __init__(self, vertices, dims, arrows, p):
        self.vertices = list(vertices)
        self.dims = dict(dims)
        self.arrows = list(arrows)  # (source, target, matrix)
        self.p = p

    @classmethod
    def from_rep(cls, rep, p):
        arrows = []
        for a in rep.quiver.arrows:
            m = rep.maps[a.id]
            arrows.append((a.source, a.target, [[int(v) % p for v in m.row(i)] for i in range(m.rows)]))
        return cls(rep.quiver.vertices, rep.dims, arrows, p)

    def total(self):
        return sum(self.dims.values())

    def dimvec(self):
        return tuple(self.dims[v] for v in self.vertices)


def _endomorphism_basis(r: PlainRep):
    p = r.p
    offs, n = {}, 0
    for v in r.vertices:
        offs[v] = n
        n += r.dims[v] ** 2
    eqs = []

    def var(v, i, j):
        return offs[v] + i * r.dims[v] + j

    for s, t, M in r.arrows:
        # phi_t M - M phi_s = 0, entry (i, j)
        for i in range(r.dims[t]):
            for j in range(r.dims[s]):
                row = [0] * n
                for k in range(r.dims[t]):
                    row[var(t, i, k)] += M[k][j]
                for k in range(r.dims[s]):
                    row[var(s, k, j)] -= M[i][k]
                eqs.append([x % p for x in row])
    basis = nullspace_mod(eqs, n, p) if n else []
    out = []
    for vec in basis:
        phi = {}
        for v in r.vertices:
            d = r.dims[v]
            phi[v] = [[vec[var(v, i, j)] for j in range(d)] for i in range(d)]
        out.append(phi)
    return out


def _power(m, k, p):
    out = identity(len(m))
    for _ in range(k):
        out = matmul(out, m, p)
    return out


def _restrict(r: PlainRep, bases):
    p = r.p
    arrows = []
    for s, t, M in r.arrows:
        Bs, Bt = bases[s], bases[t]
        img = matmul(M, Bs, p) if Bs and Bs[0] else zeros(len(M), len(Bs[0]) if Bs else 0)
        ks, kt = len(Bs[0]) if Bs else 0, len(Bt[0]) if Bt else 0
        # coordinates of img columns in the basis Bt
        coords = zeros(kt, ks)
        for c in range(ks):
            aug = [Bt[i][:] + [img[i][c]] for i in range(len(Bt))]
            red, piv = rref_mod(aug, kt + 1, p)
            assert kt not in piv, "image left the subspace"
            for row, pc in zip(red, piv):
                coords[pc][c] = row[kt]
        arrows.append((s, t, coords))
    dims = {v: (len(bases[v][0]) if bases[v] else 0) for v in r.vertices}
    return PlainRep(r.vertices, dims, arrows, p)


def _image_basis(m, p):
    # pivot columns of m
    if not m or not m[0]:
        return []
    _, piv = rref_mod(m, len(m[0]), p)
    return [[row[c] for c in piv] for row in m]


def _kernel_basis(m, ncols, p):
    ns = nullspace_mod(m, ncols, p)
    return columns_of(ns, ncols) if ns else [[] for _ in range(ncols)]


def brute_force_decompose(r: PlainRep, limit: int = 1 << 20) -> Counter:
    """Dimension vectors of the indecomposable summands (Fitting lemma search)."""
    p = r.p
    total = r.total()
    if total == 0:
        return Counter()
    basis = _endomorphism_basis(r)
    N = total

    def split(phi):
        pw = {v: _power(phi[v], N, p) for v in r.vertices}
        nil = all(all(x == 0 for row in pw[v] for x in row) for v in r.vertices if r.dims[v])
        rk = sum(rank_mod(pw[v], r.dims[v], p) for v in r.vertices if r.dims[v])
        if nil or rk == total:
            return None
        ker = {v: (_kernel_basis(pw[v], r.dims[v], p) if r.dims[v] else []) for v in r.vertices}
        img = {v: (_image_basis(pw[v], p) if r.dims[v] else []) for v in r.vertices}
        ker = {v: (b if b and b[0] else []) for v, b in ker.items()}
        img = {v: (b if b and b[0] else []) for v, b in img.items()}
        return _restrict(r, ker), _restrict(r, img)

    def candidates():
        yield from basis
        k = len(basis)
        count = 0
        for coeffs in itertools.product(range(p), repeat=k):
            count += 1
            if count > limit:
                raise RuntimeError("endomorphism algebra too large for brute force")
            if sum(1 for c in coeffs if c) < 2:
                continue
            yield {v: [[sum(c * b[v][i][j] for c, b in zip(coeffs, basis)) % p
                        for j in range(r.dims[v])] for i in range(r.dims[v])] for v in r.vertices}

    for phi in candidates():
        parts = split(phi)
        if parts is not None:
            return brute_force_decompose(parts[0], limit) + brute_force_decompose(parts[1], limit)
    return Counter([r.dimvec()])


def interval_dimvec(vertices, iv_vertices):
    s = set(iv_vertices)
    return tuple(1 if v in s else 0 for v in vertices)


# ---------------------------------------------------------------------------
# rank invariant for equioriented paths

def mobius_intervals(r: PlainRep) -> Counter:
    """Interval multiplicities of a rep of a path a_0 -> a_1 -> ... from ranks
    of composite maps."""
    p = r.p
    vs = r.vertices
    L = len(vs)
    step = {}
    for s, t, M in r.arrows:
        step[vs.index(s)] = M
    assert all(vs.index(t) == vs.index(s) + 1 for s, t, _ in r.arrows), "needs forward orientation"

    def rk(a, b):
        if a < 0 or b >= L or a > b:
            return 0
        m = identity(r.dims[vs[a]])
        for k in range(a, b):
            m = matmul(step[k], m, p) if m else zeros(r.dims[vs[k + 1]], 0)
        if not m or not m[0]:
            return 0
        return rank_mod(m, len(m[0]), p)

    out = Counter()
    for a in range(L):
        for b in range(a, L):
            mult = rk(a, b) - rk(a - 1, b) - rk(a, b + 1) + rk(a - 1, b + 1)
            if mult:
                out[(vs[a], vs[b])] += mult
    return out


# ---------------------------------------------------------------------------
# Hom in K from k-linear module maps

def _pred(j, n):
    return (j - 2) % n + 1


def _terms(cx):
    """Plain data of a bounded complex: types per degree and expanded differentials."""
    d = cx.to_json()
    n = d["n"]
    lo, hi = d["window"]
    types = {}
    for i in range(lo, hi + 1):
        m = d["mult"][str(i)]
        types[i] = [j + 1 for j, c in enumerate(m) for _ in range(c)]
    return n, lo, hi, types, d.get("diff", {})


def _to_int(v, p):
    if isinstance(v, str) and "/" in v:
        a, b = v.split("/")
        return int(a) * pow(int(b), p - 2, p) % p
    return int(v) % p


def _expanded_diff(types_src, types_tgt, blk, p):
    rows, cols = 2 * len(types_tgt), 2 * len(types_src)
    m = zeros(rows, cols)
    ident = blk.get("id", []) if blk else []
    rad = blk.get("d", []) if blk else []
    for P in range(len(types_tgt)):
        for Q in range(len(types_src)):
            a = _to_int(ident[P][Q], p) if ident else 0
            b = _to_int(rad[P][Q], p) if rad else 0
            m[2 * P][2 * Q] += a
            m[2 * P + 1][2 * Q + 1] += a
            m[2 * P + 1][2 * Q] += b
    return m


def _action(types, n):
    """Arrow actions (one matrix per arrow j -> j+1) and vertex idempotents."""
    size = 2 * len(types)
    arrows = {v: zeros(size, size) for v in range(1, n + 1)}
    idem = {v: zeros(size, size) for v in range(1, n + 1)}
    for q, t in enumerate(types):
        arrows[_pred(t, n)][2 * q + 1][2 * q] = 1
        idem[_pred(t, n)][2 * q][2 * q] = 1
        idem[t][2 * q + 1][2 * q + 1] = 1
    return arrows, idem


def expanded_hom_k_dim(x, y, p: int) -> int:
    """dim Hom_K(X, Y) for bounded X, Y via module maps on k-linear terms."""
    n, xlo, xhi, xt, xd = _terms(x)
    _, ylo, yhi, yt, yd = _terms(y)
    lo, hi = min(xlo, ylo), max(xhi, yhi)
    get = lambda t, i: t.get(i, [])
    X = {i: get(xt, i) for i in range(lo - 1, hi + 2)}
    Y = {i: get(yt, i) for i in range(lo - 1, hi + 2)}
    DX = {i: _expanded_diff(X[i], X[i + 1], xd.get(str(i)), p) for i in range(lo - 1, hi + 1)}
    DY = {i: _expanded_diff(Y[i], Y[i + 1], yd.get(str(i)), p) for i in range(lo - 1, hi + 1)}
    act = {("x", i): _action(X[i], n) for i in X}
    act.update({("y", i): _action(Y[i], n) for i in Y})

    def block_vars(pairs):
        offs, total = {}, 0
        for key, (r, c) in pairs.items():
            offs[key] = total
            total += r * c
        return offs, total

    fshape = {i: (2 * len(Y[i]), 2 * len(X[i])) for i in range(lo, hi + 1)}
    hshape = {i: (2 * len(Y[i - 1]), 2 * len(X[i])) for i in range(lo, hi + 2)}
    foff, fn = block_vars(fshape)
    hoff, hn = block_vars(hshape)

    def module_eqs(shape, off, n_vars, src, tgt):
        eqs = []
        r, c = shape
        if r == 0 or c == 0:
            return eqs
        ax, ex = src
        ay, ey = tgt
        for mats in ((ax, ay), (ex, ey)):
            for v in range(1, n + 1):
                A, B = mats[0][v], mats[1][v]
                # phi A - B phi = 0
                for i in range(r):
                    for j in range(c):
                        row = [0] * n_vars
                        for k in range(c):
                            if A[k][j]:
                                row[off + i * c + k] += A[k][j]
                        for k in range(r):
                            if B[i][k]:
                                row[off + k * c + j] -= B[i][k]
                        if any(row):
                            eqs.append([v_ % p for v_ in row])
        return eqs

    # chain maps
    eqs = []
    for i in range(lo, hi + 1):
        eqs += module_eqs(fshape[i], foff[i], fn, act[("x", i)], act[("y", i)])
    for i in range(lo - 1, hi + 1):
        # DY_i f_i - f_{i+1} DX_i = 0 (f outside [lo, hi] is zero)
        r, c = 2 * len(Y[i + 1]), 2 * len(X[i])
        for a in range(r):
            for b in range(c):
                row = [0] * fn
                if i in fshape:
                    fr, fc = fshape[i]
                    for k in range(fr):
                        if DY[i][a][k]:
                            row[foff[i] + k * fc + b] += DY[i][a][k]
                if i + 1 in fshape:
                    fr, fc = fshape[i + 1]
                    for k in range(fc):
                        if DX[i][k][b]:
                            row[foff[i + 1] + a * fc + k] -= DX[i][k][b]
                if any(row):
                    eqs.append([v % p for v in row])
    dim_z = fn - rank_mod(eqs, fn, p)
    # homotopies: module maps h_i: X^i -> Y^{i-1}
    heqs = []
    for i in range(lo, hi + 2):
        heqs += module_eqs(hshape[i], hoff[i], hn, act[("x", i)], act[("y", i - 1)])
    hbasis = nullspace_mod(heqs, hn, p) if hn else []
    images = []
    for h in hbasis:
        H = {}
        for i, (r, c) in hshape.items():
            H[i] = [[h[hoff[i] + a * c + b] for b in range(c)] for a in range(r)]
        vec = [0] * fn
        for i in range(lo, hi + 1):
            r, c = fshape[i]
            if r == 0 or c == 0:
                continue
            t1 = matmul(DY[i - 1], H[i], p) if H[i] and H[i][0] and DY[i - 1] else zeros(r, c)
            t2 = matmul(H[i + 1], DX[i], p) if H[i + 1] and H[i + 1][0] else zeros(r, c)
            for a in range(r):
                for b in range(c):
                    vec[foff[i] + a * c + b] = (t1[a][b] + t2[a][b]) % p
        images.append(vec)
    dim_b = rank_mod(images, fn, p) if images else 0
    return dim_z - dim_b


# ---------------------------------------------------------------------------
# classification through the repetitive quiver and separation

def complex_to_repetitive_rep(x):
    """Rep of the repetitive window: degree c, module vertex v -> (c, v - c mod n).

    Needs radical differentials (otherwise the bar relations fail)."""
    from kinj.exactlin import Matrix
    from kinj.quiver import cycle_quiver, repetitive_window
    from kinj.rep import Rep

    n = x.n
    q = repetitive_window(cycle_quiver(n), x.lo, x.hi)

    def coords(types, v):
        out = []
        for k, t in enumerate(types):
            if _pred(t, n) == v:
                out.append(2 * k)
            if t == v:
                out.append(2 * k + 1)
        return out

    def module_vertex(c, j):
        return (j + c - 1) % n + 1

    dims, maps = {}, {}
    for c in range(x.lo, x.hi + 1):
        types = x.types(c)
        for j in range(1, n + 1):
            dims[(c, j)] = len(coords(types, module_vertex(c, j)))
    for a in q.quiver.arrows:
        (c, j), (c2, j2) = a.source, a.target
        v, w = module_vertex(c, j), module_vertex(c2, j2)
        if c2 == c:
            types = x.types(c)
            # arrow v -> v+1 sends the top of I_{v+1} to its socle
            full = zeros(2 * len(types), 2 * len(types))
            for k, t in enumerate(types):
                if _pred(t, n) == v:
                    full[2 * k + 1][2 * k] = 1
            rows, cols = coords(types, w), coords(types, v)
        else:
            full = [list(r) for r in x.d(c).expand().tolist()]
            rows, cols = coords(x.types(c2), w), coords(x.types(c), v)
        maps[a.id] = Matrix.from_rows([[full[r][s] for s in cols] for r in rows], len(cols))
    return Rep(q, dims, maps)


def labels_via_separation(x):
    """(start, end, anchor) triples of a bounded radical complex, read off the
    interval summands of S(Phi(x)) on the separated repetitive quiver."""
    from kinj.quiver import is_primed, unprime
    from kinj.rep import decompose_intervals, functor_s, interval_vertices

    n = x.n
    y = functor_s(complex_to_repetitive_rep(x))
    comps = y.quiver.path_components()
    out = Counter()
    for iv, mult in decompose_intervals(y).items():
        path = comps[iv.component]
        seg = interval_vertices(path, iv)
        ends = [seg[0], seg[-1]]
        primed = [v for v in ends if is_primed(v)]
        plain = [v for v in ends if not is_primed(v)]
        if len(seg) % 2 or len(primed) != 1 or len(plain) != 1:
            raise AssertionError(f"unexpected separated summand {seg}")
        (s, js) = unprime(primed[0])
        (e, _) = plain[0]
        anchor = (js + s - 1) % n + 1
        out[(s, e, anchor)] += mult
    return out
