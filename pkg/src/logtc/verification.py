"""Independent verifiers: stalks of the ghost-sheaf resolution and the joint telescope.

Ghost complex at a stalk: for a point whose stratum has cone ``sigma`` the
chains are strictly decreasing sequences ``tau_0 > tau_1 > ... > tau_i`` of
nonzero faces of ``sigma``. Each chain contributes one copy of the lattice
``<tau_i>`` (the span of its smallest cone). Dropping ``tau_j`` with ``j < i``
is the identity with sign ``(-1)**j``; dropping ``tau_i`` is the inclusion
``<tau_i> -> <tau_{i-1}>`` with sign ``(-1)**i``. The augmentation sums the
inclusions into ``M``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

from . import snf
from .errors import ConeNotInFan, NotAComplex, NotSmooth
from .lattice import Fan, cyclic_ray_order, dot, is_smooth, primitive, primitive_normal

# ---------------------------------------------------------------------------
# chain complexes


@dataclass
class ChainComplex:
    """``terms[0] <- terms[1] <- ...``; ``maps[i]`` is ``terms[i+1] -> terms[i]``.

    Each term is a list of basis labels. A map is an integer matrix with one
    row per basis element of its target and one column per basis element of
    its source.
    """

    terms: list
    maps: list
    chains: list = field(default_factory=list)  # per term after M: the chains indexing it

    def ranks(self):
        return [len(t) for t in self.terms]

    def check(self):
        """Raise NotAComplex unless every composite of consecutive maps is zero."""
        for i in range(len(self.maps) - 1):
            a, b = self.maps[i], self.maps[i + 1]
            if not a or not b or not b[0]:
                continue
            prod = snf.matmul(a, b)
            if any(x for row in prod for x in row):
                raise NotAComplex(f"d{i} o d{i + 1} is not zero")


def _rank(a):
    return snf.rank(a) if a and a[0] else 0


def homology(c):
    """``[(free rank, torsion invariants)]`` for every term, via Smith normal form."""
    c.check()
    out = []
    for k, term in enumerate(c.terms):
        n = len(term)
        d_out = c.maps[k - 1] if k >= 1 else None
        d_in = c.maps[k] if k < len(c.maps) else None
        ker = n - (_rank(d_out) if d_out else 0)
        divs = snf.elementary_divisors(d_in) if d_in and d_in[0] else []
        out.append((ker - len(divs), [d for d in divs if d > 1]))
    return out


# ---------------------------------------------------------------------------
# the ghost complex


def _faces(f, sigma):
    return [t for t in f.cones if t and t <= sigma]


def _chains(faces, length):
    """Strictly decreasing chains of the given length."""
    by_size = sorted(faces, key=lambda t: (-len(t), sorted(t)))
    out = []
    for combo in itertools.combinations(by_size, length):
        if all(combo[i + 1] < combo[i] for i in range(length - 1)):
            out.append(combo)
    return out


def _lattice(f, tau):
    basis, _ = snf.saturation_basis([f.rays[i] for i in sorted(tau)], f.rank)
    return basis


def _inclusion(f, small, big):
    """Matrix of ``<small> -> <big>`` (rows: basis of big, columns: basis of small)."""
    src = _lattice(f, small)
    dst = _lattice(f, big) if big is not None else \
        [[int(i == j) for j in range(f.rank)] for i in range(f.rank)]
    cols = []
    for v in src:
        c = snf.solve_integer(dst, v)
        if c is None:
            raise NotAComplex(f"{sorted(small)} is not inside {sorted(big)}")
        cols.append(c)
    return [[cols[j][i] for j in range(len(cols))] for i in range(len(dst))]


def _label(chain):
    return ">".join("{" + ",".join(map(str, sorted(t))) + "}" for t in chain)


def ghost_resolution_complex(f, p_cone, *, corrupt=False):
    """Stalk of the ghost resolution at a point of the stratum named by ``p_cone``.

    ``p_cone`` is a set of ray indices. With ``corrupt`` the sign of one block
    of the first differential is flipped (used as a mutation test).
    """
    sigma = frozenset(p_cone)
    if sigma not in f.cones:
        raise ConeNotInFan(f"no cone with rays {sorted(sigma)}")
    faces = _faces(f, sigma)
    m_labels = [f"M[{i}]" for i in range(f.rank)]
    terms = [m_labels]
    blocks = []  # per term: list of (chain, offset, size)
    for length in range(1, len(faces) + 1):
        chains = _chains(faces, length)
        if not chains:
            break
        labels, layout, off = [], [], 0
        for ch in chains:
            size = len(_lattice(f, ch[-1]))
            layout.append((ch, off, size))
            labels += [f"{_label(ch)}#{k}" for k in range(size)]
            off += size
        terms.append(labels)
        blocks.append(layout)
    maps = []
    # augmentation
    if blocks:
        d0 = [[0] * len(terms[1]) for _ in range(f.rank)]
        for ch, off, size in blocks[0]:
            inc = _inclusion(f, ch[0], None)
            for r in range(f.rank):
                for c in range(size):
                    d0[r][off + c] = inc[r][c]
        maps.append(d0)
    for i in range(1, len(blocks)):
        target = {ch: (off, size) for ch, off, size in blocks[i - 1]}
        d = [[0] * len(terms[i + 1]) for _ in range(len(terms[i]))]
        for ch, off, size in blocks[i]:
            for j in range(len(ch)):
                face = ch[:j] + ch[j + 1:]
                toff, tsize = target[face]
                sign = -1 if j % 2 else 1
                if j < len(ch) - 1:
                    mat = [[int(r == c) for c in range(size)] for r in range(tsize)]
                else:
                    mat = _inclusion(f, ch[-1], ch[-2])
                for r in range(tsize):
                    for c in range(size):
                        d[toff + r][off + c] += sign * mat[r][c]
        maps.append(d)
    if corrupt and len(maps) >= 2:
        ch, off, size = blocks[1][0]
        toff, tsize = {c: (o, s) for c, o, s in blocks[0]}[ch[1:]]
        for r in range(tsize):
            for c in range(size):
                maps[1][toff + r][off + c] *= -1
    return ChainComplex(terms, maps, [[ch for ch, _, _ in layout] for layout in blocks])


def surjections(n, k):
    """Number of surjections from an ``n``-set onto a ``k``-set."""
    return sum((-1) ** j * math.comb(k, j) * (k - j) ** n for j in range(k + 1))


def expected_chain_counts(dim):
    """Chains of each length among nonzero faces of a simplicial cone of dimension ``dim``."""
    return [surjections(dim, i + 1) + surjections(dim, i + 2) for i in range(dim)]


def check_ghost_resolution(f, p_cone, *, corrupt=False):
    """True iff the stalk complex is exact with cokernel ``M/<p_cone>``."""
    c = ghost_resolution_complex(f, p_cone, corrupt=corrupt)
    try:
        hs = homology(c)
    except NotAComplex:
        return False
    if any(h != (0, []) for h in hs[1:]):
        return False
    sigma = frozenset(p_cone)
    span = len(_lattice(f, sigma)) if sigma else 0
    return hs[0] == (f.rank - span, [])


def catalog_ghost_checks():
    """``[(space, stratum, cone, passed)]`` over every stalk of every catalog fan."""
    from . import catalog
    out = []
    for name in catalog.names():
        space = catalog.entry(name).space
        for s in space.strata:
            for cone in s.fan.cones:
                out.append((name, s.id, tuple(sorted(cone)), check_ghost_resolution(s.fan, cone)))
    return out


# ---------------------------------------------------------------------------
# the joint telescope


@dataclass
class PLHom:
    """A piecewise linear map from a smooth complete rank-2 fan to ``Z^k``.

    ``values`` maps each ray generator to its image; on a smooth fan these
    determine the linear map on every maximal cone.
    """

    fan: Fan
    values: dict

    def __post_init__(self):
        if not is_smooth(self.fan):
            raise NotSmooth("PL homomorphisms are parameterized on smooth fans only")
        self.values = {primitive(r): tuple(v) for r, v in self.values.items()}
        ks = {len(v) for v in self.values.values()}
        if len(ks) != 1 or set(self.values) != set(self.fan.rays):
            raise ValueError("need one value of a common length per ray")
        self.k = ks.pop()

    def on_cone(self, a, b, m):
        """Evaluate the linear map of the cone spanned by rays ``a, b`` at ``m``."""
        det = a[0] * b[1] - a[1] * b[0]
        alpha = (m[0] * b[1] - m[1] * b[0]) // det
        beta = (a[0] * m[1] - a[1] * m[0]) // det
        ta, tb = self.values[a], self.values[b]
        return tuple(alpha * x + beta * y for x, y in zip(ta, tb))

    def check_agreement(self):
        """The two cones meeting along each ray give the same value on it."""
        order = cyclic_ray_order(self.fan)
        n = len(order)
        for i in range(n):
            r = order[i]
            if self.on_cone(order[i - 1], r, r) != self.on_cone(r, order[(i + 1) % n], r):
                return False
        return True


def _pairing_one(d, ray):
    p = dot(d, ray)
    if p not in (1, -1):
        raise NotSmooth(f"<{d}, {ray}> = {p}; no pairing-one vector from the next ray")
    return ray if p == 1 else (-ray[0], -ray[1])


def joint_lemma_trial(h, k=None, *, shift=0):
    """Telescope residuals ``sum_i <e_j, d_i> a_i`` for ``j = 1, 2``.

    ``a_i = mu_{i-1}(-v_i) + mu_i(v_i)`` where ``mu_i`` is the map on the cone
    ``(r_i, r_{i+1})`` and ``v_i`` is the next ray adjusted to pair to one with
    ``d_i``, moved by ``shift * r_i``. Returns two vectors in ``Z^k``.
    """
    k = h.k if k is None else k
    order = cyclic_ray_order(h.fan)
    n = len(order)
    totals = [[0] * k, [0] * k]
    for i in range(n):
        r, nxt, prev = order[i], order[(i + 1) % n], order[i - 1]
        d = primitive_normal(h.fan, r, nxt)
        v0 = _pairing_one(d, nxt)
        v = (v0[0] + shift * r[0], v0[1] + shift * r[1])
        before = h.on_cone(prev, r, (-v[0], -v[1]))
        after = h.on_cone(r, nxt, v)
        a = [x + y for x, y in zip(before, after)]
        for j in range(2):
            for t in range(k):
                totals[j][t] += d[j] * a[t]
    return tuple(tuple(x) for x in totals)


def stellar_fan(rng, max_rays):
    """Iterated stellar subdivision of the fan of ``P1 x P1`` (smooth and complete)."""
    rays = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    for _ in range(rng.randint(0, max(0, max_rays - 4))):
        i = rng.randrange(len(rays))
        a, b = rays[i], rays[(i + 1) % len(rays)]
        rays.insert(i + 1, (a[0] + b[0], a[1] + b[1]))
    n = len(rays)
    return Fan(2, rays, [(i,) for i in range(n)] + [(i, (i + 1) % n) for i in range(n)],
               check=False)


@dataclass
class TrialResult:
    index: int
    rays: int
    residual: tuple
    shifted_residual: tuple
    shift: int

    @property
    def passed(self):
        zero = ((0,) * len(self.residual[0]),) * 2
        return self.residual == zero and self.shifted_residual == self.residual

    def line(self, seed):
        return (f"seed {seed} trial {self.index} rays {self.rays} "
                f"{'pass' if self.passed else 'FAIL residual ' + str(self.residual)}")


@dataclass
class FuzzReport:
    seed: int
    trials: list = field(default_factory=list)
    data: dict = field(default_factory=dict)  # index -> (rays, values) for failures

    @property
    def passed(self):
        return all(t.passed for t in self.trials)

    def lines(self):
        return [t.line(self.seed) for t in self.trials]

    def to_json(self):
        return {"seed": self.seed, "passed": self.passed,
                "trials": [{"index": t.index, "rays": t.rays, "passed": t.passed,
                            "residual": [list(x) for x in t.residual], "shift": t.shift}
                           for t in self.trials],
                "failures": {str(i): d for i, d in self.data.items()}}


def fuzz_joint_lemma(seed=0, trials=100, max_rays=12, k=3, bound=10 ** 6):
    """Seeded random trials of the telescope identity and its ``v_i`` independence."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if max_rays < 4 or k < 1:
        raise ValueError("need max_rays >= 4 and k >= 1")
    report = FuzzReport(seed)
    for t in range(trials):
        rng = random.Random(f"{seed}:{t}")
        fan = stellar_fan(rng, max_rays)
        values = {r: tuple(rng.randint(-bound, bound) for _ in range(k)) for r in fan.rays}
        h = PLHom(fan, values)
        shift = rng.choice([s for s in range(-5, 6) if s])
        res = TrialResult(t, len(fan.rays), joint_lemma_trial(h), joint_lemma_trial(h, shift=shift),
                          shift)
        if not res.passed:
            report.data[t] = {"rays": [list(r) for r in fan.rays],
                              "values": [list(values[r]) for r in fan.rays]}
        report.trials.append(res)
    return report
