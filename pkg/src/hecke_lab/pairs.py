"""Concrete Hecke-pair families (N, M, S, G, psi) with exact arithmetic.

Three families ship:

* ``bost-connes``: S = positive integers under multiplication, G = positive
  rationals, N = Q, psi_g(r) = r/g, M = Z.
* ``padic(p)``: S = naturals under addition, G = Z, N = Z[1/p],
  psi_n(r) = r/p^n, M = Z.
* ``matrix(F, M)``: S = N^2, G = Z^2, N = union of F^-m M^-n Z^d inside Q^d,
  psi_(m,n) = F^-m M^-n, subgroup Z^d.

Every operation is pure; elements are plain hashable Python values
(Fractions, ints, tuples), canonicalized before they are used as keys.
S carries the right-invariant direction s <= t iff t is an S-multiple of s,
which is a lattice order for all three families, so Ore pairs are computed
from deterministic least upper bounds.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError, LevelCapError
from .lattice import (
    hermite_normal_form,
    hnf_box_count,
    hnf_reduce,
    int_det,
    iter_hnf_box,
    mat_inv,
    mat_mul,
    mat_pow,
    mat_vec,
)

ENV_LEVEL_CAP = "HECKE_LAB_LEVEL_CAP"

# Enumeration refuses to materialize quotients larger than this.
ENUMERATION_CAP = 2_000_000


def _env_cap():
    raw = os.environ.get(ENV_LEVEL_CAP)
    if raw is None:
        return None
    try:
        parts = [int(x) for x in raw.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad {ENV_LEVEL_CAP}={raw!r}") from exc
    return parts


class PairFamily:
    """Shared surface of the shipped families.

    Subclasses fix the element domains and implement the primitive
    arithmetic; everything downstream (towers, algebras, dilations) only
    goes through this interface.
    """

    tag: str

    # -- S as a directed monoid -------------------------------------------

    @property
    def s_identity(self):
        raise NotImplementedError

    def s_mul(self, s, t):
        raise NotImplementedError

    def s_divide(self, t, s):
        """Return r with t = r * s, or None when s does not divide t."""
        raise NotImplementedError

    def s_leq(self, s, t) -> bool:
        return self.s_divide(t, s) is not None

    def s_join(self, s, t):
        raise NotImplementedError

    def ore_pair(self, s, t):
        """Deterministic (u, v) with u*s = v*t, via the least upper bound."""
        j = self.s_join(s, t)
        u = self.s_divide(j, s)
        v = self.s_divide(j, t)
        if u is None or v is None:
            raise ConfigError(f"join {j!r} is not a common multiple of {s!r}, {t!r}")
        return u, v

    def validate_s(self, s):
        raise NotImplementedError

    # -- G as the enveloping group ----------------------------------------

    @property
    def g_identity(self):
        raise NotImplementedError

    def g_from_s(self, s):
        raise NotImplementedError

    def g_mul(self, g, h):
        raise NotImplementedError

    def g_inv(self, g):
        raise NotImplementedError

    def g_reduce(self, g):
        """Write g = s^-1 t with s, t in S sharing no common S-factor."""
        raise NotImplementedError

    # -- N and the action --------------------------------------------------

    @property
    def n_identity(self):
        raise NotImplementedError

    def n_add(self, a, b):
        raise NotImplementedError

    def n_neg(self, a):
        raise NotImplementedError

    def psi(self, g, n):
        raise NotImplementedError

    def psi_s(self, s, n):
        return self.psi(self.g_from_s(s), n)

    def psi_s_inv(self, s, n):
        return self.psi(self.g_inv(self.g_from_s(s)), n)

    def in_M(self, n) -> bool:
        raise NotImplementedError

    def in_level_subgroup(self, n, s) -> bool:
        """Membership in psi_s^-1(M)."""
        return self.in_M(self.psi_s(s, n))

    # -- quotients ----------------------------------------------------------

    def canon(self, n, s=None):
        """Canonical representative of n modulo psi_s^-1(M); s=None means M."""
        raise NotImplementedError

    def index(self, s) -> int:
        """The subgroup index of psi_s^-1(M) in M."""
        raise NotImplementedError

    def iter_coset_reps(self, s):
        """Stream the canonical representatives of M / psi_s^-1(M)."""
        raise NotImplementedError

    def coset_reps(self, s):
        self.validate_s(s)
        count = self.index(s)
        if count > ENUMERATION_CAP:
            raise LevelCapError(
                f"{self.tag}: quotient of size {count} exceeds the enumeration cap"
            )
        return list(self.iter_coset_reps(s))

    def psi_reps(self, s):
        """Cached images psi_s(m) of the level-s transversal."""
        cache = getattr(self, "_psi_reps_cache", None)
        if cache is None:
            cache = {}
            self._psi_reps_cache = cache
        out = cache.get(s)
        if out is None:
            count = self.index(s)
            if count > ENUMERATION_CAP:
                raise LevelCapError(
                    f"{self.tag}: quotient of size {count} exceeds the enumeration cap"
                )
            out = tuple(self.psi_s(s, m) for m in self.iter_coset_reps(s))
            cache[s] = out
        return out

    def solve_coset(self, s, n):
        """All cosets mM with psi_s^-1(m) = n modulo M, as canonical reps.

        The action is additive on these families, so the solutions are the
        translates of psi_s(n) by the transversal images; distinct
        transversal classes give distinct solutions.
        """
        self.validate_s(s)
        base = self.psi_s(s, self.canon(n))
        return [self.canon(self.n_add(base, pm)) for pm in self.psi_reps(s)]

    # -- caps ----------------------------------------------------------------

    def require_level(self, s):
        """Raise LevelCapError when s exceeds the configured cap."""
        raise NotImplementedError

    def separating_level(self, n, search=64):
        """Some s with n outside psi_s^-1(M), witnessing trivial intersection."""
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError

    # -- element serialization ------------------------------------------------

    def n_to_json(self, n):
        raise NotImplementedError

    def n_from_json(self, data):
        raise NotImplementedError

    def s_to_json(self, s):
        raise NotImplementedError

    def s_from_json(self, data):
        raise NotImplementedError

    def g_to_json(self, g):
        raise NotImplementedError

    def g_from_json(self, data):
        raise NotImplementedError


def frac_to_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def frac_from_json(data) -> Fraction:
    if isinstance(data, str):
        num, _, den = data.partition("/")
        return Fraction(int(num), int(den) if den else 1)
    if isinstance(data, int):
        return Fraction(data)
    raise ConfigError(f"cannot parse rational from {data!r}")


class BostConnesFamily(PairFamily):
    """N = Q, M = Z, S = positive integers, psi_s(r) = r/s."""

    tag = "bost-connes"

    def __init__(self, level_cap: int = 5040):
        env = _env_cap()
        self.level_cap = env[0] if env else level_cap

    s_identity = property(lambda self: 1)
    g_identity = property(lambda self: Fraction(1))
    n_identity = property(lambda self: Fraction(0))

    def validate_s(self, s):
        if not isinstance(s, int) or s < 1:
            raise ConfigError(f"bost-connes semigroup elements are positive ints, got {s!r}")

    def s_mul(self, s, t):
        return s * t

    def s_divide(self, t, s):
        return t // s if t % s == 0 else None

    def s_join(self, s, t):
        return s * t // math.gcd(s, t)

    def g_from_s(self, s):
        return Fraction(s)

    def g_mul(self, g, h):
        return g * h

    def g_inv(self, g):
        return 1 / g

    def g_reduce(self, g):
        return g.denominator, g.numerator

    def n_add(self, a, b):
        return a + b

    def n_neg(self, a):
        return -a

    def psi(self, g, n):
        return n / g

    def in_M(self, n) -> bool:
        return n.denominator == 1

    def canon(self, n, s=None):
        mod = 1 if s is None else s
        return n % mod

    def index(self, s) -> int:
        self.validate_s(s)
        return s

    def iter_coset_reps(self, s):
        for k in range(s):
            yield Fraction(k)

    def require_level(self, s):
        if s > self.level_cap:
            raise LevelCapError(f"bost-connes level {s} exceeds cap {self.level_cap}")

    def separating_level(self, n, search=64):
        if n.denominator > 1:
            return 1
        if n == 0:
            raise ConfigError("the identity lies in every level subgroup")
        return abs(n.numerator) + 1

    def to_config(self):
        return {"family": self.tag}

    def n_to_json(self, n):
        return frac_to_str(n)

    def n_from_json(self, data):
        return frac_from_json(data)

    def s_to_json(self, s):
        return s

    def s_from_json(self, data):
        return int(data)

    def g_to_json(self, g):
        return frac_to_str(g)

    def g_from_json(self, data):
        return frac_from_json(data)


class PadicFamily(PairFamily):
    """N = Z[1/p], M = Z, S = naturals under addition, psi_l(r) = r/p^l."""

    tag = "padic"

    def __init__(self, p: int, index_cap: int = 5040):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ConfigError(f"padic family needs a prime, got {p}")
        self.p = p
        env = _env_cap()
        self.index_cap = env[0] if env else index_cap

    s_identity = property(lambda self: 0)
    g_identity = property(lambda self: 0)
    n_identity = property(lambda self: Fraction(0))

    def validate_s(self, s):
        if not isinstance(s, int) or s < 0:
            raise ConfigError(f"padic semigroup elements are naturals, got {s!r}")

    def s_mul(self, s, t):
        return s + t

    def s_divide(self, t, s):
        return t - s if t >= s else None

    def s_join(self, s, t):
        return max(s, t)

    def g_from_s(self, s):
        return s

    def g_mul(self, g, h):
        return g + h

    def g_inv(self, g):
        return -g

    def g_reduce(self, g):
        return (-g, 0) if g < 0 else (0, g)

    def n_add(self, a, b):
        return a + b

    def n_neg(self, a):
        return -a

    def psi(self, g, n):
        return n / Fraction(self.p) ** g

    def in_M(self, n) -> bool:
        return n.denominator == 1

    def canon(self, n, s=None):
        mod = 1 if s is None else self.p**s
        return n % mod

    def index(self, s) -> int:
        self.validate_s(s)
        return self.p**s

    def iter_coset_reps(self, s):
        for k in range(self.p**s):
            yield Fraction(k)

    def require_level(self, s):
        if self.p**s > self.index_cap:
            raise LevelCapError(
                f"padic level {s} has index {self.p**s} above cap {self.index_cap}"
            )

    def separating_level(self, n, search=64):
        if n.denominator > 1:
            return 0
        if n == 0:
            raise ConfigError("the identity lies in every level subgroup")
        k = abs(n.numerator)
        l = 0
        while k % self.p == 0:
            k //= self.p
            l += 1
        return l + 1

    def to_config(self):
        return {"family": self.tag, "p": self.p}

    def n_to_json(self, n):
        return frac_to_str(n)

    def n_from_json(self, data):
        return frac_from_json(data)

    def s_to_json(self, s):
        return s

    def s_from_json(self, data):
        return int(data)

    g_to_json = s_to_json
    g_from_json = s_from_json


class MatrixFamily(PairFamily):
    """N spanned by backward orbits of two commuting integer matrices.

    Standing hypotheses, checked at construction: |det F| > 1, |det Mmat| > 1,
    gcd(det F, det Mmat) = 1, and F * Mmat = Mmat * F.
    """

    tag = "matrix"

    def __init__(self, F, Mmat, level_cap=(4, 4)):
        self.F = [list(map(int, row)) for row in F]
        self.Mmat = [list(map(int, row)) for row in Mmat]
        self.dim = len(self.F)
        if any(len(row) != self.dim for row in self.F) or len(self.Mmat) != self.dim \
                or any(len(row) != self.dim for row in self.Mmat):
            raise ConfigError("matrix family needs two square matrices of equal size")
        self.detF = int_det(self.F)
        self.detM = int_det(self.Mmat)
        if abs(self.detF) <= 1 or abs(self.detM) <= 1:
            raise ConfigError("matrix family needs |det| > 1 for both matrices")
        if math.gcd(self.detF, self.detM) != 1:
            raise ConfigError("matrix family needs coprime determinants")
        if mat_mul(self.F, self.Mmat) != mat_mul(self.Mmat, self.F):
            raise ConfigError("matrix family needs commuting matrices")
        env = _env_cap()
        if env:
            self.level_cap = tuple(env) if len(env) == 2 else (env[0], env[0])
        else:
            self.level_cap = tuple(level_cap)
        self._pow_cache = {}
        self._hnf_cache = {}

    s_identity = property(lambda self: (0, 0))
    g_identity = property(lambda self: (0, 0))

    @property
    def n_identity(self):
        return tuple(Fraction(0) for _ in range(self.dim))

    def validate_s(self, s):
        if (
            not isinstance(s, tuple)
            or len(s) != 2
            or not all(isinstance(c, int) and c >= 0 for c in s)
        ):
            raise ConfigError(f"matrix semigroup elements are pairs of naturals, got {s!r}")

    def s_mul(self, s, t):
        return (s[0] + t[0], s[1] + t[1])

    def s_divide(self, t, s):
        d = (t[0] - s[0], t[1] - s[1])
        return d if d[0] >= 0 and d[1] >= 0 else None

    def s_join(self, s, t):
        return (max(s[0], t[0]), max(s[1], t[1]))

    def g_from_s(self, s):
        return s

    def g_mul(self, g, h):
        return (g[0] + h[0], g[1] + h[1])

    def g_inv(self, g):
        return (-g[0], -g[1])

    def g_reduce(self, g):
        s = (max(-g[0], 0), max(-g[1], 0))
        t = (g[0] + s[0], g[1] + s[1])
        return s, t

    def n_add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def n_neg(self, a):
        return tuple(-x for x in a)

    def _matrix_power(self, g):
        """F^a M^b for integer exponents, as an exact rational matrix."""
        key = g
        cached = self._pow_cache.get(key)
        if cached is not None:
            return cached
        a, b = g
        fa = mat_pow(self.F, abs(a)) if a >= 0 else None
        if a < 0:
            fa = mat_inv(mat_pow(self.F, -a))
        mb = mat_pow(self.Mmat, abs(b)) if b >= 0 else None
        if b < 0:
            mb = mat_inv(mat_pow(self.Mmat, -b))
        out = mat_mul(fa, mb)
        self._pow_cache[key] = out
        return out

    def psi(self, g, n):
        # psi_(a,b) = F^-a M^-b
        return mat_vec(self._matrix_power((-g[0], -g[1])), n)

    def in_M(self, n) -> bool:
        return all(x.denominator == 1 for x in n)

    def _hnf(self, s):
        cached = self._hnf_cache.get(s)
        if cached is None:
            cached = hermite_normal_form(mat_mul(mat_pow(self.F, s[0]), mat_pow(self.Mmat, s[1])))
            self._hnf_cache[s] = cached
        return cached

    def canon(self, n, s=None):
        if s is None:
            return tuple(x % 1 for x in n)
        return hnf_reduce(self._hnf(s), n)

    def index(self, s) -> int:
        self.validate_s(s)
        return abs(self.detF) ** s[0] * abs(self.detM) ** s[1]

    def iter_coset_reps(self, s):
        for v in iter_hnf_box(self._hnf(s)):
            yield tuple(Fraction(c) for c in v)

    def enumeration_count(self, s) -> int:
        """Size of the canonical-box enumeration, without materializing it."""
        return hnf_box_count(self._hnf(s))

    def require_level(self, s):
        if s[0] > self.level_cap[0] or s[1] > self.level_cap[1]:
            raise LevelCapError(f"matrix level {s} exceeds cap {self.level_cap}")

    def denominator_level(self, n):
        """Componentwise-least (a, b) with F^a M^b n integral.

        Coprimality of the determinants decouples the two exponents, so the
        minimum exists.
        """
        def clears(mat_primes, vec):
            return all(math.gcd(x.denominator, mat_primes) == 1 for x in vec)

        a = 0
        vec = n
        while not clears(self.detF, vec):
            vec = mat_vec(self.F, vec)
            a += 1
            if a > 64:
                raise ConfigError(f"{n!r} does not lie in the inductive limit group")
        b = 0
        vec = n
        while not clears(self.detM, vec):
            vec = mat_vec(self.Mmat, vec)
            b += 1
            if b > 64:
                raise ConfigError(f"{n!r} does not lie in the inductive limit group")
        if not self.in_M(self.psi((-a, -b), n)):
            raise ConfigError(f"{n!r} has denominators outside the family's primes")
        return (a, b)

    def separating_level(self, n, search=64):
        if all(x == 0 for x in n):
            raise ConfigError("the identity lies in every level subgroup")
        for k in range(search):
            s = (k, k)
            if not self.in_level_subgroup(n, s):
                return s
        raise ConfigError(f"no separating level below {search} for {n!r}")

    def to_config(self):
        return {"family": self.tag, "F": self.F, "M": self.Mmat}

    def transpose_family(self) -> "MatrixFamily":
        ft = [[self.F[j][i] for j in range(self.dim)] for i in range(self.dim)]
        mt = [[self.Mmat[j][i] for j in range(self.dim)] for i in range(self.dim)]
        return MatrixFamily(ft, mt, level_cap=self.level_cap)

    def n_to_json(self, n):
        return [frac_to_str(x) for x in n]

    def n_from_json(self, data):
        return tuple(frac_from_json(x) for x in data)

    def s_to_json(self, s):
        return list(s)

    def s_from_json(self, data):
        return (int(data[0]), int(data[1]))

    g_to_json = s_to_json
    g_from_json = s_from_json


@dataclass(frozen=True)
class SemidirectElement:
    """An element (n, g) of the semidirect product N x| G."""

    n: object
    g: object

    def mul(self, family: PairFamily, other: "SemidirectElement") -> "SemidirectElement":
        return SemidirectElement(
            family.n_add(self.n, family.psi(self.g, other.n)),
            family.g_mul(self.g, other.g),
        )

    def inv(self, family: PairFamily) -> "SemidirectElement":
        gi = family.g_inv(self.g)
        return SemidirectElement(family.psi(gi, family.n_neg(self.n)), gi)


def family_from_config(config: dict) -> PairFamily:
    """Build a family from a descriptor like {"family": "matrix", "F": ..., "M": ...}."""
    if not isinstance(config, dict) or "family" not in config:
        raise ConfigError(f"family descriptor must be a dict with a 'family' key: {config!r}")
    tag = config["family"]
    if tag == "bost-connes":
        return BostConnesFamily()
    if tag == "padic":
        if "p" not in config:
            raise ConfigError("padic family descriptor needs a prime 'p'")
        return PadicFamily(int(config["p"]))
    if tag == "matrix":
        if "F" not in config or "M" not in config:
            raise ConfigError("matrix family descriptor needs integer matrices 'F' and 'M'")
        return MatrixFamily(config["F"], config["M"])
    raise ConfigError(f"unknown family tag {tag!r}")


SHIPPED_FAMILIES = ("bost-connes", "padic", "matrix")
