"""Symbolic minimal unitary dilation of an isometric semigroup part.

A dilation vector is a finite combination of blocks (s, h): the block (s, h)
stands for U_s* h, where h lives in the original carrier and U is the
dilating unitary group.  All structure is Ore-reduced back onto the
original representation:

* inner:   <(s,h), (t,k)> = <V_u h, V_v k>  with u*s = v*t the least pair;
* U_r:     (s,h) -> (a, V_b h)  with (a,b) the least pair for a*r = b*s;
* U_r*:    (s,h) -> (s*r, h);
* W_n:     (s,h) -> (s, Y_[psi_s(n)] h).

Vector equality means distance zero under the induced form: the symbol
space is a quotient by the Gram kernel, e.g. (t*s, V_t h) is the same
vector as (s, h).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .pairs import PairFamily
from .repspace import CovariantRep, SparseVector


@dataclass(frozen=True, eq=False)
class DilationVector:
    """Blocks keyed by semigroup level: {s: h} stands for sum of U_s* h."""

    blocks: dict = field(default_factory=dict)

    @staticmethod
    def symbol(s, h: SparseVector) -> "DilationVector":
        return DilationVector({s: h})

    @staticmethod
    def build(pairs) -> "DilationVector":
        out: dict = {}
        for s, h in pairs:
            if s in out:
                out[s] = out[s] + h
            else:
                out[s] = h
        return DilationVector({s: h for s, h in out.items() if h.values})

    def __add__(self, other):
        return DilationVector.build(
            list(self.blocks.items()) + list(other.blocks.items())
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "DilationVector":
        return DilationVector.build((s, h.scale(c)) for s, h in self.blocks.items())

    def map_blocks(self, fn) -> "DilationVector":
        return DilationVector.build((s, fn(s, h)) for s, h in self.blocks.items())


class Dilation:
    """The dilation space attached to one covariant representation."""

    def __init__(self, rep: CovariantRep):
        self.rep = rep
        self.family: PairFamily = rep.family

    # -- the pre-Hilbert structure -----------------------------------------

    def embed(self, h: SparseVector) -> DilationVector:
        """The original carrier sits inside as the identity-level block."""
        return DilationVector.symbol(self.family.s_identity, h)

    def inner(self, v: DilationVector, w: DilationVector) -> complex:
        total = 0j
        for s, h in v.blocks.items():
            for t, k in w.blocks.items():
                u, vv = self.family.ore_pair(s, t)
                self.family.require_level(self.family.s_mul(u, s))
                total += self.rep.apply_V(u, h).inner(self.rep.apply_V(vv, k))
        return total

    def raise_blocks(self, v: DilationVector) -> DilationVector:
        """Canonical form: one block at the join level, using the
        identification of (s, h) with (t*s, V_t h).

        Equal vectors raise to coefficientwise equal blocks, which keeps
        norms of differences numerically honest.
        """
        fam = self.family
        if len(v.blocks) <= 1:
            return v
        levels = list(v.blocks)
        top = levels[0]
        for s in levels[1:]:
            top = fam.s_join(top, s)
        fam.require_level(top)
        total = SparseVector({})
        for s, h in v.blocks.items():
            t = fam.s_divide(top, s)
            total = total + self.rep.apply_V(t, h)
        return DilationVector.symbol(top, total)

    def norm(self, v: DilationVector) -> float:
        raised = self.raise_blocks(v)
        if not raised.blocks:
            return 0.0
        (_, h), = raised.blocks.items()
        return h.norm()

    def distance(self, v: DilationVector, w: DilationVector) -> float:
        return self.norm(v - w)

    def gram(self, vectors) -> np.ndarray:
        n = len(vectors)
        g = np.zeros((n, n), dtype=complex)
        for i in range(n):
            for j in range(i, n):
                val = self.inner(vectors[i], vectors[j])
                g[i, j] = val
                g[j, i] = val.conjugate() if i != j else val
        return g

    def gram_min_eigenvalue(self, vectors) -> float:
        if len(vectors) > 200:
            raise ConfigError("Gram computations are capped at 200 vectors")
        g = self.gram(vectors)
        return float(np.linalg.eigvalsh((g + g.conj().T) / 2.0)[0])

    # -- the unitary group ----------------------------------------------------

    def apply_Ustar(self, r, v: DilationVector) -> DilationVector:
        fam = self.family
        fam.validate_s(r)
        out = []
        for s, h in v.blocks.items():
            deeper = fam.s_mul(s, r)
            fam.require_level(deeper)
            out.append((deeper, h))
        return DilationVector.build(out)

    def apply_Us(self, r, v: DilationVector) -> DilationVector:
        """U_r for r in the semigroup."""
        fam = self.family
        fam.validate_s(r)
        out = []
        for s, h in v.blocks.items():
            a, b = fam.ore_pair(r, s)
            fam.require_level(fam.s_mul(a, r))
            out.append((a, self.rep.apply_V(b, h)))
        return DilationVector.build(out)

    def apply_U(self, g, v: DilationVector) -> DilationVector:
        """U_g for g = s^-1 t in the enveloping group."""
        fam = self.family
        s, t = fam.g_reduce(g)
        out = v
        if t != fam.s_identity:
            out = self.apply_Us(t, out)
        if s != fam.s_identity:
            out = self.apply_Ustar(s, out)
        return out

    # -- the dilated unitaries over N -----------------------------------------

    def apply_W(self, n, v: DilationVector) -> DilationVector:
        fam = self.family
        return v.map_blocks(
            lambda s, h: self.rep.apply_Y(fam.canon(fam.psi_s(s, n)), h)
        )

    def project_block(self, s, h: SparseVector) -> DilationVector:
        """Projection of the block (s, h) onto the fixed space of the
        subgroup unitaries: average the index(s) translations from the
        solution set over the identity coset."""
        fam = self.family
        w = 1.0 / fam.index(s)
        total = SparseVector({})
        for m in fam.coset_reps(s):
            total = total + self.rep.apply_Y(fam.canon(fam.psi_s(s, m)), h).scale(w)
        return DilationVector.symbol(s, total)

    def project_fixed(self, v: DilationVector) -> DilationVector:
        out = DilationVector({})
        for s, h in v.blocks.items():
            out = out + self.project_block(s, h)
        return out


@dataclass(frozen=True)
class CompressedRep:
    """The covariant pair recovered from a dilation by restricting the
    unitaries to the fixed space and compressing."""

    dilation: Dilation
    apply_Y: object
    apply_V: object
    apply_Vstar: object
    fixed_basis: list
    excess_residuals: list


def restrict_compress(
    dil: Dilation, truncation, h_basis, tol: float = 1e-9
) -> CompressedRep:
    """Compute the fixed space inside the truncated symbol span and restrict.

    ``truncation`` is a finite set of semigroup levels; ``h_basis`` a finite
    spanning sample of the original carrier.  Reports (without failing) if
    the truncated fixed space is strictly larger than the embedded carrier.
    """
    fam = dil.family
    # The embedded comparison span must be closed under the compressed
    # adjoints: the fixed-space projection of a block (s, h) lies over the
    # adjoint image of h, not over h itself.
    carrier = list(h_basis)
    for s in truncation:
        fam.validate_s(s)
        carrier.extend(dil.rep.apply_Vstar(s, h) for h in h_basis)
    embedded = [dil.embed(h) for h in carrier]
    fixed = []
    for s in truncation:
        for h in h_basis:
            fixed.append(dil.project_fixed(DilationVector.symbol(s, h)))

    # Residual distance of each fixed vector from the span of the embedded
    # carrier; a strict excess is diagnostic, not an error.
    excess = []
    ge = dil.gram(embedded)
    for f in fixed:
        # Normal equations: sum_i x_i <e_i, e_k> = <f, e_k> for every k.
        rhs = np.array([dil.inner(f, e) for e in embedded])
        coeffs, *_ = np.linalg.lstsq(ge.T, rhs, rcond=None)
        coeffs = np.asarray(coeffs).reshape(-1)
        approx = DilationVector({})
        for c, e in zip(coeffs, embedded):
            approx = approx + e.scale(complex(c))
        residual = dil.distance(f, approx)
        if residual > tol:
            excess.append(residual)

    def apply_Y(n, v):
        return dil.apply_W(n, v)

    def apply_V(s, v):
        return dil.apply_Us(s, v)

    def apply_Vstar(s, v):
        return dil.project_fixed(dil.apply_Ustar(s, v))

    return CompressedRep(dil, apply_Y, apply_V, apply_Vstar, fixed, excess)
