"""Homotopy transfer of the multiplication along a retraction.

Given a retraction (include f1, project pi, homotopy G) of a DGA onto
its homology, the minimal structure on homology is computed by the
rooted-tree recursion

    ghat[a]           = eta * f1(a)                      (single letter)
    ghat[a_1 .. a_k]  = G(lam[a_1 .. a_k])               (k >= 2)
    lam[a_1 .. a_n]   = sum over s + t = n, s,t >= 1 of
        sign(s, t) * (-1)^((t-1) * (|a_1| + .. + |a_s|))
        * ghat[a_1 .. a_s] * ghat[a_{s+1} .. a_n]
    m_n = pi o lam                                        (n >= 2)

with every choice (the splitting sign and eta) pinned below; the second
factor's operator degree t - 1 moving past the first s inputs is the
Koszul factor written out.  Evaluations are memoized per contiguous
subword, so sweeping all words of a given arity shares almost all work.

The module also houses the cochain-side pipeline: endomorphism DGA ->
retraction -> pattern gate -> transfer -> canonical renaming, plus the
comparison helpers the verification commands and tests are built from.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .ainf import (
    AInfinityAlgebra,
    HypothesisParams,
    MultiOp,
    NormalizedModel,
    enumerate_words,
    epsilon_sign,
    normalize_generators,
)
from .dga import Contraction, DGAlgebra, MasseyReport, contraction, massey_power
from .glin import Bidegree, GradedVectorSpace, TruncationExceeded
from .grp import GroupParams, build_end_dga, expected_minimal_model

__all__ = [
    "RECURSION_SIGNS",
    "TransferConventions",
    "MerkulovTransfer",
    "PatternMismatch",
    "check_pattern",
    "pattern_renaming",
    "GroupComputation",
    "group_minimal_model",
    "compare_models",
    "MasseyComparison",
    "massey_versus_transfer",
]

Vector = dict[str, int]

# Candidate signs for the splitting s + t = n in the recursion; the pinned
# choice must make the identity sweep vanish and the rebased product table
# the literal monomial ring.
RECURSION_SIGNS: dict[str, Callable[[int, int], int]] = {
    "plus": lambda s, t: 1,
    "s": lambda s, t: (-1) ** (s % 2),
    "s+1": lambda s, t: (-1) ** ((s + 1) % 2),
    "t": lambda s, t: (-1) ** (t % 2),
    "st": lambda s, t: (-1) ** ((s * t) % 2),
    "s(t+1)": lambda s, t: (-1) ** ((s * (t + 1)) % 2),
    "(s+1)t": lambda s, t: (-1) ** (((s + 1) * t) % 2),
    "st+s+t": lambda s, t: (-1) ** ((s * t + s + t) % 2),
}

# The split sign (-1)^(st+s), together with the operator-degree factor
# (-1)^((t-1)|prefix|) applied when the suffix map crosses the prefix
# inputs, is what the sign-free coassociative recursion on the suspended
# tensor coalgebra becomes after unsuspension; it matches the identity
# convention sum (-1)^(r+st) m(1^r x m_s x 1^t) = 0 used in `ainf`.
#
# It is also pinned empirically.  On the default chain bases all eight
# candidates pass the identity sweeps and the four with sign(1,1) = +1
# even reproduce the closed-form tables, but the degeneracy is an
# accident of those bases: scrambling the basis order inside each
# bidegree (a different but equally valid retraction) breaks the sweeps
# for every candidate except "s(t+1)", which keeps the sweeps green and
# yields the same normalized tables as the default order.  Minimal
# models here admit no gauge freedom in low arities (no bidegree
# supports a nonzero correction term), so agreeing after normalization
# is the strongest available check, and only this rule achieves it.
TRANSFER_RECURSION = "s(t+1)"
TRANSFER_ETA = 1


@dataclass(frozen=True)
class TransferConventions:
    recursion: str = TRANSFER_RECURSION
    eta: int = TRANSFER_ETA

    def sign(self, s: int, t: int) -> int:
        return RECURSION_SIGNS[self.recursion](s, t)


class MerkulovTransfer:
    """Memoized evaluator for the transferred operations of one retraction.

    `publish` is the part of the homology whose operation tables are read
    off; the retraction itself should extend at least arity_bound - 2
    degrees below it so every inner evaluation of a published word stays
    in the trusted range (unit letters spend arity without spending
    degree, which is what makes the worst case that deep).
    """

    def __init__(self, con: Contraction, arity_bound: int,
                 conventions: TransferConventions | None = None,
                 publish: GradedVectorSpace | None = None) -> None:
        self.con = con
        self.dga = con.dga
        self.arity_bound = arity_bound
        self.conventions = conventions or TransferConventions()
        self.publish = publish if publish is not None else con.homology
        self._lam: dict[tuple[str, ...], Vector] = {}
        self._ghat: dict[tuple[str, ...], Vector] = {}

    def _degree(self, h_label: str) -> int:
        return self.con.homology.bidegree_of(h_label).s

    def ghat(self, word: tuple[str, ...]) -> Vector:
        hit = self._ghat.get(word)
        if hit is not None:
            return hit
        if len(word) == 1:
            val = self.con.include({word[0]: 1})
            if self.conventions.eta % self.dga.prime != 1:
                val = {k: (v * self.conventions.eta) % self.dga.prime
                       for k, v in val.items()}
        else:
            val = self.con.homotopy(self.lam(word))
        self._ghat[word] = val
        return val

    def lam(self, word: tuple[str, ...]) -> Vector:
        if len(word) < 2:
            raise ValueError("lam needs at least two inputs")
        hit = self._lam.get(word)
        if hit is not None:
            return hit
        p = self.dga.prime
        total: Vector = {}
        n = len(word)
        for s in range(1, n):
            t = n - s
            # zero on either side kills the term even when the other side
            # is unknowable (out of window), so probe both before raising
            left = right = None
            try:
                left = self.ghat(word[:s])
            except TruncationExceeded:
                pass
            if left == {}:
                continue
            try:
                right = self.ghat(word[s:])
            except TruncationExceeded:
                pass
            if right == {}:
                continue
            if left is None or right is None:
                raise TruncationExceeded(
                    f"transfer of {word} leaves the window at split {s}")
            sign = self.conventions.sign(s, t)
            if (t - 1) % 2 and sum(self._degree(a) for a in word[:s]) % 2:
                sign = -sign
            prod = self.dga.mult(left, right)
            for lab, c in prod.items():
                total[lab] = (total.get(lab, 0) + sign * c) % p
        total = {k: v for k, v in total.items() if v}
        self._lam[word] = total
        return total

    def op(self, word: tuple[str, ...]) -> Vector:
        """m_n evaluated on a word of homology basis labels."""
        if len(word) > self.arity_bound:
            raise ValueError(f"arity {len(word)} beyond bound {self.arity_bound}")
        return self.con.project(self.lam(word))

    def table(self, n: int) -> tuple[MultiOp, list[tuple[str, ...]]]:
        """Sweep all arity-n published words with in-window output.

        Returns the sparse table and the words whose evaluation left the
        window (unknown, not zero); the memo is shared across arities.
        """
        skeleton = AInfinityAlgebra(space=self.publish, ops={},
                                    arity_bound=self.arity_bound)
        out: MultiOp = {}
        truncated: list[tuple[str, ...]] = []
        for word in enumerate_words(skeleton, n, level="operation"):
            try:
                val = self.op(word)
            except TruncationExceeded:
                truncated.append(word)
                continue
            if val:
                out[word] = val
        return out, truncated

    def minimal_model(self, *, unit: str | None = None,
                      internal_scale: int = 1
                      ) -> tuple[AInfinityAlgebra, dict[int, list]]:
        """Assemble m_2 .. m_arity_bound into a minimal structure."""
        ops: dict[int, MultiOp] = {}
        truncated: dict[int, list] = {}
        for n in range(2, self.arity_bound + 1):
            tab, trunc = self.table(n)
            if tab:
                ops[n] = tab
            if trunc:
                truncated[n] = trunc
        model = AInfinityAlgebra(space=self.publish, ops=ops,
                                 arity_bound=self.arity_bound, unit=unit,
                                 internal_scale=internal_scale)
        return model, truncated


# ---------------------------------------------------------------------------
# pattern gate
# ---------------------------------------------------------------------------

class PatternMismatch(Exception):
    """Computed homology does not match the expected bigraded pattern."""


def check_pattern(hom: GradedVectorSpace, expected: GradedVectorSpace,
                  s_range: tuple[int, int] | None = None) -> None:
    """Require dim-by-dim equality of two bigraded spaces on a range.

    This is the gate between the truncated computation and everything
    downstream: inside the compared range the computed homology must be
    exactly the predicted pattern, so that renaming classes to monomials
    is meaningful and absent blocks really mean zero.
    """
    lo = max(hom.window[0], expected.window[0])
    hi = min(hom.window[1], expected.window[1])
    if s_range is not None:
        lo, hi = max(lo, s_range[0]), min(hi, s_range[1])
    problems = []
    bds = {bd for bd in hom.blocks if lo <= bd.s <= hi}
    bds |= {bd for bd in expected.blocks if lo <= bd.s <= hi}
    for bd in sorted(bds):
        got = len(hom.blocks.get(bd, ()))
        want = len(expected.blocks.get(bd, ()))
        if got != want:
            problems.append(f"at {tuple(bd)}: dim {got}, expected {want}")
    if problems:
        raise PatternMismatch("; ".join(problems))


def pattern_renaming(hom: GradedVectorSpace,
                     expected: GradedVectorSpace) -> dict[str, str]:
    """Bijective relabeling of hom onto expected labels, by bidegree."""
    mapping: dict[str, str] = {}
    for bd, labs in hom.blocks.items():
        want = expected.blocks.get(bd)
        if want is None or len(want) != len(labs):
            raise PatternMismatch(f"no matching block at {tuple(bd)}")
        mapping.update(zip(labs, want))
    return mapping


# ---------------------------------------------------------------------------
# the cochain-side pipeline
# ---------------------------------------------------------------------------

@dataclass
class GroupComputation:
    """Everything produced on the way to a transferred minimal model."""

    params: GroupParams
    dga: DGAlgebra
    con: Contraction            # homology labels renamed to monomials
    transfer: MerkulovTransfer
    model: AInfinityAlgebra     # monomial labels, machine coefficients
    truncated: dict[int, list] = field(default_factory=dict)

    def normalized(self) -> NormalizedModel:
        return normalize_generators(self.model, self.params.hp)

    def expected(self) -> AInfinityAlgebra:
        """Closed-form model over the same published window."""
        return expected_minimal_model(self.params,
                                      window=self.model.space.window,
                                      arity_bound=self.transfer.arity_bound)


def group_minimal_model(params: GroupParams, *,
                        window: tuple[int, int] | None = None,
                        length: int | None = None,
                        arity_bound: int | None = None,
                        reorder: Callable | None = None,
                        conventions: TransferConventions | None = None,
                        require_complete: bool = True
                        ) -> GroupComputation:
    """End-DGA -> retraction -> gate -> transferred minimal model.

    The published window (where operation tables are read off and the
    homology pattern is gated against the closed-form answer) sits
    arity_bound - 1 degrees above the chain-level window floor: inner
    evaluations of a published word reach at most arity_bound - 2 degrees
    below it, so everything they touch is in the retraction's trusted
    range.  Below the published floor the homology may contain truncation
    junk; it is never renamed, enumerated, or read.

    An operation table missing any in-window word would be read downstream
    as zero, so by default a nonempty truncation list is an error (enlarge
    the window instead).
    """
    if arity_bound is None:
        arity_bound = params.default_arity_bound()
    if window is None:
        pub_lo, pub_hi = params.model_window()
        window = (pub_lo - (arity_bound - 1), pub_hi + 1)
    else:
        pub_lo, pub_hi = window[0] + (arity_bound - 1), window[1] - 1
    if pub_lo > pub_hi:
        raise ValueError(f"window {window} too small for arity {arity_bound}")
    dga = build_end_dga(params, window=window, length=length)
    if reorder is not None:
        from .dga import reorder_blocks
        dga = reorder_blocks(dga, reorder)
    con = contraction(dga)
    expected = expected_minimal_model(params, window=(pub_lo, pub_hi),
                                      arity_bound=arity_bound)
    check_pattern(con.homology, expected.space, s_range=(pub_lo, pub_hi))
    published = con.homology.restricted((pub_lo, pub_hi))
    con = con.renamed(pattern_renaming(published, expected.space))
    if con.include({"1": 1}) != dga.unit:
        raise PatternMismatch(
            "the class at bidegree (0, 0) is not represented by the strict "
            "unit of the endomorphism algebra")
    transfer = MerkulovTransfer(
        con, arity_bound, conventions,
        publish=con.homology.restricted((pub_lo, pub_hi)))
    model, truncated = transfer.minimal_model(
        unit="1", internal_scale=params.internal_scale)
    if truncated and require_complete:
        counts = {n: len(ws) for n, ws in truncated.items()}
        raise TruncationExceeded(
            f"operation tables incomplete (words lost per arity: {counts}); "
            "enlarge the window")
    return GroupComputation(params=params, dga=dga, con=con,
                            transfer=transfer, model=model,
                            truncated=truncated)


# ---------------------------------------------------------------------------
# comparison and the Massey cross-check
# ---------------------------------------------------------------------------

def compare_models(got: AInfinityAlgebra, want: AInfinityAlgebra,
                   *, compare_spaces: bool = True) -> list[str]:
    """Human-readable list of differences between two structures."""
    problems: list[str] = []
    if compare_spaces:
        if got.space.blocks != want.space.blocks:
            seen = set(got.space.blocks) | set(want.space.blocks)
            for bd in sorted(seen):
                g = got.space.blocks.get(bd, [])
                w = want.space.blocks.get(bd, [])
                if g != w:
                    problems.append(f"basis at {tuple(bd)}: {g} != {w}")
    for n in sorted(set(got.ops) | set(want.ops)):
        g, w = got.ops.get(n, {}), want.ops.get(n, {})
        for word in sorted(set(g) | set(w)):
            if g.get(word, {}) != w.get(word, {}):
                problems.append(
                    f"m_{n}{word}: {g.get(word, {})} != {w.get(word, {})}")
    return problems


@dataclass
class MasseyComparison:
    """The ell-fold Massey power against the arity-ell coefficient.

    Both numbers are read in the same machine basis, so their ratio is
    independent of every splitting and rescaling choice; the content is
    massey == -epsilon(ell) * transfer, coefficient-wise on x^h.
    """

    report: MasseyReport
    c_massey: int
    c_transfer: int
    expected_ratio: int
    holds: bool


def massey_versus_transfer(comp: GroupComputation,
                           nfold: int | None = None) -> MasseyComparison:
    params = comp.params
    p = params.p
    ell = params.pn if nfold is None else nfold
    hp = params.hp
    from .ainf import monomial_label
    t_lab = monomial_label(0, 1)
    target = monomial_label(hp.h, 0)

    report = massey_power(comp.con, t_lab, ell)
    c_massey = report.value.get(target, 0) if report.defined else 0
    extra = set(report.value) - {target}
    if extra:
        raise AssertionError(f"Massey power has parts off the x-line: {extra}")

    word = (t_lab,) * ell
    c_transfer = comp.model.op_value(ell, word).get(target, 0)
    expected_ratio = (-epsilon_sign(ell)) % p
    holds = (report.defined and c_transfer != 0
             and c_massey == (expected_ratio * c_transfer) % p)
    return MasseyComparison(report=report, c_massey=c_massey,
                            c_transfer=c_transfer,
                            expected_ratio=expected_ratio, holds=holds)
