"""A-infinity structures on bigraded F_p spaces with monomial bases.

An A-infinity algebra here is a space with multilinear operations m_n of
bidegree (n-2, 0) subject to the sign rule

    sum over r+s+t=n of (-1)^(r+st) m_(r+1+t) (id^r (x) m_s (x) id^t) = 0,

where tensor slots are evaluated with the Koszul convention: moving an
operator of degree d past an input of degree e costs (-1)^(d*e), applied
left to right.  Homological degrees are used for all parities (an element
of classical cohomological degree i sits in homological degree -i).

Operations are stored as sparse tables over basis-label words.  Every
bigraded piece of the models in this package is at most one-dimensional,
which keeps the tables small and makes generator normalization a matter
of rescaling two generators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .glin import Bidegree, GradedVectorSpace, TruncationExceeded, is_prime

__all__ = [
    "epsilon_sign",
    "MultiOp",
    "AInfinityAlgebra",
    "koszul_apply",
    "stasheff_defect",
    "strict_unitality_defects",
    "DefectReport",
    "HypothesisParams",
    "AdmissibleOp",
    "classify_admissible",
    "normalize_generators",
    "monomial_label",
]

# arity -> {word of basis labels -> sparse output vector {label: coeff}}
MultiOp = dict[tuple[str, ...], dict[str, int]]


def epsilon_sign(s: int) -> int:
    """+1 if s is congruent to 0 or 1 mod 4, else -1.

    This is the sign attached to the single nonvanishing family of higher
    operations; it satisfies epsilon(s) * epsilon(s+2) == -1.
    """
    return 1 if s % 4 in (0, 1) else -1


def monomial_label(j: int, eps: int, names: tuple[str, str] = ("x", "t")) -> str:
    """Canonical label for P^j E^eps, P the polynomial and E the exterior
    generator (named x, t by default)."""
    if j < 0 or eps not in (0, 1):
        raise ValueError(f"bad monomial exponents ({j}, {eps})")
    pname, ename = names
    xs = "" if j == 0 else (pname if j == 1 else f"{pname}^{j}")
    ts = ename if eps else ""
    if xs and ts:
        return f"{xs}*{ts}"
    return xs or ts or "1"


# ---------------------------------------------------------------------------
# the algebra container
# ---------------------------------------------------------------------------

@dataclass
class AInfinityAlgebra:
    """Sparse A-infinity structure on a bigraded space.

    ops[n] is the arity-n table; words absent from a table are zero when
    their forced output bidegree lies in the window, and unknown otherwise.
    internal_scale records how many stored internal-degree units make one
    abstract unit (the group models store units of 1/q).
    """

    space: GradedVectorSpace
    ops: dict[int, MultiOp]
    arity_bound: int
    unit: str | None = None
    internal_scale: int = 1

    def __post_init__(self) -> None:
        if self.arity_bound < 2:
            raise ValueError("arity bound must be at least 2")
        p = self.space.prime
        for n, table in self.ops.items():
            if n < 1:
                raise ValueError(f"bad arity {n}")
            for word, vec in list(table.items()):
                if len(word) != n:
                    raise ValueError(f"arity {n} word of length {len(word)}")
                out = self.word_output_bidegree(n, word)
                clean = {}
                for lab, c in vec.items():
                    if self.space.bidegree_of(lab) != out:
                        raise ValueError(
                            f"m_{n}{word} hits {lab!r} outside bidegree {out}")
                    c %= p
                    if c:
                        clean[lab] = c
                if clean:
                    table[word] = clean
                else:
                    del table[word]
        if self.unit is not None and not self.space.has_label(self.unit):
            raise ValueError(f"unit label {self.unit!r} not in the space")

    @property
    def prime(self) -> int:
        return self.space.prime

    def is_minimal(self) -> bool:
        return not self.ops.get(1)

    def word_output_bidegree(self, n: int, word: tuple[str, ...]) -> Bidegree:
        s = sum(self.space.bidegree_of(l).s for l in word) + (n - 2)
        w = sum(self.space.bidegree_of(l).w for l in word)
        return Bidegree(s, w)

    def op_value(self, n: int, word: tuple[str, ...]) -> dict[str, int]:
        """m_n on a basis word; zero only when the target is in-window."""
        if n > self.arity_bound:
            raise ValueError(f"arity {n} beyond bound {self.arity_bound}")
        out = self.word_output_bidegree(n, word)
        self.space.require_in_window(out.s)
        return self.ops.get(n, {}).get(tuple(word), {})

    def basis_degree(self, label: str) -> int:
        return self.space.bidegree_of(label).s


# ---------------------------------------------------------------------------
# Koszul evaluation and the structure identities
# ---------------------------------------------------------------------------

def koszul_apply(model: AInfinityAlgebra, r: int, s: int, t: int,
                 word: tuple[str, ...]) -> dict[str, int]:
    """Evaluate m_(r+1+t) (id^r (x) m_s (x) id^t) on a word, Koszul signs in.

    The inner operation has degree s-2; moving it past the first r inputs
    costs (-1)^((s-2) * (sum of their degrees)).  The Stasheff prefactor
    (-1)^(r+st) is left to the caller.
    """
    n = r + s + t
    if len(word) != n:
        raise ValueError(f"word length {len(word)} != {n}")
    p = model.prime
    inner = model.op_value(s, word[r:r + s])
    if not inner:
        return {}
    passed = sum(model.basis_degree(l) for l in word[:r])
    sign = -1 if (s * passed) % 2 else 1  # (s-2)*passed has the parity of s*passed
    out: dict[str, int] = {}
    for lab, c in inner.items():
        outer_word = word[:r] + (lab,) + word[r + s:]
        for out_lab, d in model.op_value(r + 1 + t, outer_word).items():
            out[out_lab] = (out.get(out_lab, 0) + sign * c * d) % p
    return {k: v for k, v in out.items() if v}


@dataclass
class DefectReport:
    """Result of a Stasheff-identity sweep at one arity."""

    arity: int
    checked: int
    truncated: int
    nonzero: dict[tuple[str, ...], dict[str, int]]

    def ok(self) -> bool:
        return not self.nonzero


def stasheff_word_defect(model: AInfinityAlgebra, word: tuple[str, ...]) -> dict[str, int]:
    """Left-hand side of the arity-n identity on one word."""
    n = len(word)
    if n > model.arity_bound:
        raise ValueError(
            f"identity at arity {n} needs operations beyond bound "
            f"{model.arity_bound}")
    p = model.prime
    total: dict[str, int] = {}
    for s in range(1, n + 1):
        for r in range(0, n - s + 1):
            t = n - s - r
            term = koszul_apply(model, r, s, t, word)
            if not term:
                continue
            sign = -1 if (r + s * t) % 2 else 1
            for lab, c in term.items():
                total[lab] = (total.get(lab, 0) + sign * c) % p
    return {k: v for k, v in total.items() if v}


def enumerate_words(model: AInfinityAlgebra, n: int,
                    exclude: Iterable[str] = (),
                    level: str = "identity") -> Iterator[tuple[str, ...]]:
    """All length-n basis words whose output degree lands in-window.

    With level="identity" the budgeted degree is (sum of inputs) + n - 3,
    where the arity-n identity's terms live; with level="operation" it is
    (sum of inputs) + n - 2, where m_n itself lands.  Words are enumerated
    with a degree budget so the sweep scales with the window, not with the
    full tuple count.
    """
    shift = {"identity": n - 3, "operation": n - 2}[level]
    lo, hi = model.space.window
    letters = []
    for bd in model.space.bidegrees():
        for lab in model.space.labels(bd):
            if lab not in exclude:
                letters.append((lab, bd.s))
    letters.sort(key=lambda ls: (-ls[1], ls[0]))
    if not letters:
        return
    smin = min(s for _, s in letters)
    smax = max(s for _, s in letters)

    def rec(prefix: list[str], ssum: int, k: int) -> Iterator[tuple[str, ...]]:
        if k == n:
            if lo <= ssum + shift <= hi:
                yield tuple(prefix)
            return
        rest = n - k
        for lab, s in letters:
            best = ssum + s + (rest - 1) * smax + shift
            worst = ssum + s + (rest - 1) * smin + shift
            if best < lo or worst > hi:
                continue
            yield from rec(prefix + [lab], ssum + s, k + 1)

    yield from rec([], 0, 0)


def stasheff_defect(model: AInfinityAlgebra, n: int,
                    words: Iterable[tuple[str, ...]] | None = None) -> DefectReport:
    """Sweep the arity-n Stasheff identity over basis words.

    Words whose evaluation leaves the window are counted, not silently
    treated as zero.
    """
    if words is None:
        words = enumerate_words(model, n)
    checked = truncated = 0
    bad: dict[tuple[str, ...], dict[str, int]] = {}
    for word in words:
        try:
            defect = stasheff_word_defect(model, word)
        except TruncationExceeded:
            truncated += 1
            continue
        checked += 1
        if defect:
            bad[word] = defect
    return DefectReport(arity=n, checked=checked, truncated=truncated,
                        nonzero=bad)


def strict_unitality_defects(model: AInfinityAlgebra) -> list[str]:
    """Violations of strict unitality in the operation tables.

    A strictly unital model has m_2(1, a) = m_2(a, 1) = a for every basis
    label a and no nonzero higher operation with a unit input.  When this
    list is empty, the Stasheff identity on any word containing the unit
    reduces term by term to unitality relations and lower-arity
    identities, so a sweep may exclude the unit from its alphabet; that
    keeps the word count polynomial when the window is much deeper than
    the smallest generator degree.
    """
    unit = model.unit
    if unit is None:
        return ["model has no unit label"]
    p = model.space.prime
    bad: list[str] = []
    for bd in sorted(model.space.bidegrees()):
        for lab in model.space.labels(bd):
            for word in ((unit, lab), (lab, unit)):
                got = {k: v % p for k, v in model.op_value(2, word).items()
                       if v % p}
                if got != {lab: 1 % p}:
                    bad.append(f"m_2{word} = {got}, expected {lab}")
    for n in sorted(model.ops):
        if n < 3:
            continue
        for word in sorted(model.ops[n]):
            if unit in word and any(c % p for c in model.ops[n][word].values()):
                bad.append(f"m_{n}{word} is nonzero despite a unit input")
    return bad


# ---------------------------------------------------------------------------
# bidegree classification of admissible higher operations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HypothesisParams:
    """Bigraded shape k[x] (x) Lambda(t), |x| = (-2a, ell), |t| = (-2b-1, h).

    The integers satisfy h*a - ell*b == 1; a and b may be negative (the
    loop-side models realize the same shape with the homological grading
    reflected).  Internal degrees here are in abstract (absolute) units.
    """

    a: int
    b: int
    h: int
    ell: int

    def __post_init__(self) -> None:
        if self.h < 1 or self.ell < 1:
            raise ValueError("h and ell must be positive")
        if self.h * self.a - self.ell * self.b != 1:
            raise ValueError(
                f"h*a - ell*b = {self.h * self.a - self.ell * self.b}, need 1")

    def x_bidegree(self, scale: int = 1) -> Bidegree:
        return Bidegree(-2 * self.a, self.ell * scale)

    def t_bidegree(self, scale: int = 1) -> Bidegree:
        return Bidegree(-2 * self.b - 1, self.h * scale)

    def monomial_bidegree(self, j: int, eps: int, scale: int = 1) -> Bidegree:
        return Bidegree(-2 * self.a * j - (2 * self.b + 1) * eps,
                        (j * self.ell + eps * self.h) * scale)

    def loop_dual(self) -> "HypothesisParams":
        """Same shape on the Koszul-dual side: a,b negated and swapped,
        h and ell exchanged."""
        return HypothesisParams(a=-self.b, b=-self.a, h=self.ell, ell=self.h)


@dataclass(frozen=True)
class AdmissibleOp:
    """One tuple on which the bidegree equations allow a nonzero m_arity."""

    arity: int
    powers: tuple[int, ...]      # x-exponents of the inputs
    exponents: tuple[int, ...]   # t-exponents of the inputs (0 or 1)
    target_power: int
    target_exponent: int


def classify_admissible(hp: HypothesisParams, max_arity: int,
                        max_power: int) -> list[AdmissibleOp]:
    """All monomial tuples (arity > 2) that can support a nonzero operation.

    For inputs x^{j_r} t^{e_r} and candidate target x^j t^e, write
    alpha = sum(j_r) - j and beta = sum(e_r) - e.  An operation of arity i
    preserves internal degree and shifts homological degree by i-2, which
    forces

        alpha*ell + beta*h = 0        (internal)
        2*a*alpha + (2*b+1)*beta = i - 2   (homological).

    Since gcd(h, ell) = 1 (from h*a - ell*b = 1), the first equation pins
    beta to a multiple of ell; everything else is bookkeeping.
    """
    if hp.ell <= 2:
        raise ValueError("classification needs ell > 2")
    out: list[AdmissibleOp] = []
    for i in range(3, max_arity + 1):
        for bsum in range(0, i + 1):
            for eps_t in (0, 1):
                beta = bsum - eps_t
                if beta % hp.ell:
                    continue
                alpha = -(beta // hp.ell) * hp.h
                if 2 * hp.a * alpha + (2 * hp.b + 1) * beta != i - 2:
                    continue
                # expand: all exponent patterns with sum bsum, all power
                # tuples with j = sum - alpha >= 0
                for positions in itertools.combinations(range(i), bsum):
                    eps = tuple(1 if k in positions else 0 for k in range(i))
                    for powers in itertools.product(range(max_power + 1), repeat=i):
                        j = sum(powers) - alpha
                        if j < 0:
                            continue
                        out.append(AdmissibleOp(
                            arity=i, powers=powers, exponents=eps,
                            target_power=j, target_exponent=eps_t))
    out.sort(key=lambda r: (r.arity, r.exponents, r.powers, r.target_exponent))
    return out


# ---------------------------------------------------------------------------
# generator normalization
# ---------------------------------------------------------------------------

class ShapeMismatch(Exception):
    """The model does not have the k[x] (x) Lambda(t) monomial shape."""


def _unique_label(model: AInfinityAlgebra, bd: Bidegree, what: str) -> str:
    labels = model.space.labels(bd)
    if len(labels) != 1:
        raise ShapeMismatch(
            f"expected one basis element for {what} at {tuple(bd)}, "
            f"found {len(labels)}")
    return labels[0]


def _single(vec: dict[str, int], what: str) -> tuple[str, int]:
    if len(vec) != 1:
        raise ShapeMismatch(f"{what} is not a nonzero multiple of one label")
    ((lab, c),) = vec.items()
    return lab, c


def normalize_generators(model: AInfinityAlgebra, hp: HypothesisParams,
                         target_sign: int | None = None,
                         names: tuple[str, str] = ("x", "t")) -> "NormalizedModel":
    """Rescale x and t so the arity-ell family has coefficient epsilon(ell).

    First the basis is rewritten so that every monomial x^j t^eps is the
    literal m_2-product of the generators (making the m_2 table the exact
    monomial ring), then x and t are rescaled to put the arity-ell table
    in normal form.  Formal models (vanishing arity-ell family) are
    returned after the rebasing step with a flag.
    """
    p = model.prime
    scale = model.internal_scale
    if model.unit is None:
        raise ShapeMismatch("model has no unit label")
    if hp.a == 0:
        raise ValueError("normalization needs a nonzero polynomial degree")
    ell = hp.ell
    want = target_sign if target_sign is not None else epsilon_sign(ell) % p

    x_lab = _unique_label(model, hp.x_bidegree(scale), names[0])
    t_lab = _unique_label(model, hp.t_bidegree(scale), names[1])

    # nu[(j, eps)] = (old label, coefficient): the m_2-monomial basis
    nu: dict[tuple[int, int], tuple[str, int]] = {(0, 0): (model.unit, 1)}
    lo, hi = model.space.window

    def mono_in_window(j: int, eps: int) -> bool:
        return lo <= hp.monomial_bidegree(j, eps, scale).s <= hi

    j = 1
    while mono_in_window(j, 0):
        prev_lab, prev_c = nu[(j - 1, 0)]
        vec = model.op_value(2, (x_lab, prev_lab))
        lab, c = _single(vec, f"x * x^{j-1}")
        if model.space.bidegree_of(lab) != hp.monomial_bidegree(j, 0, scale):
            raise ShapeMismatch(f"x^{j} landed in the wrong bidegree")
        nu[(j, 0)] = (lab, (prev_c * c) % p)
        j += 1
    jmax = j - 1
    for j in range(0, jmax + 1):
        if not mono_in_window(j, 1):
            break
        if j == 0:
            nu[(0, 1)] = (t_lab, 1)
            continue
        base_lab, base_c = nu[(j, 0)]
        vec = model.op_value(2, (base_lab, t_lab))
        lab, c = _single(vec, f"x^{j} * t")
        if model.space.bidegree_of(lab) != hp.monomial_bidegree(j, 1, scale):
            raise ShapeMismatch(f"x^{j}*t landed in the wrong bidegree")
        nu[(j, 1)] = (lab, (base_c * c) % p)

    # every in-window basis label must be hit exactly once
    covered = {lab for lab, _ in nu.values()}
    all_labels = {l for bd in model.space.bidegrees()
                  for l in model.space.labels(bd)}
    if covered != all_labels:
        raise ShapeMismatch(
            f"monomial rebase covers {len(covered)} of {len(all_labels)} labels")

    old_to_mono = {}
    for (j, eps), (lab, c) in nu.items():
        if lab in old_to_mono:
            raise ShapeMismatch(f"label {lab!r} hit by two monomials")
        old_to_mono[lab] = (j, eps, c)

    inv = {a: pow(a, p - 2, p) for a in range(1, p)}

    def rebased_tables(lam: int, mu: int) -> dict[int, MultiOp]:
        # generator rescale x -> lam*x, t -> mu*t carries nu(j,eps) to
        # lam^j mu^eps nu(j,eps); conjugate every table by that diagonal.
        new_ops: dict[int, MultiOp] = {}
        for n, table in model.ops.items():
            new_table: MultiOp = {}
            for word, vec in table.items():
                factors = 1
                mono_word = []
                for lab in word:
                    jj, ee, cc = old_to_mono[lab]
                    factors = (factors * cc % p) * pow(lam, jj, p) % p * pow(mu, ee, p) % p
                    mono_word.append(monomial_label(jj, ee, names))
                if not vec:
                    continue
                out_lab, out_c = _single(vec, f"m_{n}{word}")
                jj, ee, cc = old_to_mono[out_lab]
                denom = (cc * pow(lam, jj, p) * pow(mu, ee, p)) % p
                coeff = factors * out_c % p * inv[denom] % p
                if coeff:
                    new_table[tuple(mono_word)] = {monomial_label(jj, ee, names): coeff}
            if new_table:
                new_ops[n] = new_table
        return new_ops

    # read off the raw arity-ell coefficient in the rebased (lam=mu=1) basis
    raw_ops = rebased_tables(1, 1)
    t_word = tuple([monomial_label(0, 1, names)] * ell)
    raw_vec = raw_ops.get(ell, {}).get(t_word, {})
    x_h = monomial_label(hp.h, 0, names)
    raw_coeff = raw_vec.get(x_h, 0)
    if set(raw_vec) - {x_h}:
        raise ShapeMismatch(f"m_{ell}(t,...,t) not a multiple of {x_h}")

    mono_blocks: dict[Bidegree, list[str]] = {}
    for (j, eps) in nu:
        bd = hp.monomial_bidegree(j, eps, scale)
        mono_blocks.setdefault(bd, []).append(monomial_label(j, eps, names))
    mono_space = GradedVectorSpace(prime=p, window=model.space.window,
                                   blocks=mono_blocks)

    if raw_coeff == 0:
        final_ops = raw_ops
        lam = mu = 1
        formal = True
    else:
        formal = False
        lam = mu = None
        for lam_try in range(1, p):
            for mu_try in range(1, p):
                if (raw_coeff * pow(mu_try, ell, p)
                        * inv[pow(lam_try, hp.h, p)]) % p == want % p:
                    lam, mu = lam_try, mu_try
                    break
            if lam is not None:
                break
        if lam is None:
            raise ShapeMismatch(
                f"cannot rescale coefficient {raw_coeff} to {want} mod {p}")
        final_ops = rebased_tables(lam, mu)

    normalized = AInfinityAlgebra(space=mono_space, ops=final_ops,
                                  arity_bound=model.arity_bound,
                                  unit=monomial_label(0, 0, names),
                                  internal_scale=scale)
    return NormalizedModel(model=normalized, raw_coefficient=raw_coeff,
                           formal=formal, x_scale=lam or 1, t_scale=mu or 1,
                           hp=hp)


@dataclass
class NormalizedModel:
    """A minimal model in the canonical monomial basis.

    raw_coefficient is the arity-ell coefficient before rescaling; the
    normalized table carries epsilon(ell) instead, but the raw value is
    kept because the rescaling that removes it is a change of basis, not
    new information.
    """

    model: AInfinityAlgebra
    raw_coefficient: int
    formal: bool
    x_scale: int
    t_scale: int
    hp: HypothesisParams
