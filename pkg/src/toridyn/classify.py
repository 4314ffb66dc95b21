"""The classification taxonomy: finite order, unity-free, amplified,
polarized, the Serre magnitude test, dynamical degrees and entropy, and
verification of the implication chain and its stability under iteration.

Amplified and polarized are three-valued verdicts: the decision tree
settles every case the theory settles exactly, and reports `inconclusive`
instead of guessing when a bounded witness search comes up empty.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import mpmath

from .errors import DomainError, NotSurjectiveError
from .exactnum import (DEFAULT_PRECISION, IntPolynomial,
                       gaussian_root_magnitudes, is_kronecker,
                       polynomial_class, root_magnitudes)
from .matlin import RationalMatrix, exterior_power
from .endo import (TorusEndomorphism, eigen_data, iterate, unity_free)
from .dynamics import lefschetz_number
from .torus import canonical_ample_class, is_ample, neron_severi

AMPLE_SEARCH_BUDGET = 10**4
AMPLE_SEARCH_HEIGHT = 8


def h1_magnitudes(f: TorusEndomorphism, precision=DEFAULT_PRECISION):
    """Certified root magnitudes of the H^1 charpoly.  For n <= 2 the
    analytic charpoly has degree <= 2 over Q(i) and the quadratic formula
    gives the enclosures without complex root isolation."""
    data = eigen_data(f)
    if f.torus.n <= 2:
        return gaussian_root_magnitudes(data.analytic, data.h1_charpoly, precision)
    return root_magnitudes(data.h1_charpoly, precision)


# ---------------------------------------------------------------------------
# NS action


def ns_action(f: TorusEndomorphism) -> RationalMatrix:
    """Action of f^* on the Neron-Severi space, in the NS basis."""
    if not f.surjective:
        raise NotSurjectiveError("NS action requires det M != 0")
    ns = neron_severi(f.torus)
    if ns.rho == 0:
        return RationalMatrix([])
    e2 = exterior_power(f.m.transpose(), 2)
    return ns.basis.solve_exact(e2 * ns.basis)


# ---------------------------------------------------------------------------
# Finite order


def finite_order(f: TorusEndomorphism):
    """Order of f when finite, else None.

    Kronecker charpoly gives the candidate matrix order as the lcm of the
    cyclotomic factor orders; M^K = I is then verified by exact powering
    (the charpoly alone cannot rule out unipotent parts), and the torsion
    translation folds in as the lcm of its denominators."""
    if not f.surjective:
        raise NotSurjectiveError("order requires det M != 0")
    data = eigen_data(f)
    if not is_kronecker(data.h1_charpoly):
        return None
    k = lcm(*[n for n, _ in data.cyclotomic_factors])
    if f.m ** k != RationalMatrix.identity(f.torus.rank):
        return None
    g = iterate(f, k)
    denoms = [t.denominator for t in g.tau]
    return k * lcm(*denoms) if denoms else k


# ---------------------------------------------------------------------------
# Dynamical degrees


@dataclass(frozen=True)
class DegreeData:
    """Certified dynamical degree intervals lambda_0..lambda_n."""

    intervals: tuple          # ((lo, up) Fractions per j)
    equal_consecutive_pairs: tuple  # indices j with lambda_j = lambda_{j+1}
    exact_equalities: tuple   # subset of pairs certified by exact structure
    entropy: tuple            # (lo, hi) floats enclosing log lambda_1
    precision: Fraction


def _entropy_enclosure(lo: Fraction, hi: Fraction):
    iv = mpmath.iv
    with mpmath.workdps(40):
        a = iv.log(iv.mpf(lo.numerator) / iv.mpf(lo.denominator))
        b = iv.log(iv.mpf(hi.numerator) / iv.mpf(hi.denominator))
        return float(mpmath.mpf(a.a)), float(mpmath.mpf(b.b))


def dynamical_degrees(f: TorusEndomorphism,
                      precision: Fraction = DEFAULT_PRECISION) -> DegreeData:
    """lambda_j as the product of the 2j largest certified root magnitude
    enclosures of the H^1 charpoly.

    The outer enclosure multiplies the top-2j lower bounds and the top-2j
    upper bounds separately, which is valid for nonnegative values without
    having to decide an order between overlapping intervals."""
    if not f.surjective:
        raise NotSurjectiveError("dynamical degrees require det M != 0")
    mags = h1_magnitudes(f, precision)
    expanded = mags.sorted_descending()
    lowers = sorted((e.lower for e in expanded), reverse=True)
    uppers = sorted((e.upper for e in expanded), reverse=True)
    n = f.torus.n
    intervals = []
    for j in range(n + 1):
        lo = Fraction(1)
        hi = Fraction(1)
        for i in range(2 * j):
            lo *= lowers[i]
            hi *= uppers[i]
        intervals.append((lo, hi))
    # the top degree is the topological degree |det M|, known exactly
    degree_det = Fraction(abs(f.degree_matrix_det))
    intervals[n] = (degree_det, degree_det)
    # exact structure: entries certified > 1 come first, exact-1 entries
    # in the middle; when positions 2j+1, 2j+2 are both exactly 1 the two
    # consecutive degrees agree exactly.
    count_gt1 = sum(1 for e in expanded if e.lower > 1)
    count_one = sum(1 for e in expanded if e.lower == e.upper == 1)
    equal = []
    exact = []
    for j in range(n):
        exact_here = (count_gt1 <= 2 * j) and (2 * j + 2 <= count_gt1 + count_one)
        lo_j, hi_j = intervals[j]
        lo_k, hi_k = intervals[j + 1]
        overlap = max(lo_j, lo_k) <= min(hi_j, hi_k)
        if exact_here or overlap:
            equal.append(j)
        if exact_here:
            exact.append(j)
    entropy = _entropy_enclosure(*intervals[1]) if n >= 1 else (0.0, 0.0)
    return DegreeData(tuple(intervals), tuple(equal), tuple(exact),
                      entropy, Fraction(precision))


# ---------------------------------------------------------------------------
# Serre necessary test and q-candidate


def _integer_nth_root(value: int, n: int):
    if value < 1:
        return None
    r = round(value ** (1.0 / n))
    for cand in (r - 1, r, r + 1):
        if cand >= 1 and cand**n == value:
            return cand
    return None


def polarization_q_candidate(f: TorusEndomorphism):
    """q >= 2 with |det M| = q^n, or None."""
    q = _integer_nth_root(abs(f.degree_matrix_det), f.torus.n)
    return q if q is not None and q >= 2 else None


def serre_test(f: TorusEndomorphism, q: int,
               precision: Fraction = DEFAULT_PRECISION) -> bool:
    """Necessary condition for f^*L = qL with L ample: every certified H^1
    root magnitude interval must contain sqrt(q)."""
    mags = h1_magnitudes(f, precision)
    return all(e.lower**2 <= q <= e.upper**2 for e in mags.entries)


# ---------------------------------------------------------------------------
# Ample witness search


def _coordinate_candidates(dim: int, budget: int, seed: int = 10301):
    """Deterministic small-height coordinate vectors, then seeded random
    vectors of height <= AMPLE_SEARCH_HEIGHT, up to budget."""
    produced = 0
    for height in (1, 2):
        if (2 * height + 1) ** dim > 4 * budget and height > 1:
            break
        for combo in itertools.product(range(-height, height + 1), repeat=dim):
            if any(combo) and max(abs(c) for c in combo) == height:
                yield combo
                produced += 1
                if produced >= budget:
                    return
    rng = random.Random(seed)
    while produced < budget:
        yield tuple(rng.randint(-AMPLE_SEARCH_HEIGHT, AMPLE_SEARCH_HEIGHT)
                    for _ in range(dim))
        produced += 1


def _search_ample_in_subspace(torus, ns, columns, budget=AMPLE_SEARCH_BUDGET):
    """Bounded search for an ample class among integer combinations of the
    given NS vectors; returns the witness NS vector or None.

    The symmetric form S = J^T E is linear in the class, so the forms for
    the basis vectors are precomputed and combined per candidate; the
    positivity test aborts at the first nonpositive pivot, which rejects
    most candidates almost immediately."""
    from .torus import ns_vector_to_form, _is_positive_definite
    if not columns:
        return None
    jt = torus.j.transpose()
    forms = [(jt * ns_vector_to_form(torus, col)).entries for col in columns]
    d = torus.rank
    for combo in _coordinate_candidates(len(columns), budget):
        # diagonal screen: every diagonal entry of a PD form is positive
        if any(sum(c * fm[i][i] for c, fm in zip(combo, forms) if c) <= 0
               for i in range(d)):
            continue
        s = [[sum(c * fm[i][j] for c, fm in zip(combo, forms) if c)
              for j in range(d)] for i in range(d)]
        if _is_positive_definite(s):
            vec = tuple(sum(c * col[i] for c, col in zip(combo, columns) if c)
                        for i in range(len(columns[0])))
            assert is_ample(torus, vec)
            return vec
    return None


# ---------------------------------------------------------------------------
# Amplified


@dataclass(frozen=True)
class AmplifiedVerdict:
    verdict: str  # yes / no / inconclusive
    path: str
    witness: tuple | None = None


def amplified(f: TorusEndomorphism) -> AmplifiedVerdict:
    """Decision tree: (a) 1 not an eigenvalue of the NS action -> yes;
    (b) not unity-free -> no; (c) abelian surface and unity-free -> yes;
    (d) bounded search of (f^* - id)(NS) for an ample class."""
    if not f.surjective:
        raise NotSurjectiveError("amplified requires det M != 0")
    try:
        canonical_ample_class(f.torus)
    except DomainError:
        return AmplifiedVerdict("inconclusive", "not-verified-projective")
    action = ns_action(f)
    if (action - RationalMatrix.identity(action.rows)).det() != 0:
        return AmplifiedVerdict("yes", "ns-no-unit-eigenvalue")
    free, _ = unity_free(f)
    if not free:
        return AmplifiedVerdict("no", "not-unity-free")
    if f.torus.n == 2:
        return AmplifiedVerdict("yes", "abelian-surface-unity-free")
    ns = neron_severi(f.torus)
    shifted = action - RationalMatrix.identity(action.rows)
    columns = [ns.from_coordinates(shifted.column(j)) for j in range(ns.rho)]
    witness = _search_ample_in_subspace(f.torus, ns, columns)
    if witness is not None:
        return AmplifiedVerdict("yes", "ample-difference-witness", witness)
    return AmplifiedVerdict("inconclusive", "witness-search-exhausted")


# ---------------------------------------------------------------------------
# Polarized


@dataclass(frozen=True)
class PolarizedVerdict:
    verdict: str  # yes / no / inconclusive
    q: int | None = None
    witness: tuple | None = None
    reason: str = ""


def polarized(f: TorusEndomorphism,
              precision: Fraction = DEFAULT_PRECISION) -> PolarizedVerdict:
    """f^* L = qL for an ample class L (numerical classes): q is pinned by
    |det M| = q^n, the Serre magnitude test rejects certified mismatches,
    and a witness is searched in the exact q-eigenspace of the NS action."""
    if not f.surjective:
        raise NotSurjectiveError("polarized requires det M != 0")
    q = polarization_q_candidate(f)
    if q is None:
        return PolarizedVerdict("no", reason="degree is not q^n for any q >= 2")
    if not serre_test(f, q, precision):
        return PolarizedVerdict("no", q=q, reason="Serre magnitude test rejects")
    ns = neron_severi(f.torus)
    action = ns_action(f)
    eigen = (action - RationalMatrix.identity(action.rows) * q).kernel_basis()
    if not eigen:
        return PolarizedVerdict("no", q=q, reason="q is not an NS eigenvalue")
    columns = [ns.from_coordinates(v) for v in eigen]
    witness = _search_ample_in_subspace(f.torus, ns, columns)
    if witness is not None:
        return PolarizedVerdict("yes", q=q, witness=witness)
    return PolarizedVerdict("inconclusive", q=q,
                            reason="no ample class found in the q-eigenspace")


# ---------------------------------------------------------------------------
# Full report


@dataclass(frozen=True)
class ClassificationReport:
    surjective: bool
    isogeny: bool
    finite_order: int | None
    unity_free: bool
    u_f: int
    amplified: str
    amplified_path: str
    polarized: str
    polarized_q: int | None
    polarized_witness: tuple | None
    serre_consistent: bool
    dynamical_degrees: tuple
    equal_consecutive_pairs: tuple
    exact_equalities: tuple
    entropy: tuple
    lefschetz: int
    h1_poly_class: str
    h1_charpoly: IntPolynomial
    notes: tuple = field(default=())

    def to_dict(self):
        return {
            "surjective": self.surjective,
            "isogeny": self.isogeny,
            "finite_order": self.finite_order,
            "unity_free": self.unity_free,
            "u_f": self.u_f,
            "amplified": self.amplified,
            "amplified_path": self.amplified_path,
            "polarized": self.polarized,
            "polarized_q": self.polarized_q,
            "polarized_witness": [str(x) for x in self.polarized_witness]
            if self.polarized_witness else None,
            "serre_consistent": self.serre_consistent,
            "dynamical_degrees": [[str(lo), str(hi)]
                                  for lo, hi in self.dynamical_degrees],
            "equal_consecutive_pairs": list(self.equal_consecutive_pairs),
            "exact_equalities": list(self.exact_equalities),
            "entropy": list(self.entropy),
            "lefschetz": self.lefschetz,
            "h1_poly_class": self.h1_poly_class,
            "h1_charpoly": self.h1_charpoly.serialize(),
            "notes": list(self.notes),
        }

    def to_text(self):
        d = self.to_dict()
        lines = ["classification report"]
        for key, value in d.items():
            if key == "dynamical_degrees":
                degs = ", ".join(
                    f"lambda_{j} in [{float(Fraction(lo)):.6f}, {float(Fraction(hi)):.6f}]"
                    for j, (lo, hi) in enumerate(value))
                lines.append(f"  dynamical_degrees: {degs}")
            else:
                lines.append(f"  {key}: {value}")
        return "\n".join(lines)


def full_report(f: TorusEndomorphism,
                precision: Fraction = DEFAULT_PRECISION) -> ClassificationReport:
    if not f.surjective:
        raise NotSurjectiveError("classification requires a surjective endomorphism")
    data = eigen_data(f)
    free, u = unity_free(f)
    order = finite_order(f)
    amp = amplified(f)
    pol = polarized(f, precision)
    degrees = dynamical_degrees(f, precision)
    q_cand = polarization_q_candidate(f)
    serre_ok = serre_test(f, q_cand, precision) if q_cand is not None else True
    notes = []
    if not free and degrees.equal_consecutive_pairs:
        notes.append("equal consecutive dynamical degrees computed for a "
                     "non-unity-free map; values reported as computed")
    # squarefree part carries the classification (powers of a Salem factor
    # would otherwise fail the 'exactly one root above 1' count)
    radical = IntPolynomial([1])
    for factor, _ in data.h1_charpoly.squarefree_decomposition():
        radical = radical * factor
    report = ClassificationReport(
        surjective=True,
        isogeny=f.is_isogeny,
        finite_order=order,
        unity_free=free,
        u_f=u,
        amplified=amp.verdict,
        amplified_path=amp.path,
        polarized=pol.verdict,
        polarized_q=pol.q if pol.verdict == "yes" else None,
        polarized_witness=pol.witness,
        serre_consistent=serre_ok,
        dynamical_degrees=degrees.intervals,
        equal_consecutive_pairs=degrees.equal_consecutive_pairs,
        exact_equalities=degrees.exact_equalities,
        entropy=degrees.entropy,
        lefschetz=lefschetz_number(f),
        h1_poly_class=polynomial_class(radical),
        h1_charpoly=data.h1_charpoly,
        notes=tuple(notes),
    )
    for violation in chain_violations(report):
        raise DomainError(f"implication chain violated: {violation}")  # pragma: no cover
    return report


# ---------------------------------------------------------------------------
# Implication chain and iterate stability


def chain_violations(report: ClassificationReport):
    """polarized => amplified => unity-free => infinite order; inconclusive
    never counts as a violation."""
    out = []
    if report.polarized == "yes" and report.amplified == "no":
        out.append("polarized but not amplified")
    if report.amplified == "yes" and not report.unity_free:
        out.append("amplified but not unity-free")
    if report.unity_free and report.finite_order is not None:
        out.append("unity-free but finite order")
    return out


def verify_chain(f: TorusEndomorphism, report: ClassificationReport | None = None):
    if report is None:
        report = full_report(f)
    return chain_violations(report)


def verify_iterates(f: TorusEndomorphism, kmax: int):
    """Stability of the taxonomy under iteration, plus finiteness of the
    difference sets det(M^m - M^n) != 0 for amplified maps."""
    if not f.surjective:
        raise NotSurjectiveError("iterate verification requires det M != 0")
    violations = []
    base_free, _ = unity_free(f)
    base_amp = amplified(f)
    base_pol = polarized(f)
    for k in range(1, kmax + 1):
        g = iterate(f, k)
        free_k, _ = unity_free(g)
        if free_k != base_free:
            violations.append(f"unity-free changed at iterate {k}")
        if base_amp.verdict == "yes" and amplified(g).verdict != "yes":
            violations.append(f"amplified lost at iterate {k}")
        if base_pol.verdict == "yes":
            pol_k = polarized(g)
            if pol_k.verdict != "yes" or pol_k.q != base_pol.q**k:
                violations.append(f"polarized(q^k) lost at iterate {k}")
    if base_amp.verdict == "yes":
        powers = [f.m ** k for k in range(kmax + 1)]
        for m_idx in range(1, kmax + 1):
            for n_idx in range(m_idx):
                if (powers[m_idx] - powers[n_idx]).det() == 0:
                    violations.append(
                        f"difference set infinite for m={m_idx}, n={n_idx}")
    return violations
