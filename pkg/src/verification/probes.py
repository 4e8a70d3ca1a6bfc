# src/verification/probes.py
# Purpose: kernel-of-reduction, v-torsion/injectivity and annihilator probes
"""Probes that go beyond isomorphism types.

- verify_kernel_lemma: ker(N^k -> H_*(B(Z/p)^k; F_p)) equals R * N^k for
  R = (v_k, v_{k+1}, ...), as subgroups of each (N^k)_d.
- squeeze_evidence: v_l-nilpotence of N^k classes (l < k) and injectivity
  of v_l on N^l, inside a finite window.
- annihilator_probe: which v_j kill the toral class in chain-level homology.
"""

from fractions import Fraction
from typing import Optional

from src.chains.complex import assemble_complex
from src.chains.homology import homology_table
from src.chains.operators import multiplication_degree, multiply_class, toral_class
from src.coefficients.generators import generator_degree
from src.coefficients.polynomial import GradedPolynomial
from src.coefficients.pseries import PSeriesTable
from src.core.finite_group import FinitePGroup
from src.core.scalars import valuation
from src.core.smith import (
    contains_span,
    image_membership,
    induced_kernel,
    preimage_lattice,
    quotient_structure,
    smith_normal_form,
)
from src.core.sparse_matrix import SparseMatrix
from src.core.verdict import Verdict
from src.utils.error_handler import PreconditionError
from src.utils.logging_factory import LoggingFactory
from src.verification.kunneth import resolve_pseries
from src.verification.presentations import NPowerModel, NPowerPresentation
from src.verification.structure_table import VerificationReport

logger = LoggingFactory.get_logger(__name__)

MAX_NILPOTENCE_STEPS = 32


def _reduction_matrix(presentation: NPowerPresentation) -> SparseMatrix:
    """u^k on generators: monomial 1 times y_I goes to h_I, everything else to 0."""
    targets = [g for g in presentation.generators if g[0].is_one()]
    row_of = {g: r for r, g in enumerate(targets)}
    entries = {
        (row_of[g], c): Fraction(1)
        for c, g in enumerate(presentation.generators)
        if g in row_of
    }
    return SparseMatrix(presentation.relations.p, len(targets), presentation.size, entries)


def _ideal_lattice(presentation: NPowerPresentation, k: int, stored: int) -> SparseMatrix:
    """Generators divisible by some v_j (j >= k), together with the relations."""
    columns = [
        {c: Fraction(1)}
        for c, (monomial, _) in enumerate(presentation.generators)
        if any(monomial.divisible_by_generator(j) for j in range(max(k, 1), stored + 1))
    ]
    generated = SparseMatrix.from_columns(presentation.relations.p, presentation.size, columns)
    return generated.hstack(presentation.relations)


def verify_kernel_lemma(
    p: int, k: int, max_degree: int, pseries: Optional[PSeriesTable] = None
) -> VerificationReport:
    """Per degree: ker(u^k) == R * N^k by mutual inclusion and equal orders.

    Degrees where no v_j with j >= k fits are VACUOUS unless the kernel is
    nonzero there.
    """
    if k < 1:
        raise PreconditionError("the kernel probe needs k >= 1")
    pseries = resolve_pseries(p, max_degree, pseries)
    model = NPowerModel(pseries, k)
    stored = pseries.table.size
    report = VerificationReport(
        "kernel", {"p": p, "k": k, "max_degree": max_degree}, (k, max_degree)
    )
    for d in range(k, max_degree + 1):
        presentation = model.presentation(d)
        if presentation.size == 0:
            continue
        relations = presentation.relations
        reduction = _reduction_matrix(presentation)
        scaled = SparseMatrix(
            p, reduction.rows, reduction.rows, {(r, r): Fraction(p) for r in range(reduction.rows)}
        )
        kernel_lattice = preimage_lattice(reduction, scaled)
        ideal_lattice = _ideal_lattice(presentation, k, stored)

        kernel = quotient_structure(kernel_lattice, relations)
        ideal_part = quotient_structure(ideal_lattice, relations)
        equal = (
            contains_span(kernel_lattice, ideal_lattice)
            and contains_span(ideal_lattice, kernel_lattice)
            and kernel == ideal_part
        )
        fits = any(generator_degree(p, j) <= d - k for j in range(max(k, 1), stored + 1))
        verdict = Verdict.of(equal)
        note = ""
        if equal and not fits:
            verdict, note = Verdict.VACUOUS, f"no v_j with j >= {k} fits in degree {d}"
        report.add_cell(d, kernel, ideal_part, bucket="kernel", verdict=verdict, note=note)
    report.log_summary()
    return report


def _torsion_representatives(presentation: NPowerPresentation):
    """(exponent, generator-coordinate vector) for each nonzero cyclic summand."""
    snf = smith_normal_form(presentation.relations)
    p = presentation.relations.p
    result = []
    for i in range(presentation.size):
        e = valuation(snf.diagonal[i], p) if i < snf.rank else None
        if i < snf.rank and e == 0:
            continue
        result.append((e, snf.left_inverse.column(i)))
    return result


def squeeze_evidence(
    p: int, k: int, l: int, max_degree: int, pseries: Optional[PSeriesTable] = None
) -> VerificationReport:
    """Evidence that every v_l-equivariant map N^k -> N^l vanishes.

    (a) each cyclic summand of (N^k)_d is killed by a power of v_l inside the
        window, otherwise INCONCLUSIVE; (b) v_l : (N^l)_d -> (N^l)_{d+|v_l|}
        has zero kernel.

    Raises:
        PreconditionError: if l >= k
    """
    if not 0 <= l < k:
        raise PreconditionError(f"squeeze needs 0 <= l < k, got l={l}, k={k}")
    pseries = resolve_pseries(p, max_degree, pseries)
    shift = generator_degree(p, l) if l else 0
    if l and not pseries.table.has_generator(l):
        raise PreconditionError(f"v{l} does not fit below degree {max_degree}")
    v_l = GradedPolynomial.generator(pseries.table, l)
    report = VerificationReport(
        "squeeze", {"p": p, "k": k, "l": l, "max_degree": max_degree}, (1, max_degree)
    )

    source = NPowerModel(pseries, k)
    for d in range(k, max_degree + 1):
        presentation = source.presentation(d)
        classes = _torsion_representatives(presentation)
        if not classes:
            continue
        killed = []
        undecided = 0
        for exponent, vector in classes:
            degree, current, steps = d, vector, 0
            while current and steps < MAX_NILPOTENCE_STEPS:
                if degree + shift > max_degree:
                    break
                current = source.multiplication_matrix(v_l, degree).apply(current)
                degree += shift
                steps += 1
                target = source.presentation(degree).relations
                if image_membership(target, current) is not None:
                    current = {}
            if current:
                undecided += 1
            else:
                killed.append(exponent or 0)
        verdict = Verdict.INCONCLUSIVE if undecided else Verdict.PASS
        note = f"{undecided} classes not decided in window" if undecided else ""
        report.add_cell(
            d,
            presentation.group,
            FinitePGroup(p, tuple(killed)),
            bucket="nilpotent",
            verdict=verdict,
            note=note,
        )

    target_model = NPowerModel(pseries, l)
    for d in range(l, max_degree - shift + 1):
        source_relations = target_model.presentation(d).relations
        target_relations = target_model.presentation(d + shift).relations
        if source_relations.rows == 0:
            continue
        lift = target_model.multiplication_matrix(v_l, d)
        kernel = induced_kernel(source_relations, target_relations, lift)
        report.add_cell(d, kernel, FinitePGroup.zero(p), bucket="injective")
    report.log_summary()
    return report


def annihilator_probe(
    p: int, n: int, max_degree: int, pseries: Optional[PSeriesTable] = None
) -> VerificationReport:
    """v_j * toral class: zero for j < n, nonzero for j >= n where it fits."""
    pseries = resolve_pseries(p, max_degree, pseries)
    cx = assemble_complex(p, n, max_degree, pseries)
    report = VerificationReport(
        "annihilator", {"p": p, "n": n, "max_degree": max_degree}, cx.homology_window
    )
    top = cx.homology_window[1]
    if n > top:
        report.add_check("toral class in window", Verdict.VACUOUS, f"degree {n} > {top}")
        return report
    homology = homology_table(cx)
    toral = toral_class(cx, homology)
    report.add_check("toral class nonzero", Verdict.of(not toral.is_zero))

    tested_outside = False
    for j in range(0, cx.table.size + 1):
        target = n + multiplication_degree(cx, j)
        if target > top:
            break
        product = multiply_class(cx, j, homology, toral)
        name = "p" if j == 0 else f"v{j}"
        if j < n:
            report.add_check(
                f"{name} * toral = 0", Verdict.of(product.is_zero), f"degree {target}"
            )
        else:
            tested_outside = True
            report.add_check(
                f"{name} * toral != 0", Verdict.of(not product.is_zero), f"degree {target}"
            )
    if not tested_outside:
        report.add_check(
            f"v{n} * toral != 0",
            Verdict.VACUOUS,
            f"degree {n + generator_degree(p, n)} beyond window {cx.homology_window}",
        )
    report.log_summary()
    return report
