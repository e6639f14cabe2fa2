"""Acceptance gate: one test per release criterion, exact arithmetic only.

Every check here is an equality of exact scalars, forms, or integer ranks;
there are no tolerances anywhere.  Each test prints one summary line so a
plain ``pytest -v -s tests/test_acceptance.py`` reads as a checklist, and
each asserts its own wall-clock budget.
"""
import json
import random
import subprocess
import sys
import time

from gradedmat.bundles import (
    conjugated_rho,
    connection_form_from_rho,
    fm_is_zero,
    is_graded_free,
    rank_one_connection,
)
from gradedmat.cohomology import (
    betti_numbers,
    body_map_matrix,
    ce_oracle,
    differential_matrix,
    ordinary_sl_basis,
)
from gradedmat.constants import verify_appendix
from gradedmat.formspace import (
    basis_form,
    form_basis_labels,
    form_to_sparse,
    invariant_forms,
    vector_to_form,
)
from gradedmat.forms import (
    DerivationVector,
    GradedForm,
    canonical_one_form,
    derivation_bracket,
    exterior_derivative,
    exterior_derivative_generators,
    frame_form,
    frame_forms_from_differentials,
    interior_product,
    lie_derivative,
    wedge,
)
from gradedmat.matrices import GradedMatrix, graded_commutator
from gradedmat.sampling import random_even_invertible, random_form
from gradedmat.scalars import Scalar
from gradedmat.symplectic import (
    analyze,
    canonical_two_form,
    is_symplectic,
    symplectic_uniqueness_holds,
)
from tests.test_bundles import brute_force_free, idempotent_cover_connection


def conclude(num, desc, failures, t0, budget):
    elapsed = time.monotonic() - t0
    ok = not failures and elapsed < budget
    line = (
        f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {desc} "
        f"({elapsed:.1f}s, budget {budget}s)"
    )
    if failures:
        line += f"; first failure: {failures[0]}"
    print(line)
    assert not failures, f"criterion {num}: {len(failures)} failed, first: {failures[0]}"
    assert elapsed < budget, f"criterion {num} took {elapsed:.1f}s, budget {budget}s"


def test_criterion_1_structure_constant_identities(sc21, sc31, sc20, sc30):
    t0 = time.monotonic()
    failures = []
    for sc in (sc21, sc31, sc20, sc30):
        rep = verify_appendix(sc)
        for c in rep.failures():
            failures.append(f"({sc.n}|{sc.m}) {c.name}: {c.counterexample}")
    conclude(1, "structure constant identity catalog at four sizes",
             failures, t0, 60)


def test_criterion_2_cartan_calculus(sc21):
    t0 = time.monotonic()
    failures = []
    rng = random.Random(0)
    dim = sc21.dim

    # d squares to zero on every theta-monomial basis form of degree <= 3.
    # The generator route carries the full sweep; the values route covers
    # the same ground completely through degree 2 (as the composite of the
    # cached differential matrices) plus seeded degree-3 monomials, and
    # seeded degree-4 monomials pin the routes against each other at the
    # one degree where only the sweep's inner step runs.
    for p in range(0, 4):
        for lab in form_basis_labels(sc21, p):
            w = basis_form(sc21, lab)
            dd = exterior_derivative_generators(
                sc21, exterior_derivative_generators(sc21, w)
            )
            if not dd.is_zero():
                failures.append(f"d.d != 0 (generators) at {lab}")
    for p in range(0, 3):
        outer = differential_matrix(sc21, p + 1).matrix
        inner = differential_matrix(sc21, p).matrix
        if not outer.compose_is_zero(inner):
            failures.append(f"d.d != 0 (values) at degree {p}")
    data3 = differential_matrix(sc21, 3)
    for j in [rng.randrange(data3.dim) for _ in range(40)]:
        col = data3.matrix.columns[j]
        w4 = vector_to_form(
            sc21, 4,
            [col.get(i, 0) for i in range(len(data3.matrix.out_labels))],
            data3.matrix.out_labels,
        )
        if not exterior_derivative(sc21, w4).is_zero():
            failures.append(f"d.d != 0 (values) at degree-3 column {j}")
    labels4 = form_basis_labels(sc21, 4)
    for lab in rng.sample(labels4, 40):
        w = basis_form(sc21, lab)
        if exterior_derivative(sc21, w) != exterior_derivative_generators(sc21, w):
            failures.append(f"degree-4 route mismatch at {lab}")

    # d commutes with every Lie derivative on 20 seeded homogeneous
    # samples per degree
    for p in range(0, 4):
        for _ in range(20):
            w = random_form(rng, sc21, p, parity=rng.randint(0, 1))
            a = rng.randrange(dim)
            da = DerivationVector.basis(sc21, a)
            lhs = lie_derivative(
                sc21, da, exterior_derivative_generators(sc21, w)
            )
            rhs = exterior_derivative_generators(
                sc21, lie_derivative(sc21, da, w)
            )
            if lhs != rhs:
                failures.append(f"L d != d L at p={p} a={a}")

    # contraction anticommutation, the homotopy formula, and the mixed
    # contraction relation, on 20 seeded homogeneous samples per degree
    for p in range(0, 4):
        for _ in range(20):
            wpar = rng.randint(0, 1)
            w = random_form(rng, sc21, p, parity=wpar)
            a, b = rng.randrange(dim), rng.randrange(dim)
            da = DerivationVector.basis(sc21, a)
            db = DerivationVector.basis(sc21, b)
            pa, pb = sc21.parity(a), sc21.parity(b)
            if p >= 2:
                lhs = interior_product(da, interior_product(db, w))
                rhs = interior_product(db, interior_product(da, w)).scale(
                    1 if (pa and pb) else -1
                )
                if lhs != rhs:
                    failures.append(f"contraction anticommutation p={p}")
            lhs = interior_product(da, exterior_derivative_generators(sc21, w))
            if p >= 1:
                lhs = lhs + exterior_derivative_generators(
                    sc21, interior_product(da, w)
                )
            rhs = lie_derivative(sc21, da, w).scale(-1 if (pa and wpar) else 1)
            if lhs != rhs:
                failures.append(f"homotopy formula p={p} a={a}")
            if p >= 1:
                lhs = lie_derivative(sc21, da, interior_product(db, w)) - (
                    interior_product(db, lie_derivative(sc21, da, w))
                )
                br = derivation_bracket(sc21, da, db)
                rhs = interior_product(br, w).scale(-1 if (pa and wpar) else 1)
                if lhs != rhs:
                    failures.append(f"mixed relation p={p} a={a} b={b}")

    # the same three relations on seeded basis monomials
    all_labels = [
        lab for p in range(1, 4) for lab in form_basis_labels(sc21, p)
    ]
    for lab in rng.sample(all_labels, 40):
        w = basis_form(sc21, lab)
        p = len(lab[0])
        wpar = w.homogeneous_parity()
        a = rng.randrange(dim)
        da = DerivationVector.basis(sc21, a)
        pa = sc21.parity(a)
        lhs = interior_product(
            da, exterior_derivative_generators(sc21, w)
        ) + exterior_derivative_generators(sc21, interior_product(da, w))
        rhs = lie_derivative(sc21, da, w).scale(-1 if (pa and wpar) else 1)
        if lhs != rhs:
            failures.append(f"homotopy formula at monomial {lab}")

    # the three Leibniz rules on 20 seeded homogeneous pairs per total
    # degree
    for total in range(0, 4):
        for _ in range(20):
            p1 = rng.randint(0, total)
            p2 = total - p1
            par1, par2 = rng.randint(0, 1), rng.randint(0, 1)
            w1 = random_form(rng, sc21, p1, parity=par1)
            w2 = random_form(rng, sc21, p2, parity=par2)
            a = rng.randrange(dim)
            da = DerivationVector.basis(sc21, a)
            pa = sc21.parity(a)
            lhs = exterior_derivative_generators(sc21, wedge(w1, w2))
            rhs = wedge(exterior_derivative_generators(sc21, w1), w2) + wedge(
                w1, exterior_derivative_generators(sc21, w2)
            ).scale((-1) ** p1)
            if lhs != rhs:
                failures.append(f"derivative Leibniz p1={p1} p2={p2}")
            lhs = lie_derivative(sc21, da, wedge(w1, w2))
            rhs = wedge(lie_derivative(sc21, da, w1), w2) + wedge(
                w1, lie_derivative(sc21, da, w2)
            ).scale(-1 if (pa and par1) else 1)
            if lhs != rhs:
                failures.append(f"Lie Leibniz p1={p1} p2={p2} a={a}")
            if total >= 1:
                lhs = interior_product(da, wedge(w1, w2))
                rhs = GradedForm.zero(sc21, total - 1)
                if p1 >= 1:
                    rhs = rhs + wedge(interior_product(da, w1), w2).scale(
                        -1 if (pa and par2) else 1
                    )
                if p2 >= 1:
                    rhs = rhs + wedge(w1, interior_product(da, w2)).scale(
                        (-1) ** p1
                    )
                if lhs != rhs:
                    failures.append(f"contraction Leibniz p1={p1} p2={p2}")

    conclude(2, "Cartan calculus identities at (2|1)", failures, t0, 120)


def test_criterion_3_derivative_route_agreement(sc21, sc20):
    t0 = time.monotonic()
    failures = []
    for sc in (sc21, sc20):
        for p in range(0, 4):
            data = differential_matrix(sc, p)
            out_index = {
                lab: i for i, lab in enumerate(data.matrix.out_labels)
            }
            for j, lab in enumerate(data.labels):
                got = form_to_sparse(
                    exterior_derivative_generators(sc, basis_form(sc, lab)),
                    out_index,
                )
                if got != data.matrix.columns[j]:
                    failures.append(f"({sc.n}|{sc.m}) p={p} label {lab}")
    conclude(3, "values and generator derivative routes agree on all "
                "basis forms through degree 3", failures, t0, 120)


def test_criterion_4_canonical_form_suite(sc21, sc31):
    t0 = time.monotonic()
    failures = []
    for sc in (sc21, sc31):
        tag = f"({sc.n}|{sc.m})"
        th = canonical_one_form(sc)
        for a in range(sc.dim):
            if not lie_derivative(sc, DerivationVector.basis(sc, a), th).is_zero():
                failures.append(f"{tag} L_bd{a} Theta != 0")
        dth = exterior_derivative(sc, th)
        if dth != wedge(th, th):
            failures.append(f"{tag} dTheta != Theta^Theta")
        for a in range(sc.dim):
            w = GradedForm.from_matrix(sc, sc.basis.elements[a])
            if exterior_derivative(sc, w) != wedge(th, w) - wedge(w, th):
                failures.append(f"{tag} dE_{a} != [Theta, E_{a}]")
        inv = invariant_forms(sc, 1)
        if len(inv) != 1:
            failures.append(f"{tag} invariant 1-forms have dimension {len(inv)}")
        else:
            key = next(iter(th.coeffs))
            mat = th.coeffs[key]
            r, c = next(
                (r, c)
                for r in range(mat.size)
                for c in range(mat.size)
                if mat.entries[r][c]
            )
            ratio = inv[0].coefficient(key).entries[r][c] / mat.entries[r][c]
            if not ratio or inv[0] != th.scale(ratio):
                failures.append(f"{tag} invariant 1-form is not a multiple "
                                f"of Theta")
        rec = frame_forms_from_differentials(sc)
        for a in range(sc.dim):
            if rec[a] != frame_form(sc, a):
                failures.append(f"{tag} frame inversion missed theta^{a}")
    conclude(4, "canonical 1-form: invariance, structure equation, "
                "uniqueness, frame inversion at (2|1) and (3|1)",
             failures, t0, 300)


def test_criterion_5_cohomology_matches_classical_oracle(sc21, sc20):
    t0 = time.monotonic()
    failures = []
    want = ce_oracle(ordinary_sl_basis(2), 3)
    if want != [1, 0, 0, 1]:
        failures.append(f"oracle betti {want}")
    shapes = []
    for sc in (sc21, sc20):
        got = betti_numbers(sc, 3)
        if got != want:
            failures.append(f"({sc.n}|{sc.m}) betti {got} != {want}")
        top = differential_matrix(sc, 3)
        shapes.append(f"{top.matrix.nrows}x{top.matrix.ncols}")
    conclude(5, "betti numbers equal the classical oracle at (2|1) and "
                f"(2|0); largest exact rank {shapes[0]}", failures, t0, 1800)


def test_criterion_6_body_projection(sc21, sc20):
    t0 = time.monotonic()
    failures = []
    blk = sc20.dim

    def survives(lab):
        key, r, c = lab
        return all(i < blk for i in key) and r < 2 and c < 2

    # chain map on every basis form of degree <= 3, straight off the
    # cached differential matrices of both complexes
    for p in range(0, 4):
        up = differential_matrix(sc21, p)
        down = differential_matrix(sc20, p)
        down_index = {lab: j for j, lab in enumerate(down.labels)}
        body_out = {
            lab: i for i, lab in enumerate(down.matrix.out_labels)
        }
        for j, lab in enumerate(up.labels):
            col = up.matrix.columns[j]
            lhs = {}
            for i, v in col.items():
                out_lab = up.matrix.out_labels[i]
                if survives(out_lab):
                    lhs[body_out[out_lab]] = v
            if survives(lab):
                rhs = down.matrix.columns[down_index[lab]]
            else:
                rhs = {}
            if lhs != rhs:
                failures.append(f"chain map breaks at p={p} label {lab}")
    # exact surjectivity in every degree
    for p in range(0, 4):
        bm = body_map_matrix(sc21, sc20, p)
        if bm.rank() != len(form_basis_labels(sc20, p)):
            failures.append(f"body map not surjective at p={p}")
    conclude(6, "body projection is a surjective chain map", failures, t0, 300)


def test_criterion_7_symplectic_structure(sc21):
    t0 = time.monotonic()
    failures = []
    omega = canonical_two_form(sc21)
    if not is_symplectic(sc21, omega):
        failures.append("dTheta not certified symplectic")
    for c in (1, 2, -3):
        built, cert = analyze(sc21, omega.scale(c))
        if built is None:
            failures.append(f"{c}.dTheta not symplectic: {cert}")
            continue
        inv = Scalar.of(1) / Scalar.of(c)
        for a in range(sc21.dim):
            field = built.hamiltonian_field(sc21.basis.elements[a])
            want = DerivationVector.basis(sc21, a).scale(inv)
            if field.coords != want.coords:
                failures.append(f"hamiltonian field c={c} a={a}")
    built, _ = analyze(sc21, omega)
    for a in range(sc21.dim):
        for b in range(sc21.dim):
            got = built.poisson_bracket(
                sc21.basis.elements[a], sc21.basis.elements[b]
            )
            if got != graded_commutator(
                sc21.basis.elements[a], sc21.basis.elements[b]
            ):
                failures.append(f"poisson bracket ({a},{b})")
    if not symplectic_uniqueness_holds(sc21):
        failures.append("closed invariant even 2-forms exceed the dTheta line")
    conclude(7, "symplectic certificate, Hamiltonian fields, Poisson "
                "bracket, uniqueness at (2|1)", failures, t0, 300)


def test_criterion_8_connections_and_curvature(sc21):
    t0 = time.monotonic()
    failures = []
    th = canonical_one_form(sc21)
    constructed = []

    conn = rank_one_connection(sc21, th)
    constructed.append(("theta", conn))
    if not fm_is_zero(conn.curvature()):
        failures.append("alpha = Theta is not flat")

    for seed in (1, 2, 3):
        g = random_even_invertible(random.Random(seed), 2, 1)
        rho = conjugated_rho(sc21, g)
        conn = rank_one_connection(sc21, connection_form_from_rho(sc21, rho))
        constructed.append((f"conjugated seed {seed}", conn))
        if not fm_is_zero(conn.curvature()):
            failures.append(f"conjugated connection (seed {seed}) not flat")

    conn = rank_one_connection(sc21, th.scale(2))
    constructed.append(("2 Theta", conn))
    if fm_is_zero(conn.curvature()):
        failures.append("alpha = 2 Theta reported flat")

    conn = idempotent_cover_connection(sc21, random.Random(71))
    constructed.append(("idempotent cover", conn))
    if fm_is_zero(conn.curvature()):
        failures.append("idempotent-cover connection reported flat")

    for name, conn in constructed:
        if not conn.bianchi_holds():
            failures.append(f"Bianchi identity fails for {name}")

    for r in range(11):
        for s in range(11):
            if is_graded_free(2, 1, r, s) != brute_force_free(2, 1, r, s):
                failures.append(f"freeness mismatch at (r,s)=({r},{s})")

    conclude(8, "flat and non-flat connections, Bianchi identity, "
                "graded freeness", failures, t0, 300)


def test_criterion_9_deterministic_reports(tmp_path):
    t0 = time.monotonic()
    failures = []
    outs = []
    for i in (0, 1):
        path = tmp_path / f"verify{i}.json"
        proc = subprocess.run(
            [sys.executable, "-m", "gradedmat", "verify", "--n", "2",
             "--m", "1", "--seed", "0", "--out", str(path)],
            capture_output=True,
            text=True,
        )
        if proc.returncode != 0:
            failures.append(f"run {i} exited {proc.returncode}: {proc.stderr}")
            continue
        outs.append(path.read_bytes())
    if len(outs) == 2:
        if outs[0] != outs[1]:
            failures.append("reports differ between runs")
        report = json.loads(outs[0])
        if not report["passed"]:
            failures.append("verification report failed")
        if len(report["config"]["build"]) != 12:
            failures.append("missing build identifier")
    conclude(9, "verification reports are byte-identical across runs",
             failures, t0, 300)
