#include <gtest/gtest.h>

#include "paracyc/corr/dual_greenjulg.hpp"
#include "paracyc/corr/greenjulg.hpp"
#include "paracyc/corr/homotopy.hpp"
#include "paracyc/corr/nabla.hpp"
#include "paracyc/corr/stability.hpp"
#include "paracyc/perturb/boxtimes.hpp"

using namespace paracyc;

namespace {

void expect_all_pass(const CheckLog& log, const std::string& what) {
    EXPECT_FALSE(log.records().empty()) << what;
    for (auto& r : log.records()) EXPECT_EQ(r.status, Status::pass) << what << ": " << r.name << " | " << r.scope << " | " << r.witness;
}

}  // namespace

TEST(Homotopy, ConstantHomotopyHasZeroEta) {
    GAlgebra a = builtin::group_algebra_adjoint(FiniteGroup::cyclic(2));
    PolynomialHomotopy phi = constant_homotopy(a);
    FormSpace fa(a, 3), fb(a, 2);
    for (int n = 1; n <= 3; ++n) EXPECT_TRUE(cartan_eta(phi, fa, fb, n).is_zero());
    CheckLog log;
    xi2_and_homotopy_check(phi, log);
    expect_all_pass(log, "constant");
}

TEST(Homotopy, InnerNilpotentOnMatrices) {
    GAlgebra m = builtin::matrix_algebra(FiniteGroup::trivial(), 2);
    SparseVec N{{1, 1}};
    PolynomialHomotopy phi = inner_nilpotent_homotopy(m, N);
    EXPECT_NO_THROW(phi.validate());
    EXPECT_FALSE((phi.at1() - phi.at0()).is_zero());
    FormSpace fa(m, 3), fb(m, 2);
    EXPECT_FALSE(cartan_eta(phi, fa, fb, 1).is_zero());
    EXPECT_FALSE(cartan_eta(phi, fa, fb, 2).is_zero());
    CheckLog log;
    xi2_and_homotopy_check(phi, log);
    expect_all_pass(log, "matrix(2)");
}

TEST(Homotopy, EquivariantInnerNilpotent) {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    GAlgebra c = tensor_galgebras(builtin::matrix_algebra(z2, 2), builtin::functions_on_two_point_set(z2));
    // N = E12 (x) 1
    SparseVec N{{2, 1}, {3, 1}};
    PolynomialHomotopy phi = inner_nilpotent_homotopy(c, N);
    CheckLog log;
    xi2_and_homotopy_check(phi, log);
    expect_all_pass(log, "matrix(2) (x) C^2");
}

TEST(Homotopy, DualNumberScaling) {
    CheckLog log;
    xi2_and_homotopy_check(dual_number_scaling(FiniteGroup::cyclic(3)), log);
    expect_all_pass(log, "dual numbers");
}

TEST(Homotopy, RejectsNonMultiplicativeData) {
    PolynomialHomotopy phi = dual_number_scaling(FiniteGroup::trivial());
    phi.coeff[1] = SparseMatrix::identity(2);
    EXPECT_THROW(phi.validate(), InputError);
}

TEST(NablaRetraction, ScalarsLevelOne) {
    for (const FiniteGroup& g : {FiniteGroup::trivial(), FiniteGroup::cyclic(2)}) {
        FormSpace fs(builtin::scalars(g), 5);
        CheckLog log;
        NablaRetraction nr = nabla_retraction(fs, 1, &log);
        check_deformation(nr.datum, log);
        expect_all_pass(log, g.name());
    }
}

TEST(NablaRetraction, FunctionsOnG) {
    FormSpace fs(builtin::functions_OG(FiniteGroup::cyclic(2)), 4);
    CheckLog log;
    NablaRetraction nr = nabla_retraction(fs, 1, &log);
    check_deformation(nr.datum, log);
    expect_all_pass(log, "O(Z/2)");
    FormSpace fs2(builtin::functions_OG(FiniteGroup::cyclic(2)), 4);
    CheckLog log2;
    nabla_retraction(fs2, 2, &log2);
    expect_all_pass(log2, "O(Z/2), n = 2");
}

TEST(NablaRetraction, NoWitnessForDualNumbers) {
    FormSpace fs(builtin::dual_numbers(FiniteGroup::trivial()), 3);
    EXPECT_THROW(nabla_retraction(fs, 1), NoWitness);
}

TEST(Perturbation, SpecialRetractionAndTransfer) {
    FormSpace fs(builtin::scalars(FiniteGroup::cyclic(2)), 12);
    NablaRetraction nr = nabla_retraction(fs, 1);
    CheckLog log;
    RetractionDatum sp = make_special_retraction(nr.datum, &log);
    check_deformation(sp, log);
    PerturbedRetraction q = perturb(sp);
    EXPECT_GT(q.terms, 1);
    check_perturbation(sp, q, log);
    perturb_lemma_check(sp, 4, log);
    expect_all_pass(log, "scalars");
}

TEST(Perturbation, ZeroPerturbationRecoversRetraction) {
    FormSpace fs(builtin::scalars(FiniteGroup::trivial()), 5);
    RetractionDatum sp = make_special_retraction(nabla_retraction(fs, 1).datum);
    sp.BC = MixedOperator(5);
    sp.BC.min_shift = 1;
    sp.BD = MixedOperator(1);
    sp.BD.min_shift = 1;
    PerturbedRetraction q = perturb(sp);
    EXPECT_EQ(q.terms, 1);
    CheckLog log;
    tally_identity(log, "I = i", "", "", sp.dims_c, sp.dims_d, q.I, sp.i);
    tally_identity(log, "H = l", "", "", sp.dims_c, sp.dims_c, q.H, sp.h);
    expect_all_pass(log, "B = 0");
}

TEST(Perturbation, RejectsBrokenRetraction) {
    FormSpace fs(builtin::scalars(FiniteGroup::trivial()), 4);
    RetractionDatum r = nabla_retraction(fs, 1).datum;
    r.h = Rational(2) * r.h;
    EXPECT_THROW(make_special_retraction(r), ContractViolation);
}

TEST(Perturbation, TransferOnFunctionsOnG) {
    FormSpace fs(builtin::functions_OG(FiniteGroup::cyclic(3)), 7);
    CheckLog log;
    RetractionDatum sp = make_special_retraction(nabla_retraction(fs, 1).datum, &log);
    PerturbedRetraction q = perturb(sp);
    check_perturbation(sp, q, log);
    perturb_lemma_check(sp, 4, log);
    expect_all_pass(log, "O(Z/3)");
}

TEST(Perturbation, TruncatedTransferIsNotAChainMap) {
    FormSpace fs(builtin::scalars(FiniteGroup::cyclic(2)), 8);
    RetractionDatum sp = make_special_retraction(nabla_retraction(fs, 1).datum);
    PerturbedRetraction q = perturb(sp);
    q.I = sp.i;
    q.H = sp.h;
    CheckLog log;
    check_perturbation(sp, q, log);
    EXPECT_EQ(log.failures(), 2u);
}

TEST(BoxProduct, SquareIsOneMinusT) {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    FormSpace fs(unitarize(builtin::dual_numbers(z2)), 2);
    ParaComplex x = x_complex(fs);
    FormSpace fs2(unitarize(builtin::functions_on_two_point_set(z2)), 2);
    ParaComplex y = x_complex(fs2);
    for (const ParaComplex& b : {boxtimes(x, x), boxtimes(y, y), boxtimes(x, y)}) {
        CheckLog log;
        check_paracomplex(b, log);
        EXPECT_EQ(log.failures(), 0u) << b.name;
        for (auto& r : log.records()) EXPECT_NE(r.status, Status::fail) << r.name << " | " << r.witness;
    }
    EXPECT_FALSE(boxtimes(y, y).T0.is_identity());
}

TEST(BoxProduct, UnitAndAssociativityOfDimensions) {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    FormSpace fs(builtin::functions_on_two_point_set(z2), 2);
    ParaComplex x = x_complex(fs);
    ParaComplex u = og_point(std::make_shared<const FiniteGroup>(z2));
    ParaComplex xu = boxtimes(x, u);
    EXPECT_EQ(xu.even_dim(), x.even_dim());
    EXPECT_EQ(xu.odd_dim(), x.odd_dim());
    // Sectorwise reordering identifies X [x] O_G with X.
    auto perm = [&](const std::vector<SparseMatrix>& og, std::size_t dim) {
        std::vector<SparseVec> cols(dim);
        std::size_t pos = 0;
        for (auto& m : og)
            for (std::size_t j = 0; j < dim; ++j)
                if (!m.column(j).empty()) cols[j] = SparseVec{{static_cast<Index>(pos++), 1}};
        return SparseMatrix::from_columns(dim, cols);
    };
    SparseMatrix p0 = perm(x.og0, x.even_dim()), p1 = perm(x.og1, x.odd_dim());
    EXPECT_EQ(xu.d0 * p0, p1 * x.d0);
    EXPECT_EQ(xu.d1 * p1, p0 * x.d1);
    EXPECT_EQ(xu.T0 * p0, p0 * x.T0);
    ParaComplex l = boxtimes(boxtimes(x, x), x), r = boxtimes(x, boxtimes(x, x));
    EXPECT_EQ(l.even_dim(), r.even_dim());
    EXPECT_EQ(l.odd_dim(), r.odd_dim());
    CheckLog log;
    check_paracomplex(l, log);
    EXPECT_EQ(log.failures(), 0u);
}

TEST(BoxProduct, TrivialTGivesSupercomplex) {
    FiniteGroup g = FiniteGroup::trivial();
    FormSpace fs(builtin::dual_numbers(g), 2);
    ParaComplex x = x_complex(fs);
    ASSERT_TRUE(x.is_complex());
    ParaComplex b = boxtimes(x, x);
    EXPECT_TRUE(b.is_complex());
    EXPECT_TRUE((b.d1 * b.d0).is_zero());
    EXPECT_TRUE((b.d0 * b.d1).is_zero());
}

TEST(BoxProduct, NeedsOGStructure) {
    ParaComplex c = ParaComplex::with_identity_T("plain", SparseMatrix::zero(1, 1), SparseMatrix::zero(1, 1));
    EXPECT_THROW(boxtimes(c, c), InputError);
}

TEST(Stability, KernelPairingsAreAdmissible) {
    for (Measure m : {Measure::counting, Measure::normalized})
        for (const FiniteGroup& g : {FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric(3)}) {
            AdmissiblePairing p = kernel_pairing(g, m);
            EXPECT_NO_THROW(p.validate());
            GAlgebra l = pairing_algebra(p);
            EXPECT_NO_THROW(l.validate());
            // l(b) is K_G with its product and action.
            GAlgebra k = builtin::kernels_KG(g, m);
            EXPECT_EQ(l.mult, k.mult);
            SparseVec e = pairing_idempotent(p);
            EXPECT_EQ(l.multiply(e, e), e);
            EXPECT_EQ(twisted_trace_defect(p), "");
        }
}

TEST(Stability, OrdinaryTraceAtIdentity) {
    AdmissiblePairing p = kernel_pairing(FiniteGroup::cyclic(3), Measure::counting);
    GAlgebra l = pairing_algebra(p);
    auto tr = twisted_trace(p, 0);
    for (std::size_t x = 0; x < l.dim(); ++x)
        for (std::size_t y = 0; y < l.dim(); ++y) EXPECT_EQ(apply_functional(tr, l.product(x, y)), apply_functional(tr, l.product(y, x)));
}

TEST(Stability, BrokenPairingDetected) {
    AdmissiblePairing p = kernel_pairing(FiniteGroup::cyclic(2), Measure::counting);
    p.pair = SparseMatrix::from_columns(2, {SparseVec{{0, 1}}, SparseVec{{1, 2}}});
    EXPECT_THROW(p.validate(), InputError);
}

TEST(Stability, TraceIsChainMapAndSplitsInclusion) {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    for (Measure m : {Measure::counting, Measure::normalized}) {
        for (const GAlgebra& a : {builtin::scalars(z2), builtin::functions_on_two_point_set(z2), builtin::dual_numbers(z2)}) {
            CheckLog log;
            stability_checks(a, kernel_pairing(z2, m), log);
            expect_all_pass(log, a.name);
        }
    }
    CheckLog log;
    stability_checks(builtin::scalars(FiniteGroup::cyclic(3)), kernel_pairing(FiniteGroup::cyclic(3), Measure::counting), log);
    expect_all_pass(log, "Z/3");
}

TEST(GreenJulg, CyclicGroupOfOrderTwo) {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    for (const GAlgebra& r : {builtin::functions_OG(z2), builtin::functions_translation(z2), builtin::group_algebra_adjoint(z2),
                              builtin::matrix_algebra(z2, 2), builtin::upper_triangular(z2)}) {
        CheckLog log;
        GreenJulgData d = green_julg(r);
        green_julg_checks(d, log);
        expect_all_pass(log, r.name);
    }
}

TEST(GreenJulg, TranslationHasNontrivialCommutators) {
    GreenJulgData d = green_julg(builtin::functions_translation(FiniteGroup::cyclic(2)));
    EXPECT_GT(rank(d.K0), 0u);
    EXPECT_FALSE(d.lambda0.is_identity());
    EXPECT_EQ(d.Q0.dim(), 2u);
    EXPECT_EQ(d.Q1.dim(), 1u);
}

TEST(GreenJulg, TrivialGroupIsIdentity) {
    GreenJulgData d = green_julg(builtin::upper_triangular(FiniteGroup::trivial()));
    EXPECT_TRUE(d.lambda0.is_identity());
    EXPECT_EQ(rank(d.K0), 0u);
    EXPECT_EQ(rank(d.K1), 0u);
    EXPECT_TRUE(d.alpha0.is_identity());
    EXPECT_TRUE(d.beta1.is_identity());
    CheckLog log;
    green_julg_checks(d, log);
    expect_all_pass(log, "trivial");
}

TEST(GreenJulg, LargerGroups) {
    for (const GAlgebra& r : {builtin::scalars(FiniteGroup::cyclic(3)), builtin::functions_translation(FiniteGroup::symmetric(3)),
                              builtin::group_algebra_adjoint(FiniteGroup::symmetric(3))}) {
        CheckLog log;
        green_julg_checks(green_julg(r), log);
        expect_all_pass(log, r.name + " over " + r.group.name());
    }
}

TEST(GreenJulg, CorruptedBetaIsDetected) {
    GreenJulgData d = green_julg(builtin::functions_translation(FiniteGroup::cyclic(2)));
    d.beta1 = d.beta1.scaled(Rational(2));
    CheckLog log;
    green_julg_checks(d, log);
    EXPECT_GE(log.failures(), 2u);
}

TEST(GreenJulg, NeedsUnit) {
    GAlgebra a = builtin::dual_numbers(FiniteGroup::cyclic(2));
    a.unit.reset();
    EXPECT_THROW(green_julg(a), InputError);
}

TEST(DualGreenJulg, UnitarizedDualNumbersOverZ2) {
    GAlgebra a = unitarize(builtin::dual_numbers(FiniteGroup::cyclic(2)));
    DualGreenJulg d = dual_green_julg(a, 3);
    CheckLog log;
    dual_green_julg_checks(d, log);
    expect_all_pass(log, a.name);
    for (int n = 0; n <= 2; ++n) {
        SparseMatrix e = d.phi[static_cast<std::size_t>(n)] * d.tau[static_cast<std::size_t>(n)];
        EXPECT_FALSE(e.is_identity()) << "degree " << n;
        EXPECT_FALSE(d.h[static_cast<std::size_t>(n)].is_zero()) << "degree " << n;
    }
}

TEST(DualGreenJulg, TrivialGroup) {
    DualGreenJulg d = dual_green_julg(builtin::upper_triangular(FiniteGroup::trivial()), 2);
    for (int n = 0; n <= 2; ++n) {
        EXPECT_TRUE((d.phi[static_cast<std::size_t>(n)] * d.tau[static_cast<std::size_t>(n)]).is_identity());
        EXPECT_TRUE((d.tau[static_cast<std::size_t>(n)] * d.phi[static_cast<std::size_t>(n)]).is_identity());
    }
    CheckLog log;
    dual_green_julg_checks(d, log);
    expect_all_pass(log, "trivial");
}

TEST(DualGreenJulg, OtherGroups) {
    for (const GAlgebra& a : {builtin::scalars(FiniteGroup::cyclic(3)), builtin::functions_on_two_point_set(FiniteGroup::cyclic(2)),
                              builtin::scalars(FiniteGroup::symmetric(3))}) {
        CheckLog log;
        dual_green_julg_checks(dual_green_julg(a, 2), log);
        expect_all_pass(log, a.name + " over " + a.group.name());
    }
}

TEST(DualGreenJulg, TraceOnDegreeZero) {
    DualGreenJulg d = dual_green_julg(builtin::scalars(FiniteGroup::trivial()), 1);
    EXPECT_TRUE(d.tr[0].is_identity());
}

TEST(DualGreenJulg, WrongSignIsDetected) {
    DualGreenJulg d = dual_green_julg(unitarize(builtin::dual_numbers(FiniteGroup::cyclic(2))), 2);
    d.h[1] = -d.h[1];
    CheckLog log;
    dual_green_julg_checks(d, log);
    EXPECT_EQ(log.failures(), 1u);
}

TEST(DualGreenJulg, NeedsUnit) {
    GAlgebra a = builtin::dual_numbers(FiniteGroup::cyclic(2));
    a.unit.reset();
    EXPECT_THROW(dual_green_julg(a, 2), InputError);
}
