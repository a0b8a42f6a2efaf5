#include "mcf_ttdl/design.hpp"
#include "mcf_ttdl/hetero_delay.hpp"
#include "mcf_ttdl/nelder_mead.hpp"
#include "mcf_ttdl/profile_fit.hpp"
#include "mcf_ttdl/rf_filter.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace mcf;

TEST(SpacingForFsr, Examples) {
    EXPECT_NEAR(spacing_for_fsr(4.97, 1.4682), 20.54, 0.005);
    EXPECT_NEAR(spacing_for_fsr(5.105, 1.4682), 20.00, 0.005);
    EXPECT_DOUBLE_EQ(spacing_for_fsr(2 * 4.97, 1.4682), 0.5 * spacing_for_fsr(4.97, 1.4682));
    EXPECT_THROW(spacing_for_fsr(0.0, 1.4682), Error);
    EXPECT_THROW(spacing_for_fsr(-1.0, 1.4682), Error);
    EXPECT_THROW(spacing_for_fsr(5.0, 1.0), Error);
}

TEST(SpacingForFsr, RoundTripThroughFsrEstimate) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> fsr(0.5, 50.0), ng(1.2, 1.8);
    for (int i = 0; i < 200; ++i) {
        const double f = fsr(rng), n = ng(rng);
        const double d = spacing_for_fsr(f, n);
        const auto taps = TapSet::uniform(4, round_trip_delay_ps(d, n));
        EXPECT_NEAR(fsr_estimate(taps).fsr_ghz, f, 1e-9 * f);
    }
}

TEST(SpacingForFsr, StrictlyDecreasing) {
    double prev = INFINITY;
    for (double f = 1.0; f < 30.0; f += 0.5) {
        const double d = spacing_for_fsr(f, 1.4682);
        EXPECT_LT(d, prev);
        prev = d;
    }
}

TEST(WavelengthForFsr, Examples) {
    EXPECT_NEAR(wavelength_for_fsr_hetero(1, 5, 1550, 20).lambda_m_nm, 1560.0, 1e-9);
    EXPECT_NEAR(wavelength_for_fsr_hetero(1, 5, 1550, 10).lambda_m_nm, 1570.0, 1e-9);
    EXPECT_NEAR(wavelength_for_fsr_hetero(1, 10, 1550, 20).lambda_m_nm, 1555.0, 1e-9);
    EXPECT_THROW(wavelength_for_fsr_hetero(0, 5, 1550, 20), Error);
    EXPECT_THROW(wavelength_for_fsr_hetero(1, 0, 1550, 20), Error);
    EXPECT_THROW(wavelength_for_fsr_hetero(1, 5, 1550, 0), Error);
}

TEST(WavelengthForFsr, ForwardCheckThroughDifferentialDelay) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dd(0.2, 3.0), len(0.5, 20.0), fsr(2.0, 40.0);
    for (int i = 0; i < 200; ++i) {
        const double d = dd(rng), l = len(rng), f = fsr(rng);
        const auto w = wavelength_for_fsr_hetero(d, l, 1550, f);
        HeteroMCFSpec spec;
        spec.length_km = l;
        spec.cores = assign_core_dispersions(7, 15, d);
        for (double dt : differential_delay_spatial(spec, w.lambda_m_nm))
            EXPECT_NEAR(fsr_ghz_from_delay_ps(dt), f, 1e-9 * f);
    }
}

TEST(WavelengthForFsr, NewtonCorrectsSlopeTerm) {
    const double ds = 0.02;
    const auto w = wavelength_for_fsr_hetero(1, 5, 1550, 10, ds);
    EXPECT_GT(w.newton_steps, 0);
    const double x = w.lambda_m_nm - 1550;
    const double dtau = 5 * (1 * x + 0.5 * ds * x * x);
    EXPECT_NEAR(fsr_ghz_from_delay_ps(dtau), 10.0, 1e-9 * 10);
    // small slope difference stays first-order
    EXPECT_EQ(wavelength_for_fsr_hetero(1, 5, 1550, 10, 1e-4).newton_steps, 0);
}

TEST(WavelengthForFsr, UnreachableTargetThrows) {
    // 1 + 2 (-0.05) (200) < 0: the quadratic delay never reaches 200 ps/km
    try {
        wavelength_for_fsr_hetero(1, 5, 1550, 1, -0.05);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotConverged);
    }
}

TEST(WavelengthForFsr, DetuningDecreasesWithFsr) {
    double prev = INFINITY;
    for (double f = 1.0; f < 40.0; f += 1.0) {
        const double x = wavelength_for_fsr_hetero(1, 5, 1550, f).lambda_m_nm - 1550;
        EXPECT_LT(x, prev);
        prev = x;
    }
}

TEST(AssignDispersions, LinearSet) {
    const auto c = assign_core_dispersions(7, 14.75, 1);
    const double expect[] = {14.75, 15.75, 16.75, 17.75, 18.75, 19.75, 20.75};
    ASSERT_EQ(c.size(), 7u);
    for (int n = 0; n < 7; ++n) EXPECT_EQ(c[n].d_ps_per_km_nm, expect[n]);
    HeteroMCFSpec spec;
    spec.cores = c;
    const auto rep = validate_hetero_spec(spec, 1550, 1570);
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.delta_d_max_deviation, 0.0);
}

TEST(AssignDispersions, SingleCoreAndDecreasing) {
    HeteroMCFSpec one;
    one.geometry = MCFGeometry::single_core();
    one.cores = assign_core_dispersions(1, 3.0, 99.0);
    EXPECT_TRUE(validate_hetero_spec(one, 1550, 1560).pass);

    const auto c = assign_core_dispersions(3, 20, -0.5);
    EXPECT_EQ(c[0].d_ps_per_km_nm, 20.0);
    EXPECT_EQ(c[1].d_ps_per_km_nm, 19.5);
    EXPECT_EQ(c[2].d_ps_per_km_nm, 19.0);
    HeteroMCFSpec spec;
    spec.geometry.core_count = 3;
    spec.cores = c;
    EXPECT_FALSE(validate_hetero_spec(spec, 1550, 1570).pass);
    EXPECT_THROW(assign_core_dispersions(0, 1, 1), Error);
}

TEST(AssignDispersions, DeviationAlwaysZero) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> d1(5, 25), dd(0.25, 2.0);
    for (int i = 0; i < 100; ++i) {
        HeteroMCFSpec spec;
        spec.cores = assign_core_dispersions(7, d1(rng), dd(rng));
        const auto rep = validate_hetero_spec(spec, 1550, 1570);
        EXPECT_LE(rep.delta_d_max_deviation, 1e-12);
    }
    HeteroMCFSpec spec;
    spec.cores = assign_core_dispersions(7, 14.75, 0.5);
    EXPECT_EQ(validate_hetero_spec(spec, 1550, 1570).delta_d_max_deviation, 0.0);
}

TEST(NelderMead, MinimizesShiftedQuadraticInsideBox) {
    auto f = [](const std::vector<double>& x) {
        return (x[0] - 0.3) * (x[0] - 0.3) + 4 * (x[1] - 0.7) * (x[1] - 0.7);
    };
    const auto r = nelder_mead_box(f, {0.9, 0.1}, 400);
    EXPECT_NEAR(r.x[0], 0.3, 1e-4);
    EXPECT_NEAR(r.x[1], 0.7, 1e-4);
    EXPECT_LE(r.evaluations, 400);
}

TEST(NelderMead, ProjectsOntoBox) {
    auto f = [](const std::vector<double>& x) { return (x[0] + 1.0) * (x[0] + 1.0) + (x[1] - 2.0) * (x[1] - 2.0); };
    const auto r = nelder_mead_box(f, {0.5, 0.5}, 300);
    EXPECT_NEAR(r.x[0], 0.0, 1e-6);
    EXPECT_NEAR(r.x[1], 1.0, 1e-6);
}

TEST(ProfileFit, CollapsedBoxReturnsPointExactly) {
    const TrenchProfile p{4.2, 0.35, 3.5, 4.0, 1.0};
    FitOptions opt;
    const auto target = evaluate_profile(p, opt);
    const auto r = fit_profile_to_dispersion(target, ProfileSearchBox::point(p), opt);
    EXPECT_EQ(r.profile.a1_um, p.a1_um);
    EXPECT_EQ(r.profile.w_um, p.w_um);
    EXPECT_EQ(r.objective, 0.0);
    EXPECT_EQ(r.evaluations, 1);
}

TEST(ProfileFit, ZeroSlopeWeightMasksSlope) {
    const TrenchProfile p{4.2, 0.35, 3.5, 4.0, 1.0};
    FitOptions opt;
    opt.weights.s = 0.0;
    auto target = evaluate_profile(p, opt);
    target.d_ps_per_km_nm += 0.1;
    target.tau0_ps_per_km += 0.02;
    target.s_ps_per_km_nm2 += 5.0;  // ignored
    const auto r = fit_profile_to_dispersion(target, ProfileSearchBox::point(p), opt);
    const double expect = opt.weights.tau0 * 0.02 * 0.02 + opt.weights.d * 0.1 * 0.1;
    EXPECT_NEAR(r.objective, expect, 1e-6 * expect);
}

TEST(ProfileFit, RecoversKnownProfileDispersion) {
    const TrenchProfile truth{4.4, 0.36, 3.9, 4.3, 1.0};
    FitOptions opt;
    const auto target = evaluate_profile(truth, opt);
    const ProfileSearchBox box;
    const auto r = fit_profile_to_dispersion(target, box, opt);
    EXPECT_TRUE(box.contains(r.profile));
    EXPECT_LE(r.evaluations, opt.budget);
    EXPECT_NEAR(r.achieved.d_ps_per_km_nm, target.d_ps_per_km_nm, 0.05);
    EXPECT_LT(r.objective, 1e-4 * r.initial_objective);
    // achieved is a fresh evaluation of the returned profile
    const auto again = evaluate_profile(r.profile, opt);
    EXPECT_EQ(again.d_ps_per_km_nm, r.achieved.d_ps_per_km_nm);
    EXPECT_EQ(r.seed, opt.seed);
}

TEST(ProfileFit, DeterministicAcrossThreadCounts) {
    const TrenchProfile truth{3.9, 0.37, 4.5, 3.5, 1.0};
    FitOptions a;
    a.budget = 80;
    const auto target = evaluate_profile(truth, a);
    FitOptions b = a;
    b.threads = 4;
    const auto ra = fit_profile_to_dispersion(target, {}, a);
    const auto rb = fit_profile_to_dispersion(target, {}, b);
    EXPECT_EQ(ra.objective, rb.objective);
    EXPECT_EQ(ra.profile.a1_um, rb.profile.a1_um);
}

TEST(ProfileFit, InfeasibleBoxThrows) {
    ProfileSearchBox box;
    box.a1_um = {0.3, 0.4};
    box.delta1_pct = {0.01, 0.02};
    box.delta2_pct = 1.0;
    FitOptions opt;
    opt.budget = 20;
    try {
        fit_profile_to_dispersion({4.9e6, 17, 0.06, false}, box, opt);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InfeasibleBox);
    }
}

TEST(ProfileFit, BadInputs) {
    ProfileSearchBox box;
    box.a1_um = {5.0, 4.0};
    EXPECT_THROW(fit_profile_to_dispersion({}, box), Error);
    FitOptions opt;
    opt.budget = 0;
    EXPECT_THROW(fit_profile_to_dispersion({}, ProfileSearchBox{}, opt), Error);
}
