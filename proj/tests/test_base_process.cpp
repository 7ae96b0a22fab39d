#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "heavytail/base_process.hpp"
#include "heavytail/montecarlo.hpp"
#include "heavytail/stats.hpp"

using namespace heavytail;

namespace {

std::size_t count_in(const TimePattern& p, double lo, double hi) {
    std::size_t c = 0;
    for (double t : p.times)
        if (t > lo && t <= hi) ++c;
    return c;
}

// Gamma(2,1) cdf
double gamma21_cdf(double t) { return 1.0 - std::exp(-t) * (1.0 + t); }

// integrated-tail (equilibrium) delay cdf: 1 - (1 + t/2) e^(-t)
double delay_cdf(double t) { return 1.0 - (1.0 + 0.5 * t) * std::exp(-t); }

}  // namespace

TEST(BaseModel, FactoriesValidate) {
    EXPECT_THROW(BaseProcessModel::poisson(0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(BaseProcessModel::poisson(1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(BaseProcessModel::gamma_renewal(-1.0), std::invalid_argument);
    EXPECT_THROW(BaseProcessModel::grid(0, 1.0), std::invalid_argument);
    EXPECT_THROW(BaseProcessModel::binomial(0, 1.0), std::invalid_argument);
    EXPECT_DOUBLE_EQ(BaseProcessModel::poisson(0.5, 10.0).mean_count(), 5.0);
    EXPECT_DOUBLE_EQ(BaseProcessModel::gamma_renewal(5.0).mean_count(), 2.5);
    EXPECT_DOUBLE_EQ(BaseProcessModel::grid(7, 1.0).mean_count(), 7.0);
}

TEST(BaseModel, GridIsDeterministic) {
    const auto model = BaseProcessModel::grid(4, 1.0);
    Rng rng(1);
    const TimePattern p = sample(model, rng);
    ASSERT_EQ(p.count(), 4u);
    EXPECT_DOUBLE_EQ(p.times[0], 0.25);
    EXPECT_DOUBLE_EQ(p.times[1], 0.5);
    EXPECT_DOUBLE_EQ(p.times[2], 0.75);
    EXPECT_DOUBLE_EQ(p.times[3], 1.0);
}

TEST(BaseModel, PoissonCountMoments) {
    const auto model = BaseProcessModel::poisson(0.5, 10.0);
    Rng rng(21);
    const int n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    TimePattern p;
    for (int i = 0; i < n; ++i) {
        sample_into(model, rng, p);
        ASSERT_TRUE(std::is_sorted(p.times.begin(), p.times.end()));
        for (double t : p.times) ASSERT_TRUE(t > 0.0 && t <= 10.0);
        const double c = static_cast<double>(p.count());
        sum += c;
        sum_sq += c * c;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    EXPECT_NEAR(mean, 5.0, 3.0 * std::sqrt(5.0 / n));
    EXPECT_NEAR(var, 5.0, 0.15);
}

TEST(BaseModel, BinomialCountFixedAndSorted) {
    const auto model = BaseProcessModel::binomial(12, 2.0);
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const TimePattern p = sample(model, rng);
        ASSERT_EQ(p.count(), 12u);
        ASSERT_TRUE(std::is_sorted(p.times.begin(), p.times.end()));
        for (double t : p.times) ASSERT_TRUE(t >= 0.0 && t < 2.0);
    }
}

TEST(EquilibriumDelay, MatchesIntegratedTailLaw) {
    Rng rng(31);
    const int n = 20000;
    std::vector<double> draws(n);
    double sum = 0.0;
    for (double& d : draws) {
        d = sample_equilibrium_delay_gamma21(rng);
        sum += d;
    }
    // mean of the delay law: half of E[G^2]/E[G] = (1/2)(6/2) = 1.5
    EXPECT_NEAR(sum / n, 1.5, 3.0 * 1.5 / std::sqrt(n));
    EXPECT_LT(ks_statistic(draws, delay_cdf), ks_critical(n, 0.01));
    EXPECT_NEAR(delay_cdf(1.0), 0.4481808382428365, 1e-15);
    EXPECT_NEAR(delay_cdf(3.0), 0.8755323290803402, 1e-15);
}

TEST(GammaRenewal, GapSamplerIsGamma21) {
    // Test the gap sampler directly. Gaps read off a fixed window would be
    // biased: a gap is only observed if it fits before T, which censors the
    // large ones.
    Rng rng(37);
    std::vector<double> gaps(50000);
    for (double& g : gaps) g = sample_gamma21(rng);
    EXPECT_LT(ks_statistic(gaps, gamma21_cdf), ks_critical(gaps.size(), 0.01));
    double sum = 0.0;
    for (double g : gaps) sum += g;
    EXPECT_NEAR(sum / gaps.size(), 2.0, 3.0 * std::sqrt(2.0 / gaps.size()));
}

TEST(GammaRenewal, StationaryWindowCounts) {
    // E[N(a,b]] = (b-a)/2 for every window under the equilibrium delay
    const auto model = BaseProcessModel::gamma_renewal(5.0);
    Rng rng(41);
    const int n = 200000;
    double w1 = 0.0, w2 = 0.0;
    TimePattern p;
    for (int i = 0; i < n; ++i) {
        sample_into(model, rng, p);
        w1 += static_cast<double>(count_in(p, 0.0, 5.0));
        w2 += static_cast<double>(count_in(p, 1.7, 3.9));
    }
    EXPECT_NEAR(w1 / n, 2.5, 0.01);
    EXPECT_NEAR(w2 / n, 1.1, 0.01);
}

TEST(RenewalDensity, ClosedFormAndSeries) {
    EXPECT_NEAR(renewal_density_gamma21(0.5), 0.31606027941427883, 1e-15);
    EXPECT_DOUBLE_EQ(renewal_density_gamma21(0.0), 0.0);
    EXPECT_THROW(renewal_density_gamma21(-0.1), std::invalid_argument);
    // independent check: u(t) = sum of i-fold convolution densities
    // t^(2i-1) e^(-t) / (2i-1)!
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        double term = t * std::exp(-t);
        double series = term;
        for (int i = 1; i < 40; ++i) {
            term *= t * t / ((2.0 * i) * (2.0 * i + 1.0));
            series += term;
        }
        EXPECT_NEAR(renewal_density_gamma21(t), series, 1e-12) << "t=" << t;
    }
}

TEST(FactorialMomentDensity, ProductModels) {
    const FactorialMomentEvaluator pois(BaseProcessModel::poisson(0.7, 3.0), 2);
    const std::array<double, 2> t{1.0, 2.0};
    EXPECT_DOUBLE_EQ(factorial_moment_density(pois, t), 0.49);

    const FactorialMomentEvaluator bin(BaseProcessModel::binomial(10, 2.0), 2);
    EXPECT_DOUBLE_EQ(factorial_moment_density(bin, t), 22.5);

    const FactorialMomentEvaluator grid(BaseProcessModel::grid(4, 3.0), 2);
    EXPECT_THROW(factorial_moment_density(grid, t), std::invalid_argument);
}

TEST(FactorialMomentDensity, GammaRenewalPairAndSymmetry) {
    const FactorialMomentEvaluator eval(BaseProcessModel::gamma_renewal(5.0), 2);
    const std::array<double, 2> t12{1.0, 2.0};
    const std::array<double, 2> t21{2.0, 1.0};
    EXPECT_NEAR(factorial_moment_density(eval, t12), 0.21616617919084682, 1e-15);
    EXPECT_DOUBLE_EQ(factorial_moment_density(eval, t12), factorial_moment_density(eval, t21));
    const std::array<double, 2> bad{1.0, 6.0};
    EXPECT_THROW(factorial_moment_density(eval, bad), std::invalid_argument);
    const std::array<double, 1> one{1.0};
    EXPECT_THROW(factorial_moment_density(eval, one), std::invalid_argument);
}

TEST(GammaClosedForms, FrozenValues) {
    EXPECT_NEAR(m2_gamma(5.0), 5.12499432500878, 1e-14);
    EXPECT_NEAR(m2_box_gamma(1.0), 0.1080830895954234, 1e-15);
    EXPECT_NEAR(m3_box_gamma(1.0, 2.0), 0.03941408925422688, 1e-15);
    EXPECT_THROW(m2_gamma(0.0), std::invalid_argument);
    EXPECT_THROW(m3_box_gamma(1.0, 1.0), std::invalid_argument);
}

TEST(GammaClosedForms, SmallArgumentStability) {
    // m2(T) = T^3/6 - T^4/12 + T^5/30 + O(T^6); the expm1 form keeps this
    // accurate where the naive form would cancel catastrophically
    for (double T : {1e-2, 1e-3, 1e-4}) {
        const double taylor = T * T * T / 6.0 - T * T * T * T / 12.0 + std::pow(T, 5) / 30.0;
        EXPECT_NEAR(m2_gamma(T) / taylor, 1.0, 1e-7) << "T=" << T;
    }
}

TEST(FactorialMomentBox, PoissonAndBinomialProducts) {
    const auto pois = BaseProcessModel::poisson(0.7, 3.0);
    const std::array<Interval, 2> box{Interval{0.0, 1.0}, Interval{0.5, 2.0}};
    EXPECT_NEAR(factorial_moment_box(FactorialMomentEvaluator(pois, 2), box), 0.735, 1e-15);

    const auto bin = BaseProcessModel::binomial(10, 2.0);
    // 10*9 * (1/2) * (3/4)
    EXPECT_NEAR(factorial_moment_box(FactorialMomentEvaluator(bin, 2), box), 33.75, 1e-12);

    const std::array<Interval, 2> outside{Interval{0.0, 1.0}, Interval{2.0, 4.0}};
    EXPECT_THROW(factorial_moment_box(FactorialMomentEvaluator(pois, 2), outside),
                 std::invalid_argument);
}

TEST(FactorialMomentBox, GridMatchesBruteForce) {
    const auto model = BaseProcessModel::grid(6, 3.0);  // atoms 0.5, 1, ..., 3
    std::vector<double> atoms;
    for (int i = 1; i <= 6; ++i) atoms.push_back(i * 0.5);

    const Interval A{0.4, 1.6}, B{1.0, 2.9}, C{2.0, 3.0};
    const std::array<Interval, 2> box2{A, B};
    double brute2 = 0.0;
    for (double a : atoms)
        for (double b : atoms)
            if (a != b && A.contains(a) && B.contains(b)) brute2 += 1.0;
    EXPECT_DOUBLE_EQ(factorial_moment_box(FactorialMomentEvaluator(model, 2), box2), brute2);

    const std::array<Interval, 3> box3{A, B, C};
    double brute3 = 0.0;
    for (double a : atoms)
        for (double b : atoms)
            for (double c : atoms)
                if (a != b && a != c && b != c && A.contains(a) && B.contains(b) &&
                    C.contains(c))
                    brute3 += 1.0;
    EXPECT_DOUBLE_EQ(factorial_moment_box(FactorialMomentEvaluator(model, 3), box3), brute3);

    const std::vector<Interval> box4(4, Interval{0.0, 3.0});
    EXPECT_THROW(factorial_moment_box(FactorialMomentEvaluator(model, 4), box4),
                 std::invalid_argument);
}

TEST(FactorialMomentBox, GammaClosedFormShortcuts) {
    const auto model = BaseProcessModel::gamma_renewal(5.0);
    // k=1: exact length/tau, no quadrature
    const std::array<Interval, 1> seg{Interval{1.0, 4.0}};
    EXPECT_DOUBLE_EQ(factorial_moment_box(FactorialMomentEvaluator(model, 1), seg), 1.5);

    const std::array<Interval, 2> sq{Interval{0.0, 2.5}, Interval{0.0, 2.5}};
    EXPECT_DOUBLE_EQ(factorial_moment_box(FactorialMomentEvaluator(model, 2), sq),
                     m2_box_gamma(2.5));

    // m3 shape recognized in any axis order
    const std::array<Interval, 3> shape1{Interval{0.0, 1.0}, Interval{0.0, 1.0},
                                         Interval{1.0, 2.0}};
    const std::array<Interval, 3> shape2{Interval{1.0, 2.0}, Interval{0.0, 1.0},
                                         Interval{0.0, 1.0}};
    EXPECT_DOUBLE_EQ(factorial_moment_box(FactorialMomentEvaluator(model, 3), shape1),
                     m3_box_gamma(1.0, 2.0));
    EXPECT_DOUBLE_EQ(factorial_moment_box(FactorialMomentEvaluator(model, 3), shape2),
                     m3_box_gamma(1.0, 2.0));
}

TEST(FactorialMomentBox, GammaQuadratureMatchesClosedForms) {
    const auto model = BaseProcessModel::gamma_renewal(5.0);
    const std::array<Interval, 2> sq{Interval{0.0, 2.5}, Interval{0.0, 2.5}};
    const double quad =
        factorial_moment_box(FactorialMomentEvaluator(model, 2, 512), sq, true);
    EXPECT_NEAR(quad / m2_box_gamma(2.5), 1.0, 1e-5);

    const std::array<Interval, 3> shape{Interval{0.0, 1.0}, Interval{0.0, 1.0},
                                        Interval{1.0, 2.0}};
    const double quad3 =
        factorial_moment_box(FactorialMomentEvaluator(model, 3, 128), shape, true);
    EXPECT_NEAR(quad3 / m3_box_gamma(1.0, 2.0), 1.0, 1e-4);

    const QuadDiagnostic diag =
        factorial_moment_box_checked(FactorialMomentEvaluator(model, 2, 256), sq, 1e-4);
    EXPECT_TRUE(diag.converged);
}

TEST(FactorialMomentBox, GammaPairMassMatchesCountIdentity) {
    // M_2(A x B) = E[N(A) N(B) - N(A and B)] for overlapping windows
    const auto model = BaseProcessModel::gamma_renewal(5.0);
    const Interval A{0.0, 2.0}, B{1.0, 3.0}, AB{1.0, 2.0};
    const std::array<Interval, 2> box{A, B};
    const double quad = factorial_moment_box(FactorialMomentEvaluator(model, 2), box);

    ExperimentConfig config;
    config.model = model;
    config.samples = 200000;
    config.seed = 4242;
    const MeanEstimate mc = estimate_mean_base(config, [&](const TimePattern& p) {
        const double na = static_cast<double>(count_in(p, A.lo, A.hi));
        const double nb = static_cast<double>(count_in(p, B.lo, B.hi));
        const double nab = static_cast<double>(count_in(p, AB.lo, AB.hi));
        return na * nb - nab;
    });
    const ConfidenceInterval ci = mc.ci();
    EXPECT_NEAR(mc.mean(), quad, 3.0 * (ci.hi - ci.lo) / 2.0);
}

TEST(CountFactorialMoment, AllModels) {
    EXPECT_DOUBLE_EQ(count_factorial_moment(BaseProcessModel::poisson(0.5, 10.0), 2), 25.0);
    EXPECT_DOUBLE_EQ(count_factorial_moment(BaseProcessModel::grid(5, 1.0), 3), 60.0);
    EXPECT_DOUBLE_EQ(count_factorial_moment(BaseProcessModel::binomial(3, 1.0), 4), 0.0);
    const auto gamma = BaseProcessModel::gamma_renewal(5.0);
    EXPECT_DOUBLE_EQ(count_factorial_moment(gamma, 1), 2.5);
    EXPECT_DOUBLE_EQ(count_factorial_moment(gamma, 2), m2_gamma(5.0));
    EXPECT_THROW(count_factorial_moment(gamma, 0), std::invalid_argument);
}

TEST(CountFactorialMoment, GammaTripleMatchesMonteCarlo) {
    const auto model = BaseProcessModel::gamma_renewal(5.0);
    const double quad = count_factorial_moment(model, 3);

    ExperimentConfig config;
    config.model = model;
    config.samples = 200000;
    config.seed = 77;
    const MeanEstimate mc = estimate_mean_base(config, [](const TimePattern& p) {
        const double n = static_cast<double>(p.count());
        return n * (n - 1.0) * (n - 2.0);
    });
    const ConfidenceInterval ci = mc.ci();
    EXPECT_NEAR(mc.mean(), quad, 3.0 * (ci.hi - ci.lo) / 2.0);
}

TEST(NormalizedIntensityCdf, ContinuousAndGrid) {
    const auto pois = BaseProcessModel::poisson(0.5, 10.0);
    EXPECT_DOUBLE_EQ(normalized_intensity_cdf(pois, -1.0), 0.0);
    EXPECT_DOUBLE_EQ(normalized_intensity_cdf(pois, 2.5), 0.25);
    EXPECT_DOUBLE_EQ(normalized_intensity_cdf(pois, 10.0), 1.0);

    const auto grid = BaseProcessModel::grid(4, 1.0);
    EXPECT_DOUBLE_EQ(normalized_intensity_cdf(grid, 0.2), 0.0);
    EXPECT_DOUBLE_EQ(normalized_intensity_cdf(grid, 0.25), 0.25);
    EXPECT_DOUBLE_EQ(normalized_intensity_cdf(grid, 0.3), 0.25);
    EXPECT_DOUBLE_EQ(normalized_intensity_cdf(grid, 0.75), 0.75);
}
