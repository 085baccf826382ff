#include <doctest.h>

#include <cmath>

#include "qdarwin/chernoff.hpp"
#include "qdarwin/redundancy.hpp"
#include "test_support.hpp"

using namespace qdarwin;
using doctest::Approx;

namespace {

constexpr double kGammaSq = 49.0 / 64.0;
constexpr double kHs14 = 0.8112781244591329;

// Accessible information written out directly from P_e.
double accessible_ref(double p1, double gamma_eff) {
    const double q = 4.0 * p1 * (1.0 - p1) * gamma_eff;
    return test::h_ref(p1) - test::h_ref(0.5 * (1.0 - std::sqrt(1.0 - q)));
}

}  // namespace

TEST_CASE("information_threshold") {
    CHECK(information_threshold(1.0, 0.1, ThresholdMode::Linear) == Approx(0.9));
    CHECK(information_threshold(1.0, 0.1, ThresholdMode::Entropic) == Approx(1.0 - test::h_ref(0.1)));
    CHECK_THROWS_AS(information_threshold(1.0, 0.0, ThresholdMode::Linear), DomainError);
    CHECK_THROWS_AS(information_threshold(1.0, 1.0, ThresholdMode::Linear), DomainError);
    CHECK_THROWS_AS(information_threshold(1.0, 0.6, ThresholdMode::Entropic), DomainError);
    CHECK_NOTHROW(information_threshold(1.0, 0.5, ThresholdMode::Entropic));
}

TEST_CASE("min_fragment_size examples") {
    SUBCASE("perfect records") {
        const auto m = closed_form_measure(InfoMeasure::Accessible, 0.25, 0.0, 0.25);
        CHECK(min_fragment_size(m, kHs14, 0.01, ThresholdMode::Linear, 5) == 1);
    }
    SUBCASE("accessible scan at delta = 0.1") {
        const auto m = closed_form_measure(InfoMeasure::Accessible, 0.25, kGammaSq, 0.25);
        std::size_t ref = 1;
        while (accessible_ref(0.25, std::pow(kGammaSq, static_cast<double>(ref))) < 0.9 * kHs14) ++ref;
        CHECK(min_fragment_size(m, kHs14, 0.1, ThresholdMode::Linear, 1000) == ref);
        CHECK(ref == 11);
    }
    SUBCASE("no information at all") {
        const auto m = closed_form_measure(InfoMeasure::HolevoPointer, 0.25, 1.0, 0.25);
        CHECK_THROWS_AS(min_fragment_size(m, kHs14, 0.1, ThresholdMode::Linear, 50), InsufficientEnvironment);
    }
    SUBCASE("environment too small") {
        const auto m = closed_form_measure(InfoMeasure::Accessible, 0.25, kGammaSq, 0.25);
        CHECK_THROWS_AS(min_fragment_size(m, kHs14, 0.1, ThresholdMode::Linear, 5), InsufficientEnvironment);
    }
    SUBCASE("bisection above the scan limit") {
        // Step function crossing at 3'000'001.
        const FragmentMeasure step = [](std::size_t f) { return f > 3'000'000 ? 1.0 : 0.0; };
        CHECK(min_fragment_size(step, 1.0, 0.5, ThresholdMode::Linear, 10'000'000) == 3'000'001);
    }
}

TEST_CASE("entropic and linear modes both return passing minimal sizes") {
    for (double delta : {0.5, 0.1, 0.01, 1e-3}) {
        for (auto mode : {ThresholdMode::Linear, ThresholdMode::Entropic}) {
            for (auto which : {InfoMeasure::HolevoPointer, InfoMeasure::Accessible, InfoMeasure::Qcb}) {
                const auto m = closed_form_measure(which, 0.25, kGammaSq, 0.25);
                const double thr = information_threshold(kHs14, delta, mode);
                const std::size_t f = min_fragment_size(m, kHs14, delta, mode, 100000);
                CHECK(m(f) >= thr);
                if (f > 1) CHECK(m(f - 1) < thr);
            }
        }
    }
}

TEST_CASE("redundancy") {
    CHECK(redundancy(100, 4) == 25.0);
    CHECK(redundancy(7, 7) == 1.0);
    CHECK_THROWS_AS(redundancy(7, 8), InsufficientEnvironment);
    CHECK_THROWS_AS(redundancy(7, 0), PreconditionError);
}

TEST_CASE("asymptotic_redundancy") {
    CHECK(asymptotic_redundancy(10000, kGammaSq, 0.01) == Approx(579.9).epsilon(0.1 / 579.9));
    CHECK(asymptotic_redundancy(10000, kGammaSq, 0.01) == Approx(579.919469777).epsilon(1e-10));
    CHECK(asymptotic_redundancy(10, std::exp(-1.0), 0.5) == Approx(10.0 / std::log(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(asymptotic_redundancy(10, kGammaSq, 0.6), DomainError);
    CHECK_THROWS_AS(asymptotic_redundancy(10, kGammaSq, 0.0), DomainError);
    CHECK_THROWS_AS(asymptotic_redundancy(10, 1.0, 0.1), DomainError);
    CHECK_THROWS_AS(asymptotic_redundancy(10, 0.0, 0.1), DomainError);
}

TEST_CASE("redundancy of the three measures agrees to leading order") {
    std::vector<double> r;
    for (auto which : {InfoMeasure::HolevoPointer, InfoMeasure::Accessible, InfoMeasure::Qcb}) {
        const auto m = closed_form_measure(which, 0.25, kGammaSq, 0.25);
        r.push_back(analyze_redundancy(m, kHs14, 1e-4, ThresholdMode::Linear, 10000, kGammaSq).r_delta);
    }
    for (double a : r) {
        for (double b : r) {
            CHECK(a / b >= 0.8);
            CHECK(a / b <= 1.25);
        }
    }
}

TEST_CASE("exact redundancy approaches the asymptotic form as delta shrinks") {
    const auto m = closed_form_measure(InfoMeasure::Accessible, 0.25, kGammaSq, 0.25);
    double prev = 1e300;
    for (double delta : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const auto res = analyze_redundancy(m, kHs14, delta, ThresholdMode::Linear, 10000, kGammaSq);
        CHECK(res.f_delta >= 1);
        CHECK(res.r_delta <= 10000.0);
        const double gap = std::abs(res.r_delta - res.r_asymptotic) / res.r_asymptotic;
        CHECK(gap <= prev);
        prev = gap;
    }
}

TEST_CASE("inhomogeneous closed-form measure uses prefix products") {
    const std::vector<double> g{0.5, 0.25, 1.0, 0.0};
    const auto m = closed_form_measure(InfoMeasure::HolevoPointer, 0.25, g, 0.25);
    CHECK(m(0) == Approx(0.0));
    CHECK(m(2) == Approx(closed_form_value(InfoMeasure::HolevoPointer, 0.25, 0.125, 0.25)));
    CHECK(m(3) == Approx(m(2)));
    CHECK(m(4) == Approx(kHs14));
    CHECK_THROWS_AS(m(5), InsufficientEnvironment);
    CHECK_THROWS_AS(closed_form_measure(InfoMeasure::Qcb, 0.25, std::vector<double>{1.5}, 0.25), DomainError);
}
