#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "szegolab/dynamics.hpp"

using namespace szegolab;

namespace {

std::shared_ptr<const GreenFunction> two_band_green()
{
    static auto g = std::make_shared<GreenFunction>(
        build_green(FiniteGapSet(-3.0, 3.0, {{-1.0, 1.0}}), 160));
    return g;
}

const TorusPoint& alternating_point()
{
    static TorusPoint T = [] {
        Divisor d;
        d.points.push_back({0.0, +1});
        return build_torus_point(d, two_band_green(), 1024);
    }();
    return T;
}

} // namespace

TEST_CASE("perturb_torus")
{
    auto green0 = std::make_shared<GreenFunction>(build_green(FiniteGapSet(-2.0, 2.0), 128));
    TorusPoint Tfree = build_torus_point(Divisor{}, green0, 400);
    JacobiCoeffs J0 = perturb_torus(Tfree, [](long) { return std::make_pair(0.0, 0.0); }, 64);
    CHECK(J0.a(5) == doctest::Approx(1.0).epsilon(1e-11));

    JacobiCoeffs J1 = perturb_torus(
        Tfree, [](long n) { return std::make_pair(0.3 * std::pow(0.8, n), 0.0); }, 64);
    CHECK(J1.a(1) == doctest::Approx(1.24).epsilon(1e-11));
    // summability of the perturbation: 0.3 * 0.8/(1-0.8) = 1.2
    double s = 0.0;
    for (long n = 1; n <= 64; ++n)
        s += std::abs(J1.a(n) - 1.0);
    CHECK(s == doctest::Approx(1.2).epsilon(1e-6));

    CHECK_THROWS(perturb_torus(Tfree, [](long) { return std::make_pair(-2.0, 0.0); }, 8));
}

TEST_CASE("identify on an exact torus member")
{
    auto green = two_band_green();
    const TorusPoint& T = alternating_point();
    JacobiCoeffs J = perturb_torus(T, [](long) { return std::make_pair(0.0, 0.0); }, 400);
    IdentifyOptions opts;
    opts.restarts = 1;
    IdentifyResult res = identify_torus_point(J, green, 7, 10, opts);
    CHECK(divisor_distance(res.point.divisor, T.divisor, green->set) < 1e-8);
    CHECK(res.misfit < 1e-7);
    // idempotence: identifying the identified point returns the same divisor
    JacobiCoeffs J2 = stieltjes_coeffs(res.point.mu_plus, 400);
    IdentifyResult res2 = identify_torus_point(J2, green, 7, 10, opts);
    CHECK(divisor_distance(res2.point.divisor, res.point.divisor, green->set) < 1e-8);
}

TEST_CASE("identify a perturbed period-2 matrix")
{
    auto green = two_band_green();
    const TorusPoint& T = alternating_point();
    JacobiCoeffs J = perturb_torus(
        T, [](long n) { return std::make_pair(0.3 * std::pow(0.8, n), 0.1 * std::pow(0.85, n)); },
        460);
    IdentifyResult res = identify_torus_point(J, green, 20, 12);
    CHECK(divisor_distance(res.point.divisor, T.divisor, green->set) < 2e-3);
    CHECK(res.fit_history.size() == 21);

    OrbitReport rep = orbit_error(J, res.point, 200);
    // error sequence follows the construction
    CHECK(rep.error_seq[0] > 0.1);
    for (int n = 60; n <= 200; ++n)
        CHECK(rep.error_seq[n - 1] < 5e-3);
    CHECK(std::isfinite(rep.ell2_sum));
    // partial products and sums settle (Cauchy tails)
    CHECK(std::abs(rep.partial_products[199] - rep.partial_products[149]) < 1e-5);
    CHECK(std::abs(rep.partial_sums[199] - rep.partial_sums[149]) < 1e-5);
}

TEST_CASE("orbit error against the free point: Chebyshev-first-kind start")
{
    auto green0 = std::make_shared<GreenFunction>(build_green(FiniteGapSet(-2.0, 2.0), 128));
    TorusPoint Tfree = build_torus_point(Divisor{}, green0, 1024);
    JacobiCoeffs JT = JacobiCoeffs::from_rule(JacobiCoeffs::Side::OneSided, [](long n) {
        return std::make_pair(n == 1 ? std::numbers::sqrt2 : 1.0, 0.0);
    });
    OrbitReport rep = orbit_error(JT, Tfree, 120);
    CHECK(rep.error_seq[0] == doctest::Approx(std::numbers::sqrt2 - 1.0).epsilon(1e-9));
    for (int n = 2; n <= 120; ++n)
        CHECK(rep.error_seq[n - 1] < 1e-9);
    CHECK(rep.partial_products[119] == doctest::Approx(std::numbers::sqrt2).epsilon(1e-9));
    CHECK(std::abs(rep.partial_sums[119]) < 1e-9);
}

TEST_CASE("interlacing of gap eigenvalues under stripping")
{
    auto green = two_band_green();
    // free-type data: no gap eigenvalues at all, vacuously true
    {
        const TorusPoint& T = alternating_point();
        JacobiCoeffs J = perturb_torus(T, [](long) { return std::make_pair(0.0, 0.0); }, 280);
        auto res = interlacing_check(J, 2, *green, 230);
        CHECK(res.ok);
    }
    // a mass point in the gap: one eigenvalue, one strip step
    {
        Divisor d;
        d.points.push_back({0.55, +1});
        TorusPoint T = build_torus_point(d, green, 512);
        JacobiCoeffs J = stieltjes_coeffs(T.mu_plus, 260);
        auto res = interlacing_check(J, 1, *green, 230);
        CHECK(res.ok);
        CHECK(res.counts_J[0] == 1);
    }
}

TEST_CASE("entropy along stripping")
{
    FiniteGapSet band(-2.0, 2.0);
    auto G = build_green(band, 160);
    // Chebyshev-first-kind start: S(dmu_0) = 0, S(dmu_m) = log 2 for m >= 1
    JacobiCoeffs JT = JacobiCoeffs::from_rule(JacobiCoeffs::Side::OneSided, [](long n) {
        return std::make_pair(n == 1 ? std::numbers::sqrt2 : 1.0, 0.0);
    });
    auto ent = entropy_along_stripping(JT, G, 3);
    CHECK(std::abs(ent[0].value - 0.0) < 2e-3);
    for (int d = 1; d <= 3; ++d) {
        CHECK(ent[d].reliable);
        CHECK(std::abs(ent[d].value - std::log(2.0)) < 2e-3);
    }

    // torus J+ on the two-band set: entropies settle into a period-2 cycle
    auto green = two_band_green();
    const TorusPoint& T = alternating_point();
    JacobiCoeffs Jp = perturb_torus(T, [](long) { return std::make_pair(0.0, 0.0); }, 1015);
    auto ent2 = entropy_along_stripping(Jp, *green, 5, 500);
    CHECK(std::abs(ent2[1].value - ent2[3].value) < 2e-3);
    CHECK(std::abs(ent2[2].value - ent2[4].value) < 2e-3);

    // perturbed start: deep strips approach the cycle
    JacobiCoeffs Jq = perturb_torus(
        T, [](long n) { return std::make_pair(0.25 * std::pow(0.7, n), 0.1 * std::pow(0.7, n)); },
        1015);
    auto ent3 = entropy_along_stripping(Jq, *green, 7, 500);
    double near_start = std::abs(ent3[1].value - ent2[1].value);
    double deep = std::abs(ent3[7].value - ent2[1].value); // same parity as depth 1
    CHECK(deep < near_start);
}

TEST_CASE("identification on an interval is the single-point torus")
{
    auto green = std::make_shared<GreenFunction>(build_green(FiniteGapSet(-2.0, 2.0), 128));
    JacobiCoeffs J = JacobiCoeffs::from_rule(JacobiCoeffs::Side::OneSided, [](long n) {
        return std::make_pair(1.0 + 0.2 * std::pow(0.7, n), 0.05 * std::pow(0.7, n));
    });
    IdentifyOptions opts;
    opts.restarts = 0;
    IdentifyResult res = identify_torus_point(J, green, 10, 8, opts);
    CHECK(res.point.divisor.points.empty());
    CHECK(res.point.a0_sq == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identify on a two-gap set")
{
    double r2 = std::sqrt(2.0);
    auto green = std::make_shared<GreenFunction>(
        build_green(FiniteGapSet(-2.0, 2.0, {{-r2, -1.0}, {1.0, r2}}), 160));
    Divisor d;
    d.points.push_back({-1.15, +1});
    d.points.push_back({1.25, -1});
    TorusPoint T = build_torus_point(d, green, 768);
    JacobiCoeffs J = perturb_torus(
        T, [](long n) { return std::make_pair(0.1 * std::pow(0.6, n), 0.05 * std::pow(0.6, n)); },
        420);
    IdentifyOptions opts;
    opts.restarts = 2;
    IdentifyResult res = identify_torus_point(J, green, 12, 10, opts);
    CHECK(divisor_distance(res.point.divisor, T.divisor, green->set) < 5e-3);
    CHECK(res.point.divisor.points[0].eps == +1);
    CHECK(res.point.divisor.points[1].eps == -1);
}
