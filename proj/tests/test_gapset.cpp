#include <doctest.h>

#include <cmath>
#include <numbers>

#include "szegolab/gapset.hpp"

using namespace szegolab;

namespace {
// squaring-map oracle: for E symmetric with E^2 = [lo,hi],
// g_E(x) = g_[lo,hi](x^2)/2 and cap(E) = sqrt(cap([lo,hi]))
double g_interval(double a, double b, double x)
{
    double y = (2.0 * x - a - b) / (b - a);
    return std::log(std::abs(y) + std::sqrt(y * y - 1.0));
}
} // namespace

TEST_CASE("set validation")
{
    CHECK_THROWS(FiniteGapSet(2.0, -2.0));
    CHECK_THROWS(FiniteGapSet(-2.0, 2.0, {{-1.0, -1.0}}));
    CHECK_THROWS(FiniteGapSet(-2.0, 2.0, {{-1.5, 0.0}, {0.0, 1.0}}));
    CHECK_THROWS(FiniteGapSet(-2.0, 2.0, {{1.0, 2.0}}));
    FiniteGapSet ok(-2.0, 2.0, {{-0.5, 0.5}});
    CHECK(ok.num_bands() == 2);
    CHECK(ok.contains(0.5));
    CHECK(!ok.contains(0.0));
    CHECK(ok.gap_index(0.1) == 0);
}

TEST_CASE("interval: capacity, Green values, equilibrium")
{
    auto G = build_green(FiniteGapSet(-2.0, 2.0), 128);
    CHECK(G.capacity == doctest::Approx(1.0).epsilon(1e-13));
    REQUIRE(G.Q.size() == 1); // Q is the monic constant 1 when there are no gaps
    CHECK(G.Q[0] == 1.0);
    CHECK(green_value(G, 2.5) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(green_value(G, 1.0) == 0.0);
    CHECK(equilibrium_mass(G, 0) == doctest::Approx(1.0).epsilon(1e-12));
    // arcsine symmetry: mass of [0,2] is 1/2
    CHECK(equilibrium_mass(G, 0.0, 2.0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK_THROWS(equilibrium_mass(G, 3));
    CHECK(pw_sum(G) == 0.0);
}

TEST_CASE("two symmetric bands against the squaring oracle")
{
    auto G = build_green(FiniteGapSet(-2.0, 2.0, {{-1.0, 1.0}}), 128);
    CHECK(G.capacity == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-10));
    CHECK(G.q_roots[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(green_value(G, 0.0) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-10));
    CHECK(equilibrium_mass(G, 0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(equilibrium_mass(G, 1) == doctest::Approx(0.5).epsilon(1e-10));
    // g_E(x) = g_[1,4](x^2)/2 off the set
    for (double x : {0.3, 2.2, 3.0, -2.7}) {
        CHECK(green_value(G, x) ==
              doctest::Approx(0.5 * g_interval(1.0, 4.0, x * x)).epsilon(1e-9));
    }
    CHECK(pw_sum(G) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-10));
}

TEST_CASE("asymmetric two-band set via translation")
{
    auto G = build_green(FiniteGapSet(0.0, 3.0, {{1.0, 2.0}}), 128);
    CHECK(G.capacity == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
    CHECK(G.q_roots[0] == doctest::Approx(1.5).epsilon(1e-11));
}

TEST_CASE("affine covariance of the capacity")
{
    auto G = build_green(FiniteGapSet(-2.0, 2.0, {{-0.3, 0.4}}), 128);
    auto H = build_green(FiniteGapSet(-3.0, 5.0, {{0.4, 1.8}}), 128); // 2E + 1
    CHECK(H.capacity == doctest::Approx(2.0 * G.capacity).epsilon(1e-10));
}

TEST_CASE("complex Green values and far field")
{
    auto G = build_green(FiniteGapSet(-2.0, 2.0), 128);
    // closed form g = log|z +/- sqrt(z^2-4)| - log 2 (the root outside the disk)
    auto closed = [](Complex x) {
        Complex s = std::sqrt(x * x - 4.0);
        Complex z1 = 0.5 * (x + s), z2 = 0.5 * (x - s);
        return std::log(std::max(std::abs(z1), std::abs(z2)));
    };
    for (Complex x : {Complex(0.3, 0.8), Complex(-1.0, 0.1), Complex(2.5, -1.0), Complex(0.0, 3.0)}) {
        CHECK(green_value(G, x) == doctest::Approx(closed(x)).epsilon(1e-10));
    }
    // conjugation symmetry and far-field seam
    CHECK(green_value(G, Complex(1.0, 2.0)) ==
          doctest::Approx(green_value(G, Complex(1.0, -2.0))).epsilon(1e-13));
    for (double t : {11.9, 12.1}) { // the representation switches near 3*diam
        CHECK(green_value(G, Complex(t, 0.5)) ==
              doctest::Approx(closed(Complex(t, 0.5))).epsilon(1e-9));
    }
    // g(x) - log|x| -> -log cap
    CHECK(green_value(G, 1e7) - std::log(1e7) == doctest::Approx(0.0).epsilon(1e-7));
    CHECK_THROWS(green_value(G, Complex(std::nan(""), 0.0)));
}

TEST_CASE("gap critical point is the only sign change of g'")
{
    FiniteGapSet set(-2.0, 2.0, {{-0.7, 0.2}});
    auto G = build_green(set, 128);
    double c = G.q_roots[0];
    CHECK(c > -0.7);
    CHECK(c < 0.2);
    // g decreasing left of c, increasing right of c (g' = Q/sqrtR changes sign once)
    double gl = green_value(G, -0.69), gc = green_value(G, c), gr = green_value(G, 0.19);
    CHECK(gc > gl);
    CHECK(gc > gr);
    // concavity of g on the gap: midpoint values exceed chords
    double g1 = green_value(G, 0.5 * (-0.69 + c));
    CHECK(g1 > 0.5 * (gl + gc));
}

TEST_CASE("blaschke sum")
{
    auto G = build_green(FiniteGapSet(-2.0, 2.0), 128);
    CHECK(blaschke_sum(G, {}) == 0.0);
    CHECK(blaschke_sum(G, {2.5}) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(blaschke_sum(G, {2.5, -2.5}) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS(blaschke_sum(G, {0.5}));
}

TEST_CASE("equilibrium quadrature converges under order doubling")
{
    FiniteGapSet set(-2.0, 2.0, {{-0.4, 0.9}});
    auto G1 = build_green(set, 128);
    auto G2 = build_green(set, 256);
    CHECK(std::abs(G1.capacity - G2.capacity) < 1e-12);
    CHECK(std::abs(equilibrium_mass(G1, 0) - equilibrium_mass(G2, 0)) < 1e-12);
    CHECK(std::abs(equilibrium_mass(G1, 0) + equilibrium_mass(G1, 1) - 1.0) < 1e-12);
}

TEST_CASE("sqrt(R) branch with Re x inside a gap")
{
    // continuity of the branch across the gap line: approaching a gap point
    // from either half plane must agree with the real in-gap branch
    FiniteGapSet set(-3.0, 3.0, {{-1.0, 1.0}});
    double t = 0.3;
    double on_gap = sqrt_R_real(set, t);
    Complex above = sqrt_R(set, Complex(t, 1e-9));
    Complex below = sqrt_R(set, Complex(t, -1e-9));
    CHECK(std::abs(above - on_gap) < 1e-7 * std::abs(on_gap));
    CHECK(std::abs(below - on_gap) < 1e-7 * std::abs(on_gap));
    CHECK(std::abs(above - std::conj(below)) < 1e-15 * std::abs(on_gap));
    // and the Green value is continuous there too
    auto G = build_green(set, 128);
    CHECK(green_value(G, Complex(t, 1e-9)) ==
          doctest::Approx(green_value(G, t)).epsilon(1e-6));
}

TEST_CASE("two-gap set against the squaring oracle")
{
    // E = preimage of F = [0,1] u [2,4] under x -> x^2:
    // E = [-2,-sqrt 2] u [-1,1] u [sqrt 2,2], cap(E) = sqrt(cap(F)),
    // g_E(x) = g_F(x^2)/2
    double r2 = std::sqrt(2.0);
    FiniteGapSet E(-2.0, 2.0, {{-r2, -1.0}, {1.0, r2}});
    auto GE = build_green(E, 160);
    auto GF = build_green(FiniteGapSet(0.0, 4.0, {{1.0, 2.0}}), 160);
    CHECK(GE.capacity == doctest::Approx(std::sqrt(GF.capacity)).epsilon(1e-10));
    for (double x : {0.5, 1.2, -1.3, 2.5, -3.0}) {
        if (E.contains(x))
            continue;
        CHECK(green_value(GE, x) ==
              doctest::Approx(0.5 * green_value(GF, x * x)).epsilon(1e-8));
    }
    // symmetric set: critical points come in +/- pairs that square to the
    // critical point of F
    REQUIRE(GE.q_roots.size() == 2);
    CHECK(GE.q_roots[0] == doctest::Approx(-GE.q_roots[1]).epsilon(1e-10));
    CHECK(GE.q_roots[1] * GE.q_roots[1] == doctest::Approx(GF.q_roots[0]).epsilon(1e-9));
    // band masses: outer bands carry the mass of F's second band, split evenly
    double mF1 = equilibrium_mass(GF, 1);
    CHECK(equilibrium_mass(GE, 0) == doctest::Approx(0.5 * mF1).epsilon(1e-9));
    CHECK(equilibrium_mass(GE, 2) == doctest::Approx(0.5 * mF1).epsilon(1e-9));
    CHECK(pw_sum(GE) == doctest::Approx(2.0 * green_value(GE, GE.q_roots[1])).epsilon(1e-10));
}
