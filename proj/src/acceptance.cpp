#include "szegolab/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "szegolab/asymptotics.hpp"
#include "szegolab/dynamics.hpp"
#include "szegolab/jost.hpp"
#include "szegolab/szego.hpp"

namespace szegolab::acceptance {

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

struct Check {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            if (!detail.empty())
                detail += "; ";
            detail += "FAILED: " + what;
        }
    }
    void note(const std::string& s)
    {
        if (!detail.empty())
            detail += "; ";
        detail += s;
    }
};

double uniform01(std::mt19937_64& rng)
{
    return (rng() >> 11) * 0x1.0p-53;
}

// the two-gap example set and its {1,2}-alternating torus point
FiniteGapSet two_band_set()
{
    return FiniteGapSet(-3.0, 3.0, {{-1.0, 1.0}});
}

Divisor alternating_divisor()
{
    Divisor d;
    d.points.push_back({0.0, +1});
    return d;
}

CriterionResult criterion_1()
{
    Check c;
    auto G0 = build_green(FiniteGapSet(-2.0, 2.0), 128);
    c.require(std::abs(G0.capacity - 1.0) < 1e-12, "cap([-2,2]) = 1, got " + fmt(G0.capacity));
    double g25 = green_value(G0, 2.5);
    c.require(std::abs(g25 - std::log(2.0)) < 1e-9, "g(2.5) = log 2, got " + fmt(g25));

    auto G1 = build_green(FiniteGapSet(-2.0, 2.0, {{-1.0, 1.0}}), 128);
    c.require(std::abs(G1.capacity - std::sqrt(3.0) / 2.0) < 1e-7,
              "cap([-2,-1]u[1,2]) = sqrt(3)/2, got " + fmt(G1.capacity));
    double g0 = green_value(G1, 0.0);
    c.require(std::abs(g0 - 0.5 * std::log(3.0)) < 1e-7, "g(0) = log(3)/2, got " + fmt(g0));
    c.require(std::abs(G1.q_roots[0]) < 1e-9, "c_1 = 0, got " + fmt(G1.q_roots[0]));
    return {1, "gapset-potential-theory", c.pass, c.detail};
}

CriterionResult criterion_2()
{
    Check c;
    auto green = std::make_shared<GreenFunction>(build_green(two_band_set(), 192));
    TorusPoint T = build_torus_point(alternating_divisor(), green, 640);

    JacobiCoeffs C = torus_coeffs(T, -10, 10);
    double worst = 0.0;
    for (long n = -10; n <= 10; ++n) {
        double a_expect = (n % 2 == 0) ? 2.0 : 1.0;
        worst = std::max(worst, std::abs(C.a(n) - a_expect));
        worst = std::max(worst, std::abs(C.b(n)));
    }
    c.require(worst < 1e-6, "alternating {1,2}, b = 0 coefficients; worst dev " + fmt(worst));
    c.note("coeff dev " + fmt(worst));

    double cap_id = std::abs(std::sqrt(C.a(1) * C.a(2)) - green->capacity);
    c.require(cap_id < 1e-6, "capacity identity sqrt(a1 a2) = cap(E), dev " + fmt(cap_id));

    // reflectionless residual over shifts n in [-3,3], 50 interior points
    std::vector<TorusPoint> pts;
    {
        TorusPoint back = T;
        for (int k = 0; k < 3; ++k)
            back = torus_shift_inverse(back);
        // back is the shift by -3; walk forward to +3
        pts.push_back(back);
        for (int k = -3; k < 3; ++k) {
            back = torus_shift(back);
            pts.push_back(back);
        }
    }
    double worst_refl = 0.0;
    for (const auto& P : pts) {
        for (int band = 0; band < P.set().num_bands(); ++band) {
            double a = P.set().band_lo(band), b = P.set().band_hi(band);
            for (int i = 1; i <= 25; ++i) {
                double t = a + (b - a) * (0.1 + 0.8 * (i - 1) / 24.0);
                worst_refl = std::max(worst_refl, reflectionless_residual(P, t));
            }
        }
    }
    c.require(worst_refl < 1e-6, "reflectionless residual < 1e-6, worst " + fmt(worst_refl));
    c.note("refl " + fmt(worst_refl));
    return {2, "torus-construction", c.pass, c.detail};
}

CriterionResult criterion_3()
{
    Check c;
    // ell = 0 against the Chebyshev closed form
    {
        FiniteGapSet band(-2.0, 2.0);
        auto green = std::make_shared<GreenFunction>(build_green(band, 128));
        TorusPoint T = build_torus_point(Divisor{}, green, 512);
        double worst = 0.0;
        for (int i = 1; i <= 50; ++i) {
            double t = -1.9 + 3.8 * (i - 1) / 49.0;
            double f_closed = std::sqrt(4.0 - t * t) / (2.0 * std::numbers::pi);
            double lhs = 2.0 * T.a0_sq * f_closed;
            double rhs = 1.0 / (std::numbers::pi * boundary_im_green(T.divisor, band, t));
            worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
        }
        c.require(worst < 1e-6, "density identity (ell=0), worst rel dev " + fmt(worst));
    }
    // one 1-gap point
    {
        auto green = std::make_shared<GreenFunction>(build_green(two_band_set(), 192));
        Divisor d;
        d.points.push_back({0.35, +1});
        TorusPoint T = build_torus_point(d, green, 512);
        double worst = 0.0;
        for (int band = 0; band < 2; ++band) {
            double a = T.set().band_lo(band), b = T.set().band_hi(band);
            for (int i = 1; i <= 25; ++i) {
                double t = a + (b - a) * (0.08 + 0.84 * (i - 1) / 24.0);
                double lhs = 2.0 * T.a0_sq * T.mu_plus.density_rule(t);
                double rhs = 1.0 / (std::numbers::pi * boundary_im_green(T.divisor, T.set(), t));
                worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
            }
        }
        c.require(worst < 1e-6, "density identity (1 gap), worst rel dev " + fmt(worst));

        // Szego integral of every torus mu_plus finite and stable under node doubling
        for (const Divisor& dd :
             {Divisor{{{0.0, +1}}}, Divisor{{{0.35, +1}}}, Divisor{{{-0.6, -1}}}, Divisor{{{1.0, +1}}}}) {
            TorusPoint P1 = build_torus_point(dd, green, 512);
            TorusPoint P2 = build_torus_point(dd, green, 1024);
            LogIntegral s1 = szego_integral(P1.mu_plus, *green);
            LogIntegral s2 = szego_integral(P2.mu_plus, *green);
            c.require(s1.finite && s2.finite, "torus mu_plus Szego integral finite");
            c.require(std::abs(s1.value - s2.value) < 1e-8,
                      "Szego integral stable under node doubling, change " +
                          fmt(std::abs(s1.value - s2.value)));
        }
    }
    return {3, "torus-density-identity", c.pass, c.detail};
}

CriterionResult criterion_4()
{
    Check c;
    FiniteGapSet band(-2.0, 2.0);
    auto G = build_green(band, 256);
    auto chebU = chebyshev_second_kind_measure(band, 512);
    auto chebT = chebyshev_first_kind_measure(band, 512);
    auto unif = uniform_measure(band, 512);

    LogIntegral sU = szego_integral(chebU, G);
    c.require(sU.finite && std::abs(sU.value + std::log(2.0 * std::numbers::pi)) < 1e-8,
              "ChebU Szego integral = -log(2 pi), got " + fmt(sU.value));
    LogIntegral su = szego_integral(unif, G);
    c.require(su.finite && std::abs(su.value + std::log(4.0)) < 1e-10,
              "uniform Szego integral = -log 4, got " + fmt(su.value));

    Entropy eE = relative_entropy(chebT, G);
    c.require(eE.finite && std::abs(eE.value) < 1e-10, "S(mu_E) = 0, got " + fmt(eE.value));
    Entropy eU = relative_entropy(chebU, G);
    c.require(eU.finite && std::abs(eU.value - std::log(2.0)) < 1e-7,
              "S(ChebU) = log 2, got " + fmt(eU.value));
    Entropy eu = relative_entropy(unif, G);
    c.require(eu.finite && std::abs(eu.value - std::log(4.0 / std::numbers::pi)) < 1e-7,
              "S(uniform) = log(4/pi), got " + fmt(eu.value));

    JacobiCoeffs Jeq = stieltjes_coeffs(chebT, 24);
    Eigen::VectorXd u = normalized_leading(Jeq, G.capacity, 24);
    double worst = (u.array() - std::numbers::sqrt2).abs().maxCoeff();
    c.require(worst < 1e-10, "normalized leading = sqrt(2) for equilibrium coefficients, dev " + fmt(worst));
    return {4, "szego-functionals", c.pass, c.detail};
}

CriterionResult criterion_5()
{
    Check c;
    auto green = std::make_shared<GreenFunction>(build_green(two_band_set(), 192));
    TorusPoint T = build_torus_point(alternating_divisor(), green, 1600);
    auto decay = [](long n) {
        return std::make_pair(0.3 * std::pow(0.8, n), 0.1 * std::pow(0.85, n));
    };
    JacobiCoeffs J = perturb_torus(T, decay, 620);

    IdentifyOptions opts;
    opts.depth_tol = 1e-4;
    opts.final_quad = 1600;
    IdentifyResult res = identify_torus_point(J, green, 40, 12, opts);
    double dist = divisor_distance(res.point.divisor, T.divisor, green->set);
    c.require(dist < 1e-4, "identified divisor within 1e-4 of generator, dist " + fmt(dist));
    c.require(res.depth_agreement < 1e-4,
              "divisor stable across depths 40/80, drift " + fmt(res.depth_agreement));
    c.note("divisor dist " + fmt(dist) + ", depth drift " + fmt(res.depth_agreement));

    OrbitReport rep = orbit_error(J, res.point, 400);
    double worst_tail = 0.0;
    for (int n = 60; n <= 400; ++n)
        worst_tail = std::max(worst_tail, rep.error_seq[n - 1]);
    c.require(worst_tail < 1e-3, "e_n < 1e-3 for n >= 60, worst " + fmt(worst_tail));

    double dprod = std::abs(rep.partial_products[399] - rep.partial_products[199]);
    double dsum = std::abs(rep.partial_sums[399] - rep.partial_sums[199]);
    c.require(dprod < 1e-6, "a-products Cauchy between N=200 and 400, osc " + fmt(dprod));
    c.require(dsum < 1e-6, "b-sums Cauchy between N=200 and 400, osc " + fmt(dsum));
    return {5, "dynamics-orbit-identification", c.pass, c.detail};
}

CriterionResult criterion_6()
{
    Check c;
    FiniteGapSet band(-2.0, 2.0);
    auto chebT = chebyshev_first_kind_measure(band, 512);
    JacobiCoeffs J = stieltjes_coeffs(chebT, 80);
    JacobiCoeffs Jfree = JacobiCoeffs::free_matrix();

    RatioScan scan = poly_ratio_scan(J, Jfree, {Complex(2.5, 0.0)}, 40, band);
    double limit = 0.75 / std::numbers::sqrt2; // (1-z^2)/sqrt(2) at z = 1/2
    double dev = std::abs(scan.values[0][39] - limit);
    c.require(dev < 1e-6, "ChebT/ChebU ratio at x=2.5 -> 0.5303301 by n=40, dev " + fmt(dev));

    auto greenp = std::make_shared<GreenFunction>(build_green(band, 128));
    TorusPoint Tfree = build_torus_point(Divisor{}, greenp, 512);
    std::vector<double> zg;
    for (int i = 0; i < 20; ++i)
        zg.push_back(0.05 + (0.8 - 0.05) * (i + 0.5) / 20.0);
    auto devs = ratio_vs_jost(J, chebT, Tfree, zg, 60);
    double worst = *std::max_element(devs.begin(), devs.end());
    c.require(worst < 1e-6, "poly-ratio vs Jost-ratio at 20 z points, worst " + fmt(worst));

    // z^n P_n(z + 1/z, ChebU) -> 1/(1-z^2) = 4/3 at z = 1/2
    JacobiCoeffs U = JacobiCoeffs::free_matrix();
    Complex x(2.5, 0.0);
    Complex p = orthonormal_eval(U, 30, x);
    double v = std::abs(std::pow(0.5, 30) * p.real() - 4.0 / 3.0);
    c.require(v < 1e-8, "z^n P_n(z+1/z) -> 4/3 by n=30, dev " + fmt(v));
    return {6, "asymptotics-ratio-limits", c.pass, c.detail};
}

CriterionResult criterion_7()
{
    Check c;
    auto green = std::make_shared<GreenFunction>(build_green(two_band_set(), 192));
    TorusPoint T = build_torus_point(alternating_divisor(), green, 1600);
    JacobiCoeffs Jp = stieltjes_coeffs(T.mu_plus, 600);
    std::vector<double> xs = {3.2, 3.5, 4.0, 5.0, -3.4};
    auto env300 = growth_envelope(Jp, *green, xs, 300);
    auto env600 = growth_envelope(Jp, *green, xs, 600);
    for (size_t i = 0; i < xs.size(); ++i) {
        c.require(env300[i].ratio() < 10.0,
                  "envelope ratio < 10 at x=" + fmt(xs[i]) + ", got " + fmt(env300[i].ratio()));
        double change = std::abs(env600[i].ratio() - env300[i].ratio()) / env300[i].ratio();
        c.require(change < 0.10,
                  "envelope stable to n=600 at x=" + fmt(xs[i]) + ", change " + fmt(change));
    }
    c.note("max ratio " + fmt(env300[0].ratio()));
    return {7, "asymptotics-growth-envelope", c.pass, c.detail};
}

CriterionResult criterion_8()
{
    Check c;
    FiniteGapSet band(-2.0, 2.0);
    auto G = build_green(band, 128);
    std::mt19937_64 rng(0xB14C5EULL);
    int violations = 0;
    double rs[3] = {0.3, 0.5, 0.7};
    for (int trial = 0; trial < 100; ++trial) {
        int npts = static_cast<int>(uniform01(rng) * 6.0); // 0..5
        std::vector<double> ys;
        for (int k = 0; k < npts; ++k) {
            double mag = 2.02 + 4.0 * uniform01(rng);
            ys.push_back(uniform01(rng) < 0.5 ? mag : -mag);
        }
        double r = rs[trial % 3];
        auto [lhs, rhs] = blaschke_product_bound(G, ys, r);
        if (lhs > rhs + 1e-12)
            ++violations;
    }
    c.require(violations == 0, "product bound violations: " + std::to_string(violations));
    return {8, "jost-blaschke-product-bound", c.pass, c.detail};
}

CriterionResult criterion_9()
{
    Check c;
    std::vector<int> ns = {25, 50, 100, 150, 200};

    auto run_case = [&](const TorusPoint& T, const JacobiCoeffs& J, Complex x,
                        const std::string& tag) {
        auto ratios = green_ratio(J, T, ns, x);
        c.require(ratios.back() < 1e-3,
                  tag + ": |G_nn ratio - 1| < 1e-3 at n=200, got " + fmt(ratios.back()));
        for (size_t i = 0; i + 1 < ratios.size(); ++i)
            c.require(ratios[i + 1] < std::max(ratios[i], 5e-12),
                      tag + ": envelope monotone at n=" + std::to_string(ns[i + 1]));
    };

    // rule-based perturbed orbits keep the adaptive resolvent truncation fed
    {
        FiniteGapSet band(-2.0, 2.0);
        auto green = std::make_shared<GreenFunction>(build_green(band, 128));
        TorusPoint T = build_torus_point(Divisor{}, green, 512);
        JacobiCoeffs J = JacobiCoeffs::from_rule(JacobiCoeffs::Side::OneSided, [](long n) {
            return std::make_pair(1.0 + 0.3 * std::pow(0.8, n), 0.1 * std::pow(0.85, n));
        });
        run_case(T, J, Complex(3.0, 0.0), "ell=0");
    }
    {
        auto green = std::make_shared<GreenFunction>(build_green(two_band_set(), 192));
        TorusPoint T = build_torus_point(alternating_divisor(), green, 512);
        // the center-divisor point is exactly the {1,2}-alternating matrix
        JacobiCoeffs J = JacobiCoeffs::from_rule(JacobiCoeffs::Side::OneSided, [](long n) {
            double base = (n % 2 == 0) ? 2.0 : 1.0;
            return std::make_pair(base + 0.3 * std::pow(0.8, n), 0.1 * std::pow(0.85, n));
        });
        run_case(T, J, Complex(4.0, 0.0), "ell=1");
    }
    return {9, "asymptotics-green-ratio", c.pass, c.detail};
}

CriterionResult criterion_10()
{
    Check c;
    auto green = std::make_shared<GreenFunction>(build_green(two_band_set(), 160));
    std::mt19937_64 rng(0x1A7E5ULL);
    int violations = 0;
    int worst = 0;
    std::vector<JacobiCoeffs> bases;
    for (int d = 0; d < 10; ++d) {
        Divisor dv;
        double x = -0.9 + 1.8 * uniform01(rng);
        int eps = (uniform01(rng) < 0.5) ? +1 : -1;
        dv.points.push_back({x, eps});
        TorusPoint T = build_torus_point(dv, green, 512);
        bases.push_back(torus_coeffs(T, 1, 260));
    }
    for (int trial = 0; trial < 100; ++trial) {
        const JacobiCoeffs& base = bases[trial % 10];
        double ca = 0.25 * uniform01(rng), cb = 0.2 * uniform01(rng);
        double qa = 0.6 + 0.3 * uniform01(rng), qb = 0.6 + 0.3 * uniform01(rng);
        JacobiCoeffs J = perturb_coeffs(
            base,
            [=](long n) { return std::make_pair(ca * std::pow(qa, n), cb * std::pow(qb, n)); },
            260);
        int m = 1 + static_cast<int>(uniform01(rng) * 3.0); // 1..3
        auto res = interlacing_check(J, m, *green, 230);
        if (!res.ok)
            ++violations;
        worst = std::max(worst, res.max_between);
    }
    c.require(violations == 0, "interlacing violations: " + std::to_string(violations) +
                                   " (worst between-count " + std::to_string(worst) + ")");
    return {10, "dynamics-interlacing", c.pass, c.detail};
}

CriterionResult criterion_11()
{
    Check c;
    FiniteGapSet band(-2.0, 2.0);
    auto greenp = std::make_shared<GreenFunction>(build_green(band, 128));
    TorusPoint Tfree = build_torus_point(Divisor{}, greenp, 512);

    auto chebT = chebyshev_first_kind_measure(band, 512);
    L2Report r1 = l2_asymptotics(chebT, Tfree, {25, 50, 100});
    c.require(r1.ac.back() < 1e-3, "I_ac < 1e-3 at n=100 for ChebT, got " + fmt(r1.ac.back()));

    auto withmass = with_point_mass(chebyshev_second_kind_measure(band, 512), 2.5, 0.1);
    L2Report r2 = l2_asymptotics(withmass, Tfree, {25, 50, 100});
    c.require(r2.sing.back() < 1e-4,
              "I_sing < 1e-4 at n=100 for one-mass measure, got " + fmt(r2.sing.back()));
    return {11, "asymptotics-l2", c.pass, c.detail};
}

} // namespace

std::vector<CriterionResult> run_all(const std::string& filter)
{
    using Fn = std::function<CriterionResult()>;
    std::vector<std::pair<std::string, Fn>> table = {
        {"gapset-potential-theory", criterion_1}, {"torus-construction", criterion_2},
        {"torus-density-identity", criterion_3},  {"szego-functionals", criterion_4},
        {"dynamics-orbit-identification", criterion_5},{"asymptotics-ratio-limits", criterion_6},
        {"asymptotics-growth-envelope", criterion_7},  {"jost-blaschke-product-bound", criterion_8},
        {"asymptotics-green-ratio", criterion_9},{"dynamics-interlacing", criterion_10},
        {"asymptotics-l2", criterion_11},
    };
    std::vector<CriterionResult> out;
    for (size_t i = 0; i < table.size(); ++i) {
        const auto& [name, fn] = table[i];
        if (!filter.empty() && name.find(filter) == std::string::npos)
            continue;
        try {
            out.push_back(fn());
        } catch (const std::exception& e) {
            CriterionResult r;
            r.id = static_cast<int>(i) + 1;
            r.name = name;
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
            out.push_back(r);
        }
    }
    return out;
}

void print_results(std::ostream& os, const std::vector<CriterionResult>& results)
{
    for (const auto& r : results)
        os << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name
           << (r.detail.empty() ? "" : "  " + r.detail) << "\n";
}

bool all_passed(const std::vector<CriterionResult>& results)
{
    bool ok = !results.empty();
    for (const auto& r : results)
        ok = ok && r.pass;
    return ok;
}

} // namespace szegolab::acceptance
