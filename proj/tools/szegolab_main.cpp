// szegolab CLI: batch front-end over the library. Subcommands mirror the
// module pipelines; outputs are CSV/JSON written atomically. Exit codes:
// 0 ok, 1 assertion failure, 2 config/schema error, 3 numerical failure.

#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "szegolab/acceptance.hpp"
#include "szegolab/asymptotics.hpp"
#include "szegolab/dynamics.hpp"
#include "szegolab/io.hpp"
#include "szegolab/jost.hpp"
#include "szegolab/szego.hpp"

using namespace szegolab;
using io::json;

namespace {

struct CliError {
    int code;
    std::string message;
};

FiniteGapSet load_set(const std::string& path)
{
    return io::set_from_json(io::load_json_file(path));
}

void parse_range(const std::string& spec, long& lo, long& hi)
{
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("range must look like lo:hi");
    lo = std::stol(spec.substr(0, colon));
    hi = std::stol(spec.substr(colon + 1));
}

int run_gapset(const std::string& set_path, int quad, const std::string& samples,
               const std::string& grid)
{
    FiniteGapSet set = load_set(set_path);
    GreenFunction G = build_green(set, quad);
    std::cout << "capacity " << io::CsvWriter::format(G.capacity) << "\n";
    for (int k = 0; k < set.num_bands(); ++k)
        std::cout << "band " << k << " [" << set.band_lo(k) << ", " << set.band_hi(k)
                  << "] mass " << io::CsvWriter::format(equilibrium_mass(G, k)) << "\n";
    for (size_t j = 0; j < G.q_roots.size(); ++j)
        std::cout << "critical_point " << j << " " << io::CsvWriter::format(G.q_roots[j]) << "\n";
    std::cout << "pw_sum " << io::CsvWriter::format(pw_sum(G)) << "\n";
    if (!samples.empty()) {
        double lo = set.alpha - 1.0, hi = set.beta + 1.0;
        int n = 200;
        if (!grid.empty()) {
            auto c1 = grid.find(':'), c2 = grid.rfind(':');
            if (c1 == std::string::npos || c2 == c1)
                throw std::invalid_argument("--grid must look like lo:hi:count");
            lo = std::stod(grid.substr(0, c1));
            hi = std::stod(grid.substr(c1 + 1, c2 - c1 - 1));
            n = std::stoi(grid.substr(c2 + 1));
        }
        io::CsvWriter csv(samples, {"x", "g"});
        for (int i = 0; i < n; ++i) {
            double x = lo + (hi - lo) * i / (n - 1);
            csv.row({x, green_value(G, x)});
        }
        csv.close();
        std::cout << "wrote " << samples << "\n";
    }
    return 0;
}

int run_torus(const std::string& set_path, const std::string& div_path, int quad,
              const std::string& window, const std::string& out)
{
    FiniteGapSet set = load_set(set_path);
    auto green = std::make_shared<GreenFunction>(build_green(set));
    Divisor d = io::divisor_from_json(io::load_json_file(div_path));
    TorusPoint T = build_torus_point(d, green, quad);
    std::cout << "a0 " << io::CsvWriter::format(std::sqrt(T.a0_sq)) << "\n";
    std::cout << "A " << io::CsvWriter::format(T.A) << "\n";
    std::cout << "rho_total " << io::CsvWriter::format(T.rho_total) << "\n";
    std::cout << "capacity " << io::CsvWriter::format(green->capacity) << "\n";
    long lo = -8, hi = 8;
    if (!window.empty())
        parse_range(window, lo, hi);
    JacobiCoeffs C = torus_coeffs(T, lo, hi);
    if (!out.empty()) {
        io::CsvWriter csv(out, {"n", "a", "b"});
        for (long n = lo; n <= hi; ++n)
            csv.row({static_cast<double>(n), C.a(n), C.b(n)});
        csv.close();
        std::cout << "wrote " << out << "\n";
    } else {
        for (long n = lo; n <= hi; ++n)
            std::cout << "n " << n << " a " << io::CsvWriter::format(C.a(n)) << " b "
                      << io::CsvWriter::format(C.b(n)) << "\n";
    }
    return 0;
}

int run_szego(const std::string& set_path, const std::string& mu_path, int quad,
              const std::string& json_out, const std::string& measure_json)
{
    FiniteGapSet set = load_set(set_path);
    GreenFunction G = build_green(set, std::max(128, quad / 4));
    DiscretizedMeasure mu = io::measure_from_json(io::load_json_file(mu_path), set, quad);
    if (!measure_json.empty()) {
        io::atomic_write_text(measure_json, io::measure_to_json(mu).dump(2) + "\n");
        std::cout << "wrote " << measure_json << "\n";
    }
    SzegoReport rep = membership(mu, G);
    std::cout << "szego_integral "
              << (rep.szego.finite ? io::CsvWriter::format(rep.szego.value) : "-inf") << "\n";
    std::cout << "blaschke_sum " << io::CsvWriter::format(rep.blaschke) << "\n";
    std::cout << "entropy "
              << (rep.entropy.finite ? io::CsvWriter::format(rep.entropy.value) : "+inf") << "\n";
    std::cout << "essential_support " << (rep.essential_support_ok ? "ok" : "fails") << "\n";
    std::cout << "member " << (rep.member ? "yes" : "no") << "\n";
    for (const auto& r : rep.reasons)
        std::cout << "reason: " << r << "\n";
    if (!json_out.empty()) {
        io::atomic_write_text(json_out, io::szego_report_to_json(rep).dump(2) + "\n");
        std::cout << "wrote " << json_out << "\n";
    }
    return rep.member ? 0 : 1;
}

int run_dynamics(const std::string& config_path, const std::string& out)
{
    json cfg = io::load_json_file(config_path);
    io::check_schema(cfg, {"set", "divisor", "perturbation", "depth", "window", "N", "quad",
                           "fit_quad", "seed", "assert"});
    FiniteGapSet set = io::set_from_json(cfg.at("set"));
    auto green = std::make_shared<GreenFunction>(build_green(set));
    Divisor d = io::divisor_from_json(cfg.at("divisor"));
    int quad = cfg.value("quad", 1600);
    TorusPoint T = build_torus_point(d, green, quad);

    json pert = cfg.value("perturbation", json::object());
    io::check_schema(pert, {"a_amp", "a_decay", "b_amp", "b_decay"});
    double aa = pert.value("a_amp", 0.0), qa = pert.value("a_decay", 0.8);
    double ba = pert.value("b_amp", 0.0), qb = pert.value("b_decay", 0.8);
    int N = cfg.value("N", 400);
    int depth = cfg.value("depth", 40);
    int window = cfg.value("window", 12);

    JacobiCoeffs J = perturb_torus(
        T, [=](long n) { return std::make_pair(aa * std::pow(qa, n), ba * std::pow(qb, n)); },
        std::max(N, 2 * depth + 400) + 16);

    IdentifyOptions opts;
    opts.seed = cfg.value("seed", 20240901UL);
    if (cfg.contains("fit_quad"))
        opts.fit_quad = cfg.at("fit_quad").get<int>();
    opts.final_quad = quad;
    IdentifyResult res = identify_torus_point(J, green, depth, window, opts);
    std::cout << "identified divisor:";
    for (const auto& p : res.point.divisor.points)
        std::cout << " (" << io::CsvWriter::format(p.x) << ", " << p.eps << ")";
    std::cout << "\nmisfit " << io::CsvWriter::format(res.misfit) << "\n";
    std::cout << "depth_agreement " << io::CsvWriter::format(res.depth_agreement) << "\n";

    OrbitReport rep = orbit_error(J, res.point, N);
    std::cout << "ell2_sum " << io::CsvWriter::format(rep.ell2_sum) << " (reported)\n";
    io::CsvWriter csv(out, {"n", "a_n", "b_n", "a_n_prime", "b_n_prime", "e_n", "prod", "sum"});
    for (int n = 1; n <= N; ++n)
        csv.row({static_cast<double>(n), rep.a[n - 1], rep.b[n - 1], rep.ap[n - 1],
                 rep.bp[n - 1], rep.error_seq[n - 1], rep.partial_products[n - 1],
                 rep.partial_sums[n - 1]});
    csv.close();
    std::cout << "wrote " << out << "\n";

    int rc = 0;
    if (cfg.contains("assert")) {
        const json& as = cfg.at("assert");
        io::check_schema(as, {"divisor_drift_tol", "tail_tol", "tail_start"});
        if (as.contains("divisor_drift_tol") &&
            !(res.depth_agreement < as.at("divisor_drift_tol").get<double>())) {
            std::cout << "ASSERT FAILED: divisor drift " << res.depth_agreement << "\n";
            rc = 1;
        }
        if (as.contains("tail_tol")) {
            double tol = as.at("tail_tol").get<double>();
            int start = as.value("tail_start", 60);
            for (int n = start; n <= N; ++n)
                if (!(rep.error_seq[n - 1] < tol)) {
                    std::cout << "ASSERT FAILED: e_" << n << " = " << rep.error_seq[n - 1]
                              << "\n";
                    rc = 1;
                    break;
                }
        }
    }
    return rc;
}

int run_jost(const std::string& set_path, const std::string& mu_path, int quad,
             const std::string& rays, int rsteps, const std::string& out)
{
    FiniteGapSet set = load_set(set_path);
    DiscretizedMeasure mu = io::measure_from_json(io::load_json_file(mu_path), set, quad);
    JostFunction jf = build_jost(mu);
    std::vector<double> angles;
    {
        std::string s = rays;
        size_t pos = 0;
        while (pos < s.size()) {
            size_t comma = s.find(',', pos);
            if (comma == std::string::npos)
                comma = s.size();
            angles.push_back(std::stod(s.substr(pos, comma - pos)));
            pos = comma + 1;
        }
    }
    io::CsvWriter csv(out, {"z_re", "z_im", "re_u", "im_u"});
    for (double th : angles) {
        for (int i = 1; i <= rsteps; ++i) {
            double r = 0.98 * i / rsteps;
            Complex z = std::polar(r, th);
            Complex u = jf.eval(z);
            csv.row({z.real(), z.imag(), u.real(), u.imag()});
        }
    }
    csv.close();
    std::cout << "wrote " << out << "\n";
    return 0;
}

int run_scan(const std::string& config_path, const std::string& out)
{
    json cfg = io::load_json_file(config_path);
    io::check_schema(cfg, {"set", "measure", "reference_divisor", "x_grid", "N", "quad"});
    FiniteGapSet set = io::set_from_json(cfg.at("set"));
    int quad = cfg.value("quad", 512);
    int N = cfg.value("N", 60);
    DiscretizedMeasure mu = io::measure_from_json(cfg.at("measure"), set, quad);
    auto green = std::make_shared<GreenFunction>(build_green(set));
    Divisor d;
    if (cfg.contains("reference_divisor"))
        d = io::divisor_from_json(cfg.at("reference_divisor"));
    else
        d.points.resize(0);
    TorusPoint T = build_torus_point(d, green, quad);
    JacobiCoeffs J = stieltjes_coeffs(mu, N);
    JacobiCoeffs Jp = stieltjes_coeffs(T.mu_plus, N);
    std::vector<Complex> grid;
    for (const auto& x : cfg.at("x_grid"))
        grid.push_back(Complex(x.get<double>(), 0.0));
    RatioScan scan = poly_ratio_scan(J, Jp, grid, N, set);
    io::CsvWriter csv(out, {"x", "n", "value", "extrapolated", "certified"});
    for (size_t i = 0; i < grid.size(); ++i)
        for (int k = 0; k < N; ++k)
            csv.row({grid[i].real(), static_cast<double>(k + 1), scan.values[i][k].real(),
                     scan.extrapolated[i].real(), scan.certified[i] ? 1.0 : 0.0});
    csv.close();
    std::cout << "wrote " << out << "\n";
    return 0;
}

int run_suite(const std::string& name, const std::string& filter, const std::string& json_out)
{
    if (name != "acceptance")
        throw std::invalid_argument("unknown suite '" + name + "'");
    auto results = acceptance::run_all(filter);
    acceptance::print_results(std::cout, results);
    if (!json_out.empty()) {
        json j;
        j["suite"] = "acceptance";
        j["all_passed"] = acceptance::all_passed(results);
        j["criteria"] = json::array();
        for (const auto& r : results)
            j["criteria"].push_back(
                {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        io::atomic_write_text(json_out, j.dump(2) + "\n");
        std::cout << "wrote " << json_out << "\n";
    }
    return acceptance::all_passed(results) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"szegolab: finite-gap sets, isospectral tori, and Szego-class dynamics"};
    app.require_subcommand(1);

    std::string set_path, div_path, mu_path, config_path, out_path, json_out, measure_json;
    std::string samples, grid, window, rays = "0";
    int quad = 512, rsteps = 32;
    std::string suite_name = "acceptance", filter;

    auto* gapset = app.add_subcommand("gapset", "potential theory of a finite-gap set");
    gapset->add_option("--set", set_path, "set JSON file")->required();
    gapset->add_option("--quad", quad, "quadrature order");
    gapset->add_option("--samples", samples, "CSV output of (x, g(x)) samples");
    gapset->add_option("--grid", grid, "sample grid lo:hi:count");

    auto* torus = app.add_subcommand("torus", "build a torus point from a divisor");
    torus->add_option("--set", set_path)->required();
    torus->add_option("--divisor", div_path)->required();
    torus->add_option("--quad", quad);
    torus->add_option("--window", window, "coefficient window lo:hi");
    torus->add_option("--out", out_path, "CSV output (n, a, b)");

    auto* szego = app.add_subcommand("szego", "Szego-class membership report");
    szego->add_option("--set", set_path)->required();
    szego->add_option("--measure", mu_path)->required();
    szego->add_option("--quad", quad);
    szego->add_option("--json", json_out, "JSON report output");
    szego->add_option("--measure-json", measure_json, "serialize the discretized measure");

    auto* dynamics = app.add_subcommand("dynamics", "left-shift orbit identification");
    auto* dyn_run = dynamics->add_subcommand("run", "identify the torus orbit of a config");
    dyn_run->add_option("--config", config_path)->required();
    dyn_run->add_option("--out", out_path)->required();

    auto* jost = app.add_subcommand("jost", "Jost function along radial rays");
    jost->add_option("--set", set_path)->required();
    jost->add_option("--measure", mu_path)->required();
    jost->add_option("--quad", quad);
    jost->add_option("--rays", rays, "comma-separated ray angles (radians)");
    jost->add_option("--rsteps", rsteps, "radial steps per ray");
    jost->add_option("--out", out_path)->required();

    auto* asym = app.add_subcommand("asymptotics", "polynomial ratio scans");
    auto* scan = asym->add_subcommand("scan", "run a ratio scan config");
    scan->add_option("--config", config_path)->required();
    scan->add_option("--out", out_path)->required();

    auto* suite = app.add_subcommand("suite", "run a named verification suite");
    suite->add_option("name", suite_name, "suite name (acceptance)");
    suite->add_option("--filter", filter, "only criteria whose name contains this");
    suite->add_option("--json", json_out, "machine-readable verdict");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gapset->parsed())
            return run_gapset(set_path, quad, samples, grid);
        if (torus->parsed())
            return run_torus(set_path, div_path, quad, window, out_path);
        if (szego->parsed())
            return run_szego(set_path, mu_path, quad, json_out, measure_json);
        if (dynamics->parsed()) {
            if (!dyn_run->parsed())
                throw std::invalid_argument("dynamics requires the 'run' subcommand");
            return run_dynamics(config_path, out_path);
        }
        if (jost->parsed())
            return run_jost(set_path, mu_path, quad, rays, rsteps, out_path);
        if (asym->parsed()) {
            if (!scan->parsed())
                throw std::invalid_argument("asymptotics requires the 'scan' subcommand");
            return run_scan(config_path, out_path);
        }
        if (suite->parsed())
            return run_suite(suite_name, filter, json_out);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
