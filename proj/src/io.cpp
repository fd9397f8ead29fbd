#include "szegolab/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace szegolab::io {

FiniteGapSet set_from_json(const json& j)
{
    check_schema(j, {"alpha", "beta", "gaps"});
    if (!j.contains("alpha") || !j.contains("beta"))
        throw std::invalid_argument("set: alpha and beta are required");
    std::vector<std::pair<double, double>> gaps;
    if (j.contains("gaps"))
        for (const auto& g : j.at("gaps"))
            gaps.emplace_back(g.at(0).get<double>(), g.at(1).get<double>());
    return FiniteGapSet(j.at("alpha").get<double>(), j.at("beta").get<double>(), std::move(gaps));
}

json set_to_json(const FiniteGapSet& set)
{
    json j;
    j["alpha"] = set.alpha;
    j["beta"] = set.beta;
    j["gaps"] = json::array();
    for (const auto& g : set.gaps)
        j["gaps"].push_back({g.first, g.second});
    return j;
}

Divisor divisor_from_json(const json& j)
{
    check_schema(j, {"points"});
    Divisor d;
    for (const auto& p : j.at("points")) {
        check_schema(p, {"x", "eps"});
        Divisor::Point pt;
        pt.x = p.at("x").get<double>();
        pt.eps = p.value("eps", 1);
        d.points.push_back(pt);
    }
    return d;
}

json divisor_to_json(const Divisor& d)
{
    json pts = json::array();
    for (const auto& p : d.points)
        pts.push_back({{"x", p.x}, {"eps", p.eps}});
    return json{{"points", pts}};
}

DiscretizedMeasure measure_from_json(const json& j, const FiniteGapSet& set,
                                     int nodes_per_band)
{
    check_schema(j, {"family", "masses", "divisor"});
    std::string family = j.at("family").get<std::string>();
    DiscretizedMeasure mu;
    if (family == "chebyshev_u")
        mu = chebyshev_second_kind_measure(set, nodes_per_band);
    else if (family == "chebyshev_t" || family == "equilibrium")
        mu = chebyshev_first_kind_measure(set, nodes_per_band);
    else if (family == "uniform")
        mu = uniform_measure(set, nodes_per_band);
    else if (family == "torus_plus") {
        auto green = std::make_shared<GreenFunction>(build_green(set));
        TorusPoint T = build_torus_point(divisor_from_json(j.at("divisor")), green, nodes_per_band);
        mu = T.mu_plus;
    } else
        throw std::invalid_argument("measure: unknown family '" + family + "'");
    if (j.contains("masses"))
        for (const auto& m : j.at("masses"))
            mu = with_point_mass(mu, m.at(0).get<double>(), m.at(1).get<double>());
    return mu;
}

json measure_to_json(const DiscretizedMeasure& mu)
{
    json j;
    j["set"] = set_to_json(mu.set);
    j["bands"] = json::array();
    for (const auto& band : mu.bands) {
        json b;
        b["nodes"] = std::vector<double>(band.nodes.begin(), band.nodes.end());
        b["weights"] = std::vector<double>(band.eff_weights.begin(), band.eff_weights.end());
        b["density"] = std::vector<double>(band.f_values.begin(), band.f_values.end());
        j["bands"].push_back(std::move(b));
    }
    j["point_masses"] = json::array();
    for (const auto& [x, w] : mu.point_masses)
        j["point_masses"].push_back({x, w});
    j["edge_exponents"] = mu.edge_exponents;
    return j;
}

json szego_report_to_json(const SzegoReport& rep)
{
    json j;
    j["szego_integral"] = rep.szego.finite ? json(rep.szego.value) : json("-inf");
    j["blaschke_sum"] = rep.blaschke;
    j["entropy"] = rep.entropy.finite ? json(rep.entropy.value) : json("+inf");
    j["normalized_leading"] =
        std::vector<double>(rep.normalized_leading.begin(), rep.normalized_leading.end());
    j["essential_support_ok"] = rep.essential_support_ok;
    j["member"] = rep.member;
    j["reasons"] = rep.reasons;
    return j;
}

void check_schema(const json& j, const std::vector<std::string>& allowed_keys)
{
    if (!j.is_object())
        throw std::invalid_argument("config: expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "schema") {
            if (value != 1)
                throw std::invalid_argument("config: unsupported schema version");
            continue;
        }
        bool ok = false;
        for (const auto& k : allowed_keys)
            if (k == key)
                ok = true;
        if (!ok)
            throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open " + path);
    return json::parse(in); // nlohmann reports line/column in the exception text
}

// ---------------------------------------------------------------------------

std::string CsvWriter::format(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::string path, std::vector<std::string> header)
    : path_(std::move(path)), tmp_path_(path_ + ".tmp")
{
    for (size_t i = 0; i < header.size(); ++i) {
        if (i)
            buffer_ += ',';
        buffer_ += header[i];
    }
    buffer_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values)
{
    for (size_t i = 0; i < values.size(); ++i) {
        if (i)
            buffer_ += ',';
        buffer_ += format(values[i]);
    }
    buffer_ += '\n';
}

void CsvWriter::row_mixed(const std::vector<std::string>& values)
{
    for (size_t i = 0; i < values.size(); ++i) {
        if (i)
            buffer_ += ',';
        buffer_ += values[i];
    }
    buffer_ += '\n';
}

void CsvWriter::close()
{
    if (closed_)
        return;
    atomic_write_text(path_, buffer_);
    closed_ = true;
}

CsvWriter::~CsvWriter()
{
    try {
        close();
    } catch (...) {
    }
}

void atomic_write_text(const std::string& path, const std::string& content)
{
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp + " for writing");
        out << content;
        if (!out.good())
            throw std::runtime_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("atomic rename failed for " + path);
}

} // namespace szegolab::io
