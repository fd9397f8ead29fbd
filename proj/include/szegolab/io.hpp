#ifndef SZEGOLAB_IO_HPP
#define SZEGOLAB_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "szegolab/jacobi.hpp"
#include "szegolab/szego.hpp"
#include "szegolab/torus.hpp"

namespace szegolab::io {

using nlohmann::json;

// {"alpha": a, "beta": b, "gaps": [[a1,b1],...]}
FiniteGapSet set_from_json(const json& j);
json set_to_json(const FiniteGapSet& set);

// {"points": [{"x": ..., "eps": 1}, ...]}
Divisor divisor_from_json(const json& j);
json divisor_to_json(const Divisor& d);

// Named measure families used by the CLI and configs:
//   {"family": "chebyshev_u" | "chebyshev_t" | "uniform", "masses": [[x,w],...]}
// or {"family": "torus_plus", "divisor": {...}} for mu_plus of a torus point.
DiscretizedMeasure measure_from_json(const json& j, const FiniteGapSet& set,
                                     int nodes_per_band);

json measure_to_json(const DiscretizedMeasure& mu);
json szego_report_to_json(const SzegoReport& rep);

// rejects unknown keys; every config carries "schema": 1
void check_schema(const json& j, const std::vector<std::string>& allowed_keys);

json load_json_file(const std::string& path); // parse errors keep line/column info

// CSV with a header row, '.' decimal separator, 17 significant digits,
// written atomically (temp file + rename).
class CsvWriter {
public:
    CsvWriter(std::string path, std::vector<std::string> header);
    void row(const std::vector<double>& values);
    void row_mixed(const std::vector<std::string>& values);
    void close(); // performs the atomic rename
    ~CsvWriter();

    static std::string format(double v);

private:
    std::string path_, tmp_path_;
    std::string buffer_;
    bool closed_ = false;
};

void atomic_write_text(const std::string& path, const std::string& content);

} // namespace szegolab::io

#endif
