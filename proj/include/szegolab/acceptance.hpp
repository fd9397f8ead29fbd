#ifndef SZEGOLAB_ACCEPTANCE_HPP
#define SZEGOLAB_ACCEPTANCE_HPP

#include <ostream>
#include <string>
#include <vector>

namespace szegolab::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

// Runs the numbered acceptance criteria (all of them, or those whose name
// contains `filter`). Every tolerance is pinned here.
std::vector<CriterionResult> run_all(const std::string& filter = "");

// one line per criterion: "[PASS] 3 torus-density-identity  detail..."
void print_results(std::ostream& os, const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace szegolab::acceptance

#endif
