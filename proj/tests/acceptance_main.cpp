#include <cstring>
#include <iostream>

#include "szegolab/acceptance.hpp"

int main(int argc, char** argv)
{
    std::string filter;
    for (int i = 1; i < argc; ++i)
        if (std::strncmp(argv[i], "--filter=", 9) == 0)
            filter = argv[i] + 9;
    auto results = szegolab::acceptance::run_all(filter);
    szegolab::acceptance::print_results(std::cout, results);
    return szegolab::acceptance::all_passed(results) ? 0 : 1;
}
