// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Exit status is nonzero if any criterion fails.

#include "ergolab/validation.hpp"

#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv) {
    ergolab::validation::Options options;
    if (argc > 1) options.seed = std::strtoull(argv[1], nullptr, 10);
    int failed = 0;
    const auto results = ergolab::validation::run_suite(
        ergolab::validation::Suite::All, options, [&](const ergolab::validation::CriterionResult& r) {
            std::printf("%s  criterion %2d  %-36s %7.2f s  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                        r.seconds, r.detail.c_str());
            std::fflush(stdout);
            if (!r.passed) ++failed;
        });
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
    return failed == 0 ? 0 : 1;
}
