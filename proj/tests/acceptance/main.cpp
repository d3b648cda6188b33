// Acceptance harness: runs verification criteria and prints one PASS/FAIL
// line each. Usage:
//   scatlab_acceptance --criterion <id>
//   scatlab_acceptance --suite <algebra|oracle|estimates|scattering|all>
//   scatlab_acceptance            (same as --suite all)

#include "scatlab/verify.hpp"

#include <cstdio>
#include <cstring>
#include <iostream>

int main(int argc, char** argv) {
    using namespace scatlab;
    try {
        if (argc >= 3 && std::strcmp(argv[1], "--criterion") == 0) {
            const int id = std::atoi(argv[2]);
            const auto r = run_criterion(id);
            std::printf("%s criterion-%d %s [%s] (%ds)\n", r.pass ? "PASS" : "FAIL", r.id,
                        r.name.c_str(), r.detail.c_str(), static_cast<int>(r.seconds));
            return r.pass ? 0 : 1;
        }
        std::string suite = "all";
        if (argc >= 3 && std::strcmp(argv[1], "--suite") == 0) suite = argv[2];
        const int failures = run_suite(suite, std::cout);
        return failures == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance harness error: %s\n", e.what());
        return 3;
    }
}
