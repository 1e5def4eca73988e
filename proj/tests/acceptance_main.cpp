#include <cstdlib>
#include <string>

#include "growthsde/acceptance.hpp"

int main(int argc, char** argv) {
    growthsde::acceptance::Options opts;
    opts.quick = true;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--full") opts.quick = false;
        if (arg == "--cli" && i + 1 < argc) opts.cli_path = argv[++i];
    }
    if (opts.cli_path.empty())
        if (const char* env = std::getenv("GROWTHSDE_CLI")) opts.cli_path = env;
    return growthsde::acceptance::run_all(opts) == 0 ? 0 : 1;
}
