#include "sturm/cli.hpp"

int main(int argc, char** argv) {
    sturm::cli::RunConfig cfg;
    if (auto code = sturm::cli::parse_command_line(argc, argv, cfg)) return *code;
    return sturm::cli::run(cfg);
}
