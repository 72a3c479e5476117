#include <iostream>

#include "singshock/cli.hpp"
#include "singshock/commands.hpp"

int main(int argc, char** argv) {
    singshock::RunConfig cfg;
    try {
        cfg = singshock::parse_cli(argc, argv);
    } catch (const singshock::UsageError& e) {
        (e.exit_code() == 0 ? std::cout : std::cerr) << e.what() << '\n';
        return e.exit_code();
    }
    return singshock::execute(cfg, std::cout, std::cerr);
}
