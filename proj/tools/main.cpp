#include <cstdio>
#include <exception>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "botd/errors.hpp"
#include "commands.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"botd: text-instance geometry via center masks and polar minimum distance"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "TOML/INI file with the same keys as the flags; flags win");

    botd::cli::GlobalOptions global;
    app.add_option("--jobs", global.jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", global.seed, "Seed for every random choice");

    std::function<int()> action;
    botd::cli::add_commands(app, global, action);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    omp_set_num_threads(global.jobs);
    try {
        return action();
    } catch (const botd::ParseError& e) {
        std::fprintf(stderr, "botd: parse error: %s\n", e.what());
        return kExitIo;
    } catch (const botd::IoError& e) {
        std::fprintf(stderr, "botd: i/o error: %s\n", e.what());
        return kExitIo;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "botd: malformed json: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "botd: %s\n", e.what());
        return kExitValidation;
    }
}
