#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace botd::cli {

struct GlobalOptions {
    int jobs = 1;
    std::uint64_t seed = 7;
};

/// Registers every subcommand on `app`. The selected command's body is stored in
/// `action` during parsing and run by the caller afterwards.
void add_commands(CLI::App& app, GlobalOptions& global, std::function<int()>& action);

/// "a:b:step" (inclusive, rounded to 1e-9) or a comma-separated list.
std::vector<double> parse_scale_list(const std::string& text);

}  // namespace botd::cli
