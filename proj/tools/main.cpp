#include <CLI11.hpp>
#include <cstdint>
#include <optional>
#include <string>

#include "fracdrift/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Drift MLE for SDEs with additive small fractional noise"};
    app.require_subcommand(1);

    std::string config;
    std::string data;
    std::string out;
    std::uint64_t seed = 0;
    bool have_seed = false;

    const auto add_common = [&](CLI::App* sub, bool with_data) {
        sub->add_option("--config", config, "configuration file (key-tree format)")->required();
        sub->add_option("--out", out, "output directory (overrides output.directory)");
        sub->add_option("--seed", seed, "master seed override")->each([&](const std::string&) { have_seed = true; });
        if (with_data) sub->add_option("--data", data, "observed path CSV (columns t, X)")->required();
    };

    add_common(app.add_subcommand("simulate", "simulate paths at theta0"), false);
    add_common(app.add_subcommand("estimate", "maximum likelihood fit of an observed path"), true);
    add_common(app.add_subcommand("fisher", "limiting Fisher information at theta0"), false);
    add_common(app.add_subcommand("study", "Monte Carlo study of the normalized estimator"), false);

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    return fracdrift::run_command(command, config, data.empty() ? std::nullopt : std::optional<std::filesystem::path>(data),
                                  out.empty() ? std::nullopt : std::optional<std::filesystem::path>(out),
                                  have_seed ? std::optional<std::uint64_t>(seed) : std::nullopt);
}
