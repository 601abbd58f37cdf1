#include "fracdrift/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "fracdrift/errors.hpp"
#include "fracdrift/io.hpp"

namespace fracdrift {

namespace {

struct ConfigEntry {
    std::vector<std::string> values;
    std::size_t line = 0;
};

using ConfigMap = std::map<std::string, ConfigEntry>;

const std::map<std::string, std::string> kSchema = {
    {"model.name", "string"},
    {"model.theta0", "reals"},
    {"model.box.lower", "reals"},
    {"model.box.upper", "reals"},
    {"noise.H", "real"},
    {"noise.epsilon", "reals"},
    {"grid.T", "real"},
    {"grid.n", "integer"},
    {"sde.x0", "real"},
    {"study.M", "integer"},
    {"study.seed", "integer"},
    {"study.threads", "integer"},
    {"study.diagnostics", "strings"},
    {"study.contrast_theta", "reals"},
    {"study.hessian_step", "real"},
    {"optimizer.gradient_tolerance", "real"},
    {"optimizer.max_iterations", "integer"},
    {"optimizer.extra_starts", "integer"},
    {"output.directory", "string"},
    {"output.formats", "strings"},
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

ConfigMap parse_key_tree(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open config: " + file.string());
    ConfigMap out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError(file.string() + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string rhs = trim(line.substr(eq + 1));
        if (!kSchema.count(key))
            throw ValidationError(file.string() + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (out.count(key))
            throw ValidationError(file.string() + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        ConfigEntry entry;
        entry.line = lineno;
        std::stringstream ss(rhs);
        std::string tok;
        while (ss >> tok) entry.values.push_back(tok);
        if (entry.values.empty())
            throw ValidationError(file.string() + ":" + std::to_string(lineno) + ": missing value for '" + key + "'");
        out.emplace(key, std::move(entry));
    }
    return out;
}

double to_real(const std::filesystem::path& file, const ConfigEntry& e, const std::string& key, std::size_t idx = 0) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.values.at(idx), &pos);
        if (pos != e.values[idx].size()) throw std::invalid_argument(e.values[idx]);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(file.string() + ":" + std::to_string(e.line) + ": '" + key + "' expects a number, got '" +
                              e.values.at(idx) + "'");
    }
}

std::uint64_t to_u64(const std::filesystem::path& file, const ConfigEntry& e, const std::string& key) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(e.values.at(0), &pos);
        if (pos != e.values[0].size()) throw std::invalid_argument(e.values[0]);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(file.string() + ":" + std::to_string(e.line) + ": '" + key +
                              "' expects a nonnegative integer, got '" + e.values.at(0) + "'");
    }
}

std::vector<double> to_reals(const std::filesystem::path& file, const ConfigEntry& e, const std::string& key) {
    std::vector<double> out;
    for (std::size_t i = 0; i < e.values.size(); ++i) out.push_back(to_real(file, e, key, i));
    return out;
}

}  // namespace

RunConfig load_config(const std::filesystem::path& file) {
    const ConfigMap cm = parse_key_tree(file);
    RunConfig cfg;
    const auto require = [&](const std::string& key) -> const ConfigEntry& {
        const auto it = cm.find(key);
        if (it == cm.end()) throw ValidationError(file.string() + ": missing required key '" + key + "'");
        return it->second;
    };
    const auto maybe = [&](const std::string& key) -> const ConfigEntry* {
        const auto it = cm.find(key);
        return it == cm.end() ? nullptr : &it->second;
    };

    cfg.model_kind = parse_model_name(require("model.name").values[0]);
    cfg.theta0 = to_reals(file, require("model.theta0"), "model.theta0");
    cfg.box_lower = to_reals(file, require("model.box.lower"), "model.box.lower");
    cfg.box_upper = to_reals(file, require("model.box.upper"), "model.box.upper");
    cfg.H = to_real(file, require("noise.H"), "noise.H");
    if (const auto* e = maybe("noise.epsilon")) cfg.epsilons = to_reals(file, *e, "noise.epsilon");
    cfg.T = to_real(file, require("grid.T"), "grid.T");
    cfg.n = static_cast<std::size_t>(to_u64(file, require("grid.n"), "grid.n"));
    if (const auto* e = maybe("sde.x0")) cfg.x0 = to_real(file, *e, "sde.x0");
    if (const auto* e = maybe("study.M")) cfg.M = static_cast<std::size_t>(to_u64(file, *e, "study.M"));
    if (const auto* e = maybe("study.seed")) {
        cfg.seed = to_u64(file, *e, "study.seed");
        cfg.seed_set = true;
    }
    if (const auto* e = maybe("study.threads")) cfg.threads = static_cast<int>(to_u64(file, *e, "study.threads"));
    if (const auto* e = maybe("study.diagnostics")) {
        for (const auto& v : e->values) {
            if (v == "contrast") cfg.diag_contrast = true;
            else if (v == "hessian") cfg.diag_hessian = true;
            else
                throw ValidationError(file.string() + ":" + std::to_string(e->line) +
                                      ": unknown diagnostic '" + v + "' (expected contrast|hessian)");
        }
    }
    if (const auto* e = maybe("study.contrast_theta")) cfg.contrast_theta = to_reals(file, *e, "study.contrast_theta");
    if (const auto* e = maybe("study.hessian_step")) cfg.hessian_step = to_real(file, *e, "study.hessian_step");
    if (const auto* e = maybe("optimizer.gradient_tolerance"))
        cfg.optimizer.grad_tol = to_real(file, *e, "optimizer.gradient_tolerance");
    if (const auto* e = maybe("optimizer.max_iterations"))
        cfg.optimizer.max_iterations = static_cast<int>(to_u64(file, *e, "optimizer.max_iterations"));
    if (const auto* e = maybe("optimizer.extra_starts"))
        cfg.optimizer.extra_starts = static_cast<int>(to_u64(file, *e, "optimizer.extra_starts"));
    if (const auto* e = maybe("output.directory")) cfg.out_dir = e->values[0];
    if (const auto* e = maybe("output.formats")) {
        cfg.fmt_json = false;
        cfg.fmt_csv = false;
        for (const auto& v : e->values) {
            if (v == "json") cfg.fmt_json = true;
            else if (v == "csv") cfg.fmt_csv = true;
            else
                throw ValidationError(file.string() + ":" + std::to_string(e->line) + ": unknown format '" + v + "'");
        }
    }
    return cfg;
}

namespace {

ParameterBox box_from(const RunConfig& cfg) { return ParameterBox(cfg.box_lower, cfg.box_upper, cfg.theta0); }

void require_estimation_h(const RunConfig& cfg) {
    if (cfg.H == 0.5) throw ValidationError("noise.H = 0.5 is excluded for estimation commands");
}

double single_epsilon(const RunConfig& cfg) {
    if (cfg.epsilons.empty()) throw ValidationError("missing required key 'noise.epsilon'");
    return cfg.epsilons.front();
}

std::filesystem::path prepare_out_dir(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

StudyConfig study_config_from(const RunConfig& cfg) {
    StudyConfig sc(box_from(cfg), HurstIndex(cfg.H));
    sc.model_kind = cfg.model_kind;
    if (cfg.epsilons.empty()) throw ValidationError("missing required key 'noise.epsilon'");
    sc.epsilons = cfg.epsilons;
    sc.T = cfg.T;
    sc.n = cfg.n;
    sc.M = cfg.M;
    if (!cfg.seed_set) throw ValidationError("missing required key 'study.seed'");
    sc.master_seed = RngSeed{cfg.seed};
    sc.x0 = cfg.x0;
    sc.optimizer = cfg.optimizer;
    sc.threads = cfg.threads;
    sc.run_contrast = cfg.diag_contrast;
    sc.contrast_theta = cfg.contrast_theta;
    sc.run_hessian_check = cfg.diag_hessian;
    sc.hessian_step = cfg.hessian_step;
    return sc;
}

int cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    const auto dir = prepare_out_dir(out_dir);
    const TimeGrid grid = make_grid(cfg.T, cfg.n);
    const HurstIndex H(cfg.H);  // H = 1/2 allowed for pure simulation
    const ParameterBox box = box_from(cfg);
    const DriftModel model = builtin_model(cfg.model_kind, box);
    const SdeConfig sde(cfg.x0, single_epsilon(cfg), H, grid);
    const FbmCirculantSampler sampler(grid, H);
    const RngSeed master{cfg.seed};
    const std::size_t paths = std::max<std::size_t>(1, cfg.M);
    for (std::size_t r = 0; r < paths; ++r) {
        const SampledPath noise = sampler.sample(derive_seed(master, r));
        const SampledPath path = simulate_sde(model, cfg.theta0, sde, noise);
        char name[32];
        std::snprintf(name, sizeof(name), "path_%03zu.csv", r);
        write_path_csv(dir / name, path, noise);
    }
    return 0;
}

int cmd_estimate(const RunConfig& cfg, const std::filesystem::path& data, const std::filesystem::path& out_dir) {
    require_estimation_h(cfg);
    const auto dir = prepare_out_dir(out_dir);
    const TimeGrid grid = make_grid(cfg.T, cfg.n);
    const ParameterBox box = box_from(cfg);
    const DriftModel model = builtin_model(cfg.model_kind, box);
    const SdeConfig sde(cfg.x0, single_epsilon(cfg), HurstIndex(cfg.H), grid);
    const SampledPath observed = read_data_csv(data, grid);
    LikelihoodContext ctx = make_context(observed, sde, model);
    const EstimationResult res = maximize_likelihood(ctx, box, cfg.optimizer);
    write_text_file(dir / "estimate.json", estimation_to_json(res));
    return 0;
}

int cmd_fisher(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    require_estimation_h(cfg);
    const auto dir = prepare_out_dir(out_dir);
    const TimeGrid grid = make_grid(cfg.T, cfg.n);
    const ParameterBox box = box_from(cfg);
    const DriftModel model = builtin_model(cfg.model_kind, box);
    const double eps = cfg.epsilons.empty() ? 1.0 : cfg.epsilons.front();
    const SdeConfig sde(cfg.x0, eps, HurstIndex(cfg.H), grid);
    const FisherMatrix fm = gamma_matrix(model, cfg.theta0, sde);
    if (cfg.fmt_json) write_text_file(dir / "fisher.json", fisher_to_json(fm));
    if (cfg.fmt_csv) write_fisher_csv(dir, fm);
    return 0;
}

int cmd_study(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    require_estimation_h(cfg);
    if (cfg.M == 0) throw ValidationError("study.M must be positive");
    const auto dir = prepare_out_dir(out_dir);
    const StudyConfig sc = study_config_from(cfg);
    const StudyReport report = run_study(sc);
    if (cfg.fmt_json) write_text_file(dir / "report.json", study_report_to_json(report));
    if (cfg.fmt_csv) {
        for (std::size_t e = 0; e < report.blocks.size(); ++e) {
            char name[40];
            std::snprintf(name, sizeof(name), "replicates_%02zu.csv", e);
            write_replicates_csv(dir / name, report.blocks[e]);
        }
        write_study_summary_csv(dir / "summary.csv", report);
        write_histogram_csv(dir / "histogram.csv", report);
    }
    write_study_summary_text(dir / "summary.txt", report);
    return 0;
}

int run_command(const std::string& command, const std::filesystem::path& config_path,
                const std::optional<std::filesystem::path>& data_path,
                const std::optional<std::filesystem::path>& out_dir_override,
                const std::optional<std::uint64_t>& seed_override) {
    try {
        RunConfig cfg = load_config(config_path);
        if (seed_override) {
            cfg.seed = *seed_override;
            cfg.seed_set = true;
        }
        const std::filesystem::path out = out_dir_override.value_or(std::filesystem::path(cfg.out_dir));
        if (command == "simulate") return cmd_simulate(cfg, out);
        if (command == "estimate") {
            if (!data_path) throw ValidationError("estimate requires --data <path>");
            return cmd_estimate(cfg, *data_path, out);
        }
        if (command == "fisher") return cmd_fisher(cfg, out);
        if (command == "study") return cmd_study(cfg, out);
        throw ValidationError("unknown command '" + command + "'");
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace fracdrift
