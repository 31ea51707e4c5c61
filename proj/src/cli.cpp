#include "pbbf/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pbbf/config.hpp"
#include "pbbf/csv.hpp"
#include "pbbf/experiments.hpp"

namespace pbbf {

namespace fs = std::filesystem;

namespace {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "results";
    bool force = false;
    int workers = 0;
    int oracle_channels = 1000;
    int oracle_vectors = 100000;
};

// Files an experiment writes, rendered in memory first so nothing is
// touched when the run fails.
using Outputs = std::map<std::string, std::string>;

void write_outputs(const Options& opt, const Outputs& files)
{
    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);
    if (ec) {
        throw OutputError("cannot create output directory '" + opt.out_dir + "': " + ec.message());
    }
    for (const auto& [name, content] : files) {
        const fs::path path = fs::path(opt.out_dir) / name;
        if (fs::exists(path) && !opt.force) {
            throw OutputError("refusing to overwrite '" + path.string() + "' (use --force)");
        }
    }
    for (const auto& [name, content] : files) {
        const fs::path path = fs::path(opt.out_dir) / name;
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw OutputError("cannot write '" + path.string() + "'");
        }
        f << content;
        if (!f) {
            throw OutputError("write failed for '" + path.string() + "'");
        }
    }
}

void check_not_clobbering(const Options& opt, std::initializer_list<const char*> names)
{
    if (opt.force) {
        return;
    }
    for (const char* name : names) {
        const fs::path path = fs::path(opt.out_dir) / name;
        if (fs::exists(path)) {
            throw OutputError("refusing to overwrite '" + path.string() + "' (use --force)");
        }
    }
}

std::string manifest(const std::string& command, const Options& opt, const ExperimentConfig& cfg,
                     const Outputs& files)
{
    nlohmann::json j;
    j["tool_version"] = kToolVersion;
    j["command"] = command;
    j["config_path"] = opt.config_path;
    j["master_seed"] = cfg.seed;
    j["output_dir"] = opt.out_dir;
    std::vector<std::string> names;
    for (const auto& [name, content] : files) {
        names.push_back(name);
    }
    names.push_back("manifest.json");
    j["files"] = names;
    return j.dump(2) + "\n";
}

ExperimentConfig resolve_config(const Options& opt, bool required)
{
    ExperimentConfig cfg;
    if (!opt.config_path.empty()) {
        cfg = load_config(opt.config_path);
    } else if (required) {
        throw ConfigError("--config is required");
    }
    if (opt.seed) {
        cfg.seed = *opt.seed;
    }
    if (opt.workers > 0) {
        cfg.workers = opt.workers;
    }
    return cfg;
}

template <typename Writer, typename Rows>
std::string render(Writer writer, const Rows& rows)
{
    std::ostringstream ss;
    writer(ss, rows);
    return ss.str();
}

int dispatch(const std::string& command, const Options& opt, std::ostream& out)
{
    const bool is_oracle = command == "oracle-check";
    ExperimentConfig cfg = resolve_config(opt, !is_oracle);

    Outputs files;
    if (command == "convergence") {
        check_not_clobbering(opt, {"convergence.csv", "gap_cdf.csv"});
        const ConvergenceResult res = run_convergence_experiment(cfg);
        files["convergence.csv"] = render(csv::write_convergence, res.trajectories);
        files["gap_cdf.csv"] = render(csv::write_gap_cdf, res.gap_cdf);
    } else if (command == "ber") {
        check_not_clobbering(opt, {"ber.csv"});
        files["ber.csv"] = render(csv::write_ber, run_ber_experiment(cfg));
    } else if (command == "tracking") {
        check_not_clobbering(opt, {"tracking.csv"});
        files["tracking.csv"] = render(csv::write_tracking, run_tracking_experiment(cfg));
    } else {
        const OracleCheckResult res = run_oracle_check(cfg, opt.oracle_channels, opt.oracle_vectors);
        out << "oracle-check: " << res.channels << " channels x " << res.random_vectors
            << " random vectors\n"
            << "  worst S-SP excess on SNR:      " << csv::format_double(res.worst_snr_excess) << '\n'
            << "  worst P-SP excess on power:    " << csv::format_double(res.worst_power_excess) << '\n'
            << "  worst |P(P-SP) - ||hbar||^2|:  " << csv::format_double(res.worst_psp_deviation) << '\n'
            << "  worst EGC excess on power:     " << csv::format_double(res.worst_egc_excess) << '\n'
            << (res.passed ? "PASS" : "FAIL") << '\n';
        return res.passed ? exit_code::ok : exit_code::runtime_error;
    }

    files["resolved_config.json"] = dump_config(cfg);
    files["manifest.json"] = manifest(command, opt, cfg, files);
    write_outputs(opt, files);
    out << command << ": wrote " << files.size() << " files to " << opt.out_dir << '\n';
    return exit_code::ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Adaptive 1-bit-feedback distributed beamforming simulator", "pbbf_sim"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "JSON experiment configuration");
        sub->add_option("--seed", opt.seed, "master seed (overrides the config)");
        sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
        sub->add_flag("--force", opt.force, "overwrite existing output files");
        sub->add_option("--workers", opt.workers, "worker threads (0 = all cores)");
    };
    std::vector<CLI::App*> subs = {
        app.add_subcommand("convergence", "SNR-gap trajectories and gap cdf (idealized)"),
        app.add_subcommand("ber", "BER versus nominal SNR (idealized)"),
        app.add_subcommand("tracking", "BER versus normalized Doppler (realistic)"),
        app.add_subcommand("oracle-check", "random-search check of the batch designs"),
    };
    for (auto* sub : subs) {
        add_common(sub);
    }
    subs[3]->add_option("--channels", opt.oracle_channels, "channel draws")->capture_default_str();
    subs[3]->add_option("--vectors", opt.oracle_vectors, "random vectors per channel")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return exit_code::ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_code::config_error;
    }

    std::string command;
    for (auto* sub : subs) {
        if (sub->parsed()) {
            command = sub->get_name();
        }
    }

    try {
        return dispatch(command, opt, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n\n" << app.get_subcommand(command)->help();
        return exit_code::config_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::runtime_error;
    }
}

}  // namespace pbbf
