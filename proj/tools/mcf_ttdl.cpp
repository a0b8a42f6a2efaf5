// mcf-ttdl: batch front end. One job per invocation.
//
//   mcf-ttdl <kind> --config <path> [--out <dir>]
//   mcf-ttdl --fixtures [--out <dir>]
//
// Exit codes: 0 ok, 1 validation failed (report written), 2 input error, 3 I/O error.
// MCF_TTDL_THREADS caps internal parallelism (0 or unset = all hardware threads).

#include "mcf_ttdl/cli/fixtures.hpp"
#include "mcf_ttdl/cli/job_config.hpp"
#include "mcf_ttdl/cli/run_job.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int fail(const std::string& prefix, const std::string& tag, const std::string& msg, int code) {
    std::cerr << prefix << ": error[" << tag << "]: " << msg << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace mcf::cli;

    CLI::App app{"Multicore-fiber true-time-delay line and microwave filter toolkit"};
    std::string kind_text, config_path, out_dir = ".";
    bool fixtures = false;
    std::string kinds;
    for (const auto& [k, name] : kJobKinds) kinds += (kinds.empty() ? "" : " | ") + std::string(name);
    app.add_option("kind", kind_text, "Job kind: " + kinds);
    app.add_option("--config", config_path, "Job configuration file");
    app.add_option("--out", out_dir, "Output directory (created if missing)");
    app.add_flag("--fixtures", fixtures, "Write the built-in fixture configurations to the output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        for (auto& c : msg)
            if (c == '\n') c = ' ';
        return fail("mcf-ttdl", "usage", msg, kExitInputError);
    }

    if (fixtures) {
        try {
            const auto written = write_outputs(out_dir, fixture_configs());
            std::cerr << "fixtures: ok files=" << written.size() << '\n';
            return kExitOk;
        } catch (const std::exception& e) {
            return fail("fixtures", "io", e.what(), kExitIoError);
        }
    }

    const std::string prefix = kind_text.empty() ? std::string("mcf-ttdl") : kind_text;
    if (kind_text.empty()) return fail(prefix, "usage", "job kind required (" + kinds + ")", kExitInputError);
    const auto kind = parse_job_kind(kind_text);
    if (!kind) return fail(prefix, "usage", "unknown job kind '" + kind_text + "'", kExitInputError);
    if (config_path.empty()) return fail(prefix, "usage", "--config is required", kExitInputError);

    unsigned threads = 0;
    if (const char* env = std::getenv("MCF_TTDL_THREADS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 0)
            return fail(prefix, "usage", "MCF_TTDL_THREADS must be a non-negative integer", kExitInputError);
        threads = static_cast<unsigned>(v);
    }
    threads = mcf::resolve_threads(threads);

    std::ifstream in(config_path, std::ios::binary);
    if (!in) return fail(prefix, "io", "cannot read config '" + config_path + "'", kExitIoError);
    std::ostringstream text;
    text << in.rdbuf();
    if (in.bad()) return fail(prefix, "io", "error while reading config '" + config_path + "'", kExitIoError);

    JobConfig cfg;
    try {
        cfg = parse_config(text.str());
    } catch (const mcf::Error& e) {
        return fail(prefix, std::string(mcf::to_string(e.code())), config_path + ": " + e.what(), kExitInputError);
    }
    if (cfg.kind != *kind)
        return fail(prefix, "parse",
                    config_path + ": config describes a '" + std::string(to_string(cfg.kind)) + "' job",
                    kExitInputError);

    const auto outcome = run_job(cfg, out_dir, threads);
    std::cerr << outcome.summary << '\n';
    return outcome.exit_code;
}
