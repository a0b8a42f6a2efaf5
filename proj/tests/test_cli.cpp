#include "mcf_ttdl/cli/fixtures.hpp"
#include "mcf_ttdl/cli/job_config.hpp"
#include "mcf_ttdl/cli/run_job.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace mcf;
using namespace mcf::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& tag) {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    auto p = fs::temp_directory_path() / ("mcf_ttdl_cli_" + std::string(info->name()) + "_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string parse_error_message(const std::string& text) {
    try {
        parse_config(text);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Parse);
        return e.what();
    }
    ADD_FAILURE() << "config parsed unexpectedly";
    return {};
}

std::string fixture(const std::string& file) {
    for (const auto& f : fixture_configs())
        if (f.filename == file) return f.contents;
    ADD_FAILURE() << "no fixture " << file;
    return {};
}

std::string record_value(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
    return {};
}

int run_cli(const std::string& args) {
    const int rc = std::system((std::string(MCF_TTDL_CLI_PATH) + " " + args + " 2>/dev/null").c_str());
#ifdef WEXITSTATUS
    return WEXITSTATUS(rc);
#else
    return rc;
#endif
}

const char* kThreeTaps =
    "[job]\nkind = simulate-filter\nname = three\n\n[taps]\ndelay_ps = 0, 100, 200\n\n[grid]\nf_stop_ghz = 30\n";

}  // namespace

TEST(ConfigParse, MinimalThreeTapFilter) {
    const auto cfg = parse_config(kThreeTaps);
    EXPECT_EQ(cfg.kind, JobKind::simulate_filter);
    EXPECT_EQ(cfg.name, "three");
    const auto& job = std::get<SimulateFilterJob>(cfg.job);
    const auto& taps = std::get<TapSet>(job.source);
    ASSERT_EQ(taps.size(), 3u);
    EXPECT_EQ(taps[2].delay_ps, 200.0);
    EXPECT_EQ(taps[1].amplitude, 1.0);
    EXPECT_EQ(job.grid.points, 4001u);
    EXPECT_EQ(job.grid.f_stop_ghz, 30.0);
}

TEST(ConfigParse, CommentsAndWhitespace) {
    const auto cfg = parse_config("# header\n  [job]  \n kind=design-spacing # trailing\n[target]\nfsr_ghz=+4.97\n");
    EXPECT_EQ(std::get<DesignSpacingJob>(cfg.job).fsr_ghz, 4.97);
    EXPECT_EQ(cfg.name, "design-spacing");
}

TEST(ConfigParse, UnitSuffixMismatchNamesKey) {
    const auto msg = parse_error_message(
        "[job]\nkind = validate-hetero\n[geometry]\npitch = 35\n[hetero]\nlambda0_nm = 1550\nlength_km = 5\n"
        "d1_ps_km_nm = 14.75\ndelta_d_ps_km_nm = 1\n[band]\nmin_nm = 1550\nmax_nm = 1570\n");
    EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'pitch'"), std::string::npos) << msg;
    EXPECT_NE(msg.find("pitch_um"), std::string::npos) << msg;
}

TEST(ConfigParse, Rejections) {
    EXPECT_NE(parse_error_message(std::string(kThreeTaps) + "[extra]\nx = 1\n").find("unknown section [extra]"),
              std::string::npos);
    EXPECT_NE(parse_error_message("[job]\nkind = design-spacing\n[target]\nfsr_ghz = 5\ncolour = red\n")
                  .find("unknown key 'colour'"),
              std::string::npos);
    EXPECT_NE(parse_error_message("[job]\nkind = design-spacing\n[target]\ngroup_index = 1.5\n")
                  .find("missing required key 'fsr_ghz'"),
              std::string::npos);
    EXPECT_NE(parse_error_message("[job]\nkind = design-spacing\n").find("missing required section [target]"),
              std::string::npos);
    EXPECT_NE(parse_error_message("[job]\nkind = design-spacing\n[target]\nfsr_ghz = 5\n[target]\nfsr_ghz = 6\n")
                  .find("duplicate section [target] (first at line 3)"),
              std::string::npos);
    EXPECT_NE(parse_error_message("[job]\nkind = design-spacing\n[target]\nfsr_ghz = 5\nfsr_ghz = 6\n")
                  .find("duplicate key 'fsr_ghz'"),
              std::string::npos);
    EXPECT_NE(parse_error_message("[job]\nkind = simulate-everything\n").find("unknown job kind"), std::string::npos);
    EXPECT_NE(parse_error_message("[job]\nkind = design-spacing\n[target]\nfsr_ghz = five\n").find("expected a number"),
              std::string::npos);
    EXPECT_NE(parse_error_message("kind = design-spacing\n").find("before any section"), std::string::npos);
    EXPECT_NE(parse_error_message("[job\nkind = x\n").find("malformed section header"), std::string::npos);
    EXPECT_NE(parse_error_message("[job]\nkind = design-spacing\nname = ../up\n[target]\nfsr_ghz = 5\n")
                  .find("plain file stem"),
              std::string::npos);
}

TEST(ConfigParse, FilterNeedsExactlyOneSource) {
    const std::string two = std::string(kThreeTaps) + "[device]\npreset = reference\n[select]\nregime = wavelength\ncore_id = 6\n";
    EXPECT_THROW(parse_config(two), Error);
    EXPECT_THROW(parse_config("[job]\nkind = simulate-filter\n[grid]\nf_stop_ghz = 10\n"), Error);
}

TEST(ConfigParse, FixturesAllParseWithMatchingNames) {
    const auto files = fixture_configs();
    EXPECT_EQ(files.size(), 15u);
    for (const auto& f : files) {
        const auto cfg = parse_config(f.contents);
        EXPECT_EQ(cfg.name + ".cfg", f.filename);
    }
}

TEST(RunJob, HeteroLink1560Metrics) {
    const auto dir = scratch("out");
    const auto out = run_job(parse_config(fixture("hetero_link_1560.cfg")), dir);
    ASSERT_EQ(out.exit_code, kExitOk) << out.summary;
    EXPECT_EQ(out.written.size(), 3u);
    const auto metrics = slurp(dir / "hetero_link_1560.metrics.txt");
    EXPECT_EQ(record_value(metrics, "fsr_ghz"), "20");
    EXPECT_EQ(record_value(metrics, "fsr_method"), "analytic");
    EXPECT_EQ(record_value(metrics, "tap_count"), "7");
    EXPECT_NEAR(std::stod(record_value(metrics, "peak_spacing_ghz")), 20.0, 20.0 * 1e-3);
    EXPECT_EQ(metrics.rfind("schema_version=1\nkind=simulate-filter\nname=hetero_link_1560\n", 0), 0u);
}

TEST(RunJob, CsvHeaders) {
    const auto dir = scratch("out");
    ASSERT_EQ(run_job(parse_config(kThreeTaps), dir).exit_code, kExitOk);
    const auto resp = slurp(dir / "three.response.csv");
    EXPECT_EQ(resp.rfind("schema_version,kind\n1,simulate-filter\nfreq_ghz,mag_db,phase_rad\n0,0,0\n", 0), 0u)
        << resp.substr(0, 120);
    const auto taps = slurp(dir / "three.taps.csv");
    EXPECT_EQ(taps.rfind("schema_version,kind\n1,simulate-filter\ntap_index,delay_ps,amplitude,label\n", 0), 0u);
    std::size_t lines = 0;
    for (char c : resp) lines += c == '\n';
    EXPECT_EQ(lines, 3u + 4001u);
}

TEST(RunJob, InscriptionPassAndFail) {
    const auto dir = scratch("out");
    const auto ok = run_job(parse_config(fixture("fbg_inscription.cfg")), dir);
    EXPECT_EQ(ok.exit_code, kExitOk);
    EXPECT_EQ(record_value(slurp(dir / "fbg_inscription.report.txt"), "pass"), "true");

    const auto wide = run_job(parse_config("[job]\nkind = validate-inscription\nname = wide\n[device]\n"
                                           "preset = reference\n[beam]\nwidth_um = 25\nheight_um = 40\n"),
                              dir);
    EXPECT_EQ(wide.exit_code, kExitValidationFailed);
    ASSERT_EQ(wide.written.size(), 1u);
    const auto rep = slurp(dir / "wide.report.txt");
    EXPECT_EQ(record_value(rep, "pass"), "false");
    EXPECT_EQ(record_value(rep, "violation.1.rule"), "beam-width");
    EXPECT_EQ(record_value(rep, "violation.1.margin"), "-2");
    EXPECT_NE(wide.summary.find("rules=beam-width"), std::string::npos);
}

TEST(RunJob, AnchorOperatingPointIsInputError) {
    const auto dir = scratch("out");
    auto text = fixture("hetero_link_taps.cfg");
    text.replace(text.find("lambda_m_nm = 1560"), 18, "lambda_m_nm = 1550");
    const auto out = run_job(parse_config(text), dir);
    EXPECT_EQ(out.exit_code, kExitInputError);
    EXPECT_EQ(out.summary.rfind("taps-hetero: error[degenerate-taps]:", 0), 0u) << out.summary;
    EXPECT_TRUE(out.written.empty());
}

TEST(RunJob, OutputDirectoryIsAFile) {
    const auto dir = scratch("out");
    const auto blocker = dir / "file";
    std::ofstream(blocker) << "x";
    const auto out = run_job(parse_config(kThreeTaps), blocker);
    EXPECT_EQ(out.exit_code, kExitIoError);
    EXPECT_EQ(out.summary.rfind("simulate-filter: error[io]:", 0), 0u) << out.summary;
}

TEST(RunJob, RepeatRunsAreByteIdentical) {
    const auto a = scratch("a"), b = scratch("b");
    for (const auto* file : {"fbg_core5.cfg", "hetero_link_validate.cfg", "design_wavelength.cfg", "solve_dispersion.cfg"}) {
        const auto cfg = parse_config(fixture(file));
        ASSERT_EQ(run_job(cfg, a, 1).exit_code, kExitOk);
        ASSERT_EQ(run_job(cfg, b, 3).exit_code, kExitOk);
    }
    std::size_t compared = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path();
        ++compared;
    }
    EXPECT_EQ(compared, 6u);
}

TEST(Format, ShortestRoundTrip) {
    EXPECT_EQ(format_double(20.0), "20");
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(-2.5e-7), "-2.5e-07");
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 21) - 10);
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
}

TEST(Binary, ExitCodes) {
    const auto dir = scratch("bin");
    const std::string out = " --out " + (dir / "o").string();
    ASSERT_EQ(run_cli("--fixtures --out " + (dir / "cfg").string()), 0);
    const auto cfg = [&](const std::string& f) { return " --config " + (dir / "cfg" / f).string(); };

    EXPECT_EQ(run_cli("design-spacing" + cfg("design_spacing.cfg") + out), kExitOk);
    EXPECT_TRUE(fs::exists(dir / "o" / "design_spacing.design.txt"));

    std::ofstream(dir / "wide.cfg") << "[job]\nkind = validate-inscription\nname = wide\n[device]\npreset = reference\n"
                                       "[beam]\nwidth_um = 25\nheight_um = 40\n";
    EXPECT_EQ(run_cli("validate-inscription --config " + (dir / "wide.cfg").string() + out), kExitValidationFailed);
    EXPECT_TRUE(fs::exists(dir / "o" / "wide.report.txt"));

    EXPECT_EQ(run_cli(""), kExitInputError);
    EXPECT_EQ(run_cli("no-such-kind" + cfg("design_spacing.cfg")), kExitInputError);
    EXPECT_EQ(run_cli("design-spacing"), kExitInputError);
    EXPECT_EQ(run_cli("design-spacing --bogus"), kExitInputError);
    EXPECT_EQ(run_cli("design-wavelength" + cfg("design_spacing.cfg") + out), kExitInputError);
    std::ofstream(dir / "bad.cfg") << "[job]\nkind = design-spacing\n[target]\nfsr_ghz = -1\n";
    EXPECT_EQ(run_cli("design-spacing --config " + (dir / "bad.cfg").string() + out), kExitInputError);

    EXPECT_EQ(run_cli("design-spacing --config " + (dir / "missing.cfg").string() + out), kExitIoError);
    std::ofstream(dir / "blocker") << "x";
    EXPECT_EQ(run_cli("design-spacing" + cfg("design_spacing.cfg") + " --out " + (dir / "blocker").string()),
              kExitIoError);
}
