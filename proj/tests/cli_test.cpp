#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/csv.hpp"
#include "cli/svg.hpp"
#include "spde/errors.hpp"

using namespace spde;
using namespace spde::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / (std::string("spde_cli_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  const fs::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  fs::path path_;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

int run(const CliConfig& config, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_command(config, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

CliConfig make(const std::string& subcommand, const TempDir& dir) {
  CliConfig config;
  config.subcommand = subcommand;
  config.out = dir.str();
  return config;
}

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
};

}  // namespace

TEST(Config, RenderParseRoundTrip) {
  CliConfig config;
  config.subcommand = "compare";
  config.model = "spatial-linear-1d";
  config.scheme = "implicit-euler";
  config.modes = {4, 8};
  config.steps = {16, 64};
  config.implicit_modes = {2, 3};
  config.realizations = 7;
  config.seed = 18446744073709551615ULL;
  config.reference_modes = 64;
  config.reference_steps = 4096;
  config.snapshots = {0.0, 0.25, 1.0 / 3.0};
  config.out = "some/dir";
  config.svg = true;
  config.workers = 3;
  config.samples = 12345;
  CliConfig parsed;
  apply_config_text(parsed, render(config));
  EXPECT_EQ(parsed, config);

  CliConfig defaults;
  CliConfig parsed_defaults;
  apply_config_text(parsed_defaults, render(defaults));
  EXPECT_EQ(parsed_defaults, defaults);
}

TEST(Config, CommandLineOverridesFile) {
  TempDir dir;
  const fs::path file = dir.path() / "run.cfg";
  {
    std::ofstream out(file);
    out << "# comment\nmodel=spatial-linear-1d\nseed=9\nmodes=3\n\nworkers=2\n";
  }
  const std::string path = file.string();
  const char* argv[] = {"spde_bench", "converge", "--config", path.c_str(), "--seed", "4", "--svg"};
  const auto config = parse_cli(7, argv);
  ASSERT_TRUE(config.has_value());
  EXPECT_EQ(config->subcommand, "converge");
  EXPECT_EQ(config->model, "spatial-linear-1d");
  EXPECT_EQ(config->seed, 4U);
  EXPECT_EQ(config->modes, (std::vector<std::size_t>{3}));
  EXPECT_EQ(config->workers, 2U);
  EXPECT_TRUE(config->svg);
}

TEST(Config, RejectsBadInput) {
  const char* unknown_sub[] = {"spde_bench", "plot"};
  EXPECT_THROW(parse_cli(2, unknown_sub), UsageError);
  const char* missing_sub[] = {"spde_bench", "--seed", "3"};
  EXPECT_THROW(parse_cli(3, missing_sub), UsageError);
  const char* bad_number[] = {"spde_bench", "run", "--modes", "4,x"};
  EXPECT_THROW(parse_cli(4, bad_number), UsageError);
  const char* bad_flag[] = {"spde_bench", "run", "--frobnicate", "1"};
  EXPECT_THROW(parse_cli(4, bad_flag), UsageError);
  CliConfig config;
  EXPECT_THROW(apply_config_text(config, "colour=blue\n"), UsageError);
  EXPECT_THROW(apply_config_text(config, "no equals sign\n"), UsageError);
  const char* missing_file[] = {"spde_bench", "run", "--config", "/nonexistent/spde.cfg"};
  EXPECT_THROW(parse_cli(4, missing_file), IoError);
}

TEST(Csv, NumberFormatting) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-2.5), "-2.5");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
  EXPECT_EQ(format_fixed(0.48299999999999998, 3), "0.483");
  const double x = 0.12345678901234567;
  EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST(Csv, IgnoresGlobalLocale) {
  const std::locale previous = std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
  const std::string text = format_number(1.5);
  std::locale::global(previous);
  EXPECT_EQ(text, "1.5");
}

TEST(Csv, ErrorTableLayout) {
  ErrorTable table{Scheme::exp_euler, Dimension::one, {{4, 4, 16, 22.18, 0.25, 0.01}}, {}};
  const auto lines = lines_of(error_table_csv(table));
  ASSERT_EQ(lines.size(), 2U);
  EXPECT_EQ(lines[0], "N,M,rv_count,effort,rms_error,std_error");
  EXPECT_EQ(lines[1].substr(0, 8), "4,4,16,2");
  EXPECT_EQ(lines[1].find(';'), std::string::npos);
}

TEST(Csv, ComparisonWithoutOverlapIsHeaderOnly) {
  EXPECT_EQ(comparison_csv(EfficiencyComparison{}), "error_level,exp_rv_count,implicit_rv_count,ratio\n");
}

TEST(Svg, ContainsSeriesAndSlope) {
  PlotSeries s{"exp-euler", {{10.0, 0.1}, {100.0, 0.01}}, 1.0};
  const std::string svg = loglog_svg("title", "x", "y", {s});
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("exp-euler"), std::string::npos);
  EXPECT_NE(svg.find("slope 1.000"), std::string::npos);
}

TEST(Levels, StepsAndReferenceDefaults) {
  CliConfig config;
  const auto exp = make_levels(config, Scheme::exp_euler, {4, 8});
  EXPECT_EQ(exp[1], (SchemeLevel{8, 8, Scheme::exp_euler}));
  const auto imp = make_levels(config, Scheme::implicit_euler, {2, 4});
  EXPECT_EQ(imp[1].n_steps, 16U);
  EXPECT_EQ(make_reference(config, exp, 128), (SchemeLevel{128, 128, Scheme::exp_euler}));
  EXPECT_EQ(make_reference(config, imp, 64).n_steps, 4096U);
  config.steps = {6};
  EXPECT_EQ(make_reference(config, make_levels(config, Scheme::exp_euler, {4}), 16).n_steps, 48U);
  config.steps = {1, 2, 3};
  EXPECT_THROW(make_levels(config, Scheme::exp_euler, {4, 8}), UsageError);
}

TEST(Snapshots, NearestStep) {
  EXPECT_EQ(snapshot_steps({}, 10), (std::vector<std::size_t>{10}));
  EXPECT_EQ(snapshot_steps({0.0, 0.26, 1.0}, 10), (std::vector<std::size_t>{0, 3, 10}));
  EXPECT_THROW(snapshot_steps({1.5}, 10), UsageError);
}

TEST(RunCommand, WritesBoundaryRowsAndManifest) {
  TempDir dir;
  auto config = make("run", dir);
  const int code = run(config);
  ASSERT_EQ(code, kExitOk);
  const auto lines = lines_of(read_file(dir.path() / "run_step_1000.csv"));
  ASSERT_EQ(lines.size(), 1003U);
  EXPECT_EQ(lines[0], "x,value");
  EXPECT_EQ(lines[1], "0,0");
  EXPECT_EQ(lines[1002], "1,0");
  const std::string manifest = read_file(dir.path() / "manifest.csv");
  EXPECT_NE(manifest.find("rv_count,1000000\n"), std::string::npos);
  EXPECT_NE(manifest.find("snapshot,run_step_1000.csv\n"), std::string::npos);
}

TEST(RunCommand, InitialSnapshotIsInitialData) {
  TempDir dir;
  auto config = make("run", dir);
  config.modes = {16};
  config.snapshots = {0.0};
  ASSERT_EQ(run(config), kExitOk);
  EXPECT_EQ(read_file(dir.path() / "run_step_0.csv"),
            grid_csv(initial_field(builtin_model("reaction-diffusion-1d"), 16)));
}

TEST(RunCommand, TwoDimensionGrid) {
  TempDir dir;
  auto config = make("run", dir);
  config.model = "allen-cahn-2d";
  config.modes = {4};
  ASSERT_EQ(run(config), kExitOk);
  const auto lines = lines_of(read_file(dir.path() / "run_step_4.csv"));
  ASSERT_EQ(lines.size(), 37U);
  EXPECT_EQ(lines[0], "x1,x2,value");
}

TEST(RunCommand, SameSeedIsByteIdentical) {
  TempDir a;
  const fs::path second = a.path() / "second";
  auto config = make("run", a);
  config.modes = {64};
  config.snapshots = {0.5, 1.0};
  ASSERT_EQ(run(config), kExitOk);
  config.out = second.string();
  ASSERT_EQ(run(config), kExitOk);
  for (const char* name : {"run_step_32.csv", "run_step_64.csv", "manifest.csv"}) {
    EXPECT_EQ(read_file(a.path() / name), read_file(second / name)) << name;
  }
  config.seed = 2;
  config.out = (a.path() / "third").string();
  ASSERT_EQ(run(config), kExitOk);
  EXPECT_NE(read_file(a.path() / "run_step_64.csv"), read_file(a.path() / "third" / "run_step_64.csv"));
}

TEST(ConvergeCommand, SelfReferenceAndSvg) {
  TempDir dir;
  auto config = make("converge", dir);
  config.modes = {8};
  config.reference_modes = 8;
  config.realizations = 2;
  config.svg = true;
  std::string out;
  ASSERT_EQ(run(config, &out), kExitOk);
  const auto lines = lines_of(read_file(dir.path() / "error_table.csv"));
  ASSERT_EQ(lines.size(), 2U);
  EXPECT_EQ(lines[1], "8,8,64," + format_number(effort_count(Scheme::exp_euler, 8, Dimension::one)) + ",0,0");
  EXPECT_TRUE(fs::exists(dir.path() / "convergence.svg"));
  EXPECT_NE(out.find("not enough rows"), std::string::npos);
}

TEST(ConvergeCommand, WorkerCountLeavesCsvUnchanged) {
  TempDir dir;
  auto config = make("converge", dir);
  config.modes = {4, 8};
  config.reference_modes = 32;
  config.realizations = 5;
  ASSERT_EQ(run(config), kExitOk);
  const std::string one = read_file(dir.path() / "error_table.csv");
  config.workers = 3;
  ASSERT_EQ(run(config), kExitOk);
  EXPECT_EQ(read_file(dir.path() / "error_table.csv"), one);
}

TEST(CompareCommand, DisjointErrorRanges) {
  TempDir dir;
  auto config = make("compare", dir);
  config.modes = {32};
  config.implicit_modes = {2};
  config.reference_modes = 64;
  config.realizations = 4;
  std::string out;
  ASSERT_EQ(run(config, &out), kExitOk);
  EXPECT_NE(out.find("no comparable error levels"), std::string::npos);
  EXPECT_EQ(read_file(dir.path() / "comparison.csv"), "error_level,exp_rv_count,implicit_rv_count,ratio\n");
}

TEST(NoiseCheckCommand, WritesCsvAndPasses) {
  TempDir dir;
  auto config = make("noise-check", dir);
  config.samples = 20000;
  ASSERT_EQ(run(config), kExitOk);
  const auto lines = lines_of(read_file(dir.path() / "noise_check.csv"));
  ASSERT_EQ(lines.size(), 4U);
  EXPECT_EQ(lines[0],
            "mode,lambda,b,analytic_std_I,sample_std_I,z_I,analytic_std_dW,sample_std_dW,z_dW,analytic_corr,"
            "sample_corr,z_corr,pass");
  EXPECT_EQ(lines[1].substr(0, 2), "1,");
}

TEST(ExitCodes, UsageErrors) {
  TempDir dir;
  auto config = make("run", dir);
  config.model = "heat-3d";
  std::string err;
  EXPECT_EQ(run(config, nullptr, &err), kExitUsage);
  EXPECT_NE(err.find("reaction-diffusion-1d"), std::string::npos);
  config = make("noise-check", dir);
  config.samples = 0;
  EXPECT_EQ(run(config), kExitUsage);
  config = make("compare", dir);
  config.model = "allen-cahn-2d";
  EXPECT_EQ(run(config), kExitUsage);
  config = make("run", dir);
  config.modes = {4, 8};
  EXPECT_EQ(run(config), kExitUsage);
}

TEST(ExitCodes, UnwritableOutput) {
  TempDir dir;
  const fs::path blocker = dir.path() / "file";
  std::ofstream(blocker) << "x";
  auto config = make("run", dir);
  config.modes = {4};
  config.out = (blocker / "sub").string();
  EXPECT_EQ(run(config), kExitIo);
}

TEST(ExitCodes, ExceptionMapping) {
  std::ostringstream err;
  EXPECT_EQ(exit_code_for(std::make_exception_ptr(DivergenceError("x", 3)), err), kExitDivergence);
  EXPECT_EQ(exit_code_for(std::make_exception_ptr(StudyError("x", 0, 4, 4)), err), kExitDivergence);
  EXPECT_EQ(exit_code_for(std::make_exception_ptr(IoError("x")), err), kExitIo);
  EXPECT_EQ(exit_code_for(std::make_exception_ptr(InvalidArgument("x")), err), kExitUsage);
  EXPECT_THROW(exit_code_for(std::make_exception_ptr(std::runtime_error("x")), err), std::runtime_error);
}
