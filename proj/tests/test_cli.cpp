#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dyadsq/cli.hpp"

using namespace dyadsq;
using namespace dyadsq::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "dyadsq_cli_test";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& l : lines_of(text)) {
    if (!l.empty() && l[0] != '#') out.push_back(l);
  }
  return out;
}

RunConfig scaling_config(const fs::path& out) {
  RunConfig c;
  c.command = "scaling";
  c.family = "alternating";
  c.p = 3.0;
  c.beta_grid = "j=3..8";
  c.out = out.string();
  c.timestamp = false;
  return c;
}

int shell_status(const std::string& cmd) {
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST_CASE("grid specs") {
  const auto g = parse_beta_grid("j=3..5");
  REQUIRE(g.size() == 3);
  CHECK(g[1] == 0.9375);
  CHECK_THROWS_AS(parse_beta_grid("3..5"), UsageError);
  CHECK_THROWS_AS(parse_beta_grid("j=5..3"), DomainError);
}

TEST_CASE("number formatting keeps 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(std::stod(format_number(M_PI)) == M_PI);
}

TEST_CASE("empty report renders metadata and header only") {
  CsvTable t;
  t.metadata = {{"tool", kToolVersion}};
  t.columns = {"k", "partial_mass"};
  CHECK(render_csv(t) == std::string("# tool=") + kToolVersion + "\nk,partial_mass\n");
}

TEST_CASE("cells with commas are quoted") {
  CsvTable t;
  t.columns = {"argmax"};
  t.rows = {{"[0,1)"}};
  CHECK(render_csv(t) == "argmax\n\"[0,1)\"\n");
}

TEST_CASE("scaling csv schema and reproducibility") {
  const fs::path a = scratch_dir() / "scaling_a.csv";
  const fs::path b = scratch_dir() / "scaling_b.csv";
  std::ostringstream err;
  REQUIRE(run(scaling_config(a), err) == kOk);
  REQUIRE(run(scaling_config(b), err) == kOk);
  const std::string text = slurp(a);
  CHECK(text == slurp(b));
  const auto data = data_lines(text);
  REQUIRE(data.size() == 7);
  CHECK(data[0] == "beta,fnorm,snorm,ap_joint,ainfty_w,ainfty_sigma,ratio");
  CHECK(data[1].rfind("0.875,", 0) == 0);
  int fits = 0;
  for (const auto& l : lines_of(text)) fits += l.rfind("#fit,", 0) == 0;
  CHECK(fits == 2);
  CHECK(text.find("# tool=") != std::string::npos);
  CHECK(text.find("timestamp") == std::string::npos);
}

TEST_CASE("timestamp line present unless suppressed") {
  RunConfig c = scaling_config(scratch_dir() / "unused.csv");
  c.beta_grid = "j=3..4";
  c.timestamp = true;
  const std::string text = render_csv(build_table(c));
  CHECK(text.find("# timestamp=") != std::string::npos);
}

TEST_CASE("characteristics of the first power pair") {
  RunConfig c;
  c.command = "characteristics";
  c.family = "power_pair_i";
  c.p = 2.0;
  c.beta = 0.5;
  c.depth = 16;
  const CsvTable t = build_table(c);
  REQUIRE(t.rows.size() == 1);
  const double ap = std::stod(t.rows[0][5]);
  CHECK(t.columns[5] == "ap_dyadic");
  CHECK(ap >= 2.0 / std::exp(1.0));
  CHECK(ap <= 2.0);
}

TEST_CASE("divergence csv columns") {
  RunConfig c;
  c.command = "divergence";
  c.family = "lai_treil";
  c.p = 3.0;
  c.r = 0.4;
  c.k_max = 2000;
  const CsvTable t = build_table(c);
  CHECK(t.columns == std::vector<std::string>{"k", "partial_mass", "paper_bound", "ratio"});
  for (const auto& row : t.rows) CHECK(std::stod(row[3]) >= 1.0);
}

TEST_CASE("status codes") {
  const fs::path dir = scratch_dir();
  std::ostringstream err;

  RunConfig missing = scaling_config(dir / "missing.csv");
  missing.family.clear();
  fs::remove(dir / "missing.csv");
  CHECK(run(missing, err) == kUsage);
  CHECK_FALSE(fs::exists(dir / "missing.csv"));
  CHECK(err.str().rfind("error,usage,2,", 0) == 0);

  RunConfig bad_p = scaling_config(dir / "bad.csv");
  bad_p.p = 0.5;
  CHECK(run(bad_p, err) == kInvalidParameter);

  RunConfig both = scaling_config(dir / "both.csv");
  both.beta_list = {0.5, 0.6, 0.7};
  CHECK(run(both, err) == kUsage);

  RunConfig io = scaling_config("/nonexistent-dir/x.csv");
  io.beta_grid = "j=3..4";
  CHECK(run(io, err) == kIoFailure);

  RunConfig tail;
  tail.command = "square-function";
  tail.family = "lai_treil";
  tail.p = 3.0;
  tail.n_max = 512;
  tail.out = (dir / "tail.csv").string();
  CHECK(run(tail, err) == kNotCertified);

  RunConfig hyp;
  hyp.command = "extension-check";
  hyp.family = "lerner";
  hyp.p = 3.0;
  hyp.beta = 0.9;
  hyp.grid_log2 = 6;
  hyp.out = (dir / "hyp.csv").string();
  CHECK(run(hyp, err) == kHypothesisFailure);

  RunConfig span = hyp;
  span.family = "power_pair_i";
  span.span = 1.0 / 3.0;
  CHECK(run(span, err) == kInvalidParameter);
}

TEST_CASE("output directory from the environment") {
  RunConfig c;
  c.command = "ainfty-growth";
  setenv(kOutputDirEnv, "/tmp/somewhere", 1);
  CHECK(output_path(c) == "/tmp/somewhere/ainfty-growth.csv");
  c.family = "x";
  CHECK(output_path(c) == "/tmp/somewhere/ainfty-growth-x.csv");
  unsetenv(kOutputDirEnv);
  c.out = "given.csv";
  CHECK(output_path(c) == "given.csv");
}

TEST_CASE("executable exit statuses") {
  const fs::path out = scratch_dir() / "exe.csv";
  fs::remove(out);
  const std::string exe = DYADSQ_EXE;
  CHECK(shell_status(exe + " scaling --p 3 --out " + out.string() + " 2>/dev/null") == 2);
  CHECK_FALSE(fs::exists(out));
  CHECK(shell_status(exe + " --bogus-flag 2>/dev/null >/dev/null") == 2);
  CHECK(shell_status(exe + " ainfty-growth --p 3 --beta-list 0.5,0.75,0.875 --no-timestamp --out " +
                     out.string()) == 0);
  CHECK(data_lines(slurp(out)).size() == 4);
}
