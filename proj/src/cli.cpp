#include "dyadsq/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <regex>
#include <sstream>

#include "dyadsq/characteristics.hpp"
#include "dyadsq/experiments.hpp"
#include "dyadsq/families.hpp"
#include "dyadsq/squarefn.hpp"

namespace dyadsq::cli {

namespace {

bool needs_beta(const std::string& family) {
  return family == "lerner" || family == "alternating" || family == "power_pair_i" ||
         family == "power_pair_ii";
}

bool is_member(const std::string& s, const std::vector<std::string>& set) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

FamilyInstance make_family(const RunConfig& c) {
  const double p = *c.p;
  const std::string& f = c.family;
  if (f == "lerner") return lerner_family(p, *c.beta);
  if (f == "alternating") return alternating_family(p, *c.beta);
  if (f == "power_pair_i") return power_pair(p, *c.beta, PowerPairVariant::i);
  if (f == "power_pair_ii") return power_pair(p, *c.beta, PowerPairVariant::ii);
  if (f == "lai_treil") return lai_treil_family(p, c.r.value_or(lai_treil_default_r(p)));
  if (f == "direct_sum") return direct_sum_family(p, false);
  if (f == "direct_sum_naive") return direct_sum_family(p, true);
  throw UsageError("unknown family '" + f + "'");
}

std::vector<double> betas_of(const RunConfig& c) {
  require(c.beta_grid.has_value() != !c.beta_list.empty(),
          "give exactly one of --beta-grid or --beta-list");
  if (c.beta_grid) return parse_beta_grid(*c.beta_grid);
  return c.beta_list;
}

double grid_step_of(const RunConfig& c) { return std::ldexp(1.0, -c.grid_log2.value_or(12)); }

// Everything that can be checked without computing, in one place.
void validate(const RunConfig& c) {
  require(!c.command.empty(), "missing command");
  require(is_member(c.command, commands()), "unknown command '" + c.command + "'");
  require(c.p.has_value(), "--p is required");
  if (!std::isfinite(*c.p) || !(*c.p > 1.0)) throw DomainError("--p must be a finite number > 1");
  if (c.beta && !(*c.beta > 0.0 && *c.beta < 1.0)) throw DomainError("--beta must lie in (0, 1)");
  if (c.depth && (*c.depth < 0 || *c.depth > 100000)) throw DomainError("--depth out of range");
  if (c.n_max && *c.n_max < 1) throw DomainError("--n-max must be positive");

  const std::string& cmd = c.command;
  if (cmd == "scaling" || cmd == "ainfty-growth") {
    if (cmd == "scaling") {
      require(!c.family.empty(), "--family is required");
      require(c.family == "lerner" || c.family == "alternating",
              "scaling takes --family lerner or alternating");
    }
    const auto betas = betas_of(c);
    for (std::size_t i = 0; i < betas.size(); ++i) {
      if (!(betas[i] > 0.0 && betas[i] < 1.0)) throw DomainError("grid beta outside (0, 1)");
      if (i > 0 && !(betas[i] > betas[i - 1])) throw DomainError("beta grid must be increasing");
    }
    if (c.n_max && *c.n_max < 32.0 / (1.0 - betas.back())) {
      throw DomainError("--n-max must be at least 32/(1 - beta_max)");
    }
    if (cmd == "scaling") {
      RunConfig probe = c;
      probe.beta = betas.front();
      make_family(probe);
    }
    return;
  }
  require(!c.family.empty(), "--family is required");
  require(is_member(c.family, family_names()), "unknown family '" + c.family + "'");
  if (needs_beta(c.family)) require(c.beta.has_value(), "--beta is required for " + c.family);
  if (cmd == "characteristics") require(c.depth.has_value(), "--depth is required");
  if (cmd == "divergence") {
    require(c.family == "lai_treil" || c.family == "direct_sum",
            "divergence takes --family lai_treil or direct_sum");
    if (c.k_max) {
      const int lo = c.family == "lai_treil" ? 100 : 1;
      if (*c.k_max < lo || *c.k_max > 1000000) {
        throw DomainError("--k-max must lie in [" + std::to_string(lo) + ", 1000000]");
      }
    }
  }
  if (cmd == "extension-check") {
    const int g = c.grid_log2.value_or(12);
    if (g < 1 || g > 16) throw DomainError("--grid-log2 must lie in [1, 16]");
    const double span = c.span.value_or(4.0);
    if (!(span > 0.0) || span > 64.0 || std::fmod(span, grid_step_of(c)) != 0.0) {
      throw DomainError("--span must be in (0, 64] and a multiple of the grid step");
    }
  }
  make_family(c);
}

std::string fmt(double v) { return format_number(v); }
std::string fmt(int v) { return std::to_string(v); }

std::vector<std::string> fit_row(const std::string& label, const FitResult& f, double predicted) {
  return {"#fit", label, fmt(f.slope), fmt(f.intercept), fmt(f.max_residual), fmt(f.points),
          fmt(predicted)};
}

void base_metadata(CsvTable& t, const RunConfig& c) {
  t.metadata.emplace_back("tool", kToolVersion);
  t.metadata.emplace_back("command", c.command);
  if (!c.family.empty()) t.metadata.emplace_back("family", c.family);
  t.metadata.emplace_back("p", fmt(*c.p));
  if (c.beta) t.metadata.emplace_back("beta", fmt(*c.beta));
  if (c.r) t.metadata.emplace_back("r", fmt(*c.r));
  if (c.beta_grid) t.metadata.emplace_back("beta_grid", *c.beta_grid);
  if (c.depth) t.metadata.emplace_back("depth", fmt(*c.depth));
  if (c.n_max) t.metadata.emplace_back("n_max", fmt(*c.n_max));
}

CsvTable characteristics_table(const RunConfig& c) {
  const FamilyInstance fam = make_family(c);
  const int depth = *c.depth;
  CsvTable t;
  base_metadata(t, c);
  t.columns = {"family", "p", "beta", "r", "depth", "ap_dyadic", "ap_dyadic_argmax", "ap_spine",
               "ainfty_w", "ainfty_sigma", "ainfty_mode", "ainfty_depth", "fnorm_p",
               "fnorm_p_predicted"};
  const CharacteristicEstimate ap = dyadic_joint_ap(fam.w, fam.sigma, fam.p, depth);
  const CharacteristicEstimate sp = spine_joint_ap(fam.w, fam.sigma, fam.p, depth);

  const bool radial = fam.w.radial() && fam.sigma.radial();
  const int a_depth = radial ? depth : std::min(depth, kMaxFullDepth);
  const AinftyMode mode = radial ? AinftyMode::radial : AinftyMode::full_tree;
  if (a_depth < depth) {
    t.metadata.emplace_back("note", "A_infinity for non-radial weights capped at full-tree depth " +
                                        std::to_string(kMaxFullDepth));
  }
  double aw = kNotApplicable, as = kNotApplicable;
  if (a_depth >= 1) {
    aw = dyadic_ainfty(fam.w, a_depth, mode).value;
    as = dyadic_ainfty(fam.sigma, a_depth, mode).value;
  }
  // the glued family's mass is a slowly converging block series; use its closed form
  const double fnorm_p = fam.name.rfind("direct_sum", 0) == 0
                             ? kNotApplicable
                             : fam.f_power_sigma.integrate(0.0, 1.0);
  t.rows.push_back({fam.name, fmt(fam.p), fmt(fam.beta), fmt(fam.r), fmt(depth), fmt(ap.value),
                    ap.argmax, fmt(sp.value), fmt(aw), fmt(as),
                    radial ? "radial" : "full_tree", fmt(a_depth), fmt(fnorm_p),
                    fmt(fam.predicted.fnorm_p)});
  return t;
}

CsvTable square_function_table(const RunConfig& c) {
  const FamilyInstance fam = make_family(c);
  SnormOptions so;
  so.mode = SnormMode::spine;
  so.n_max = c.n_max.value_or(std::isnan(fam.beta) ? 4096 : default_n_max(fam.beta));
  const SnormResult s = weighted_snorm(fam.sigma_f, fam.w, fam.p, so);
  const SpineProfile prof = spine_profile(fam.sigma_f, s.terms);

  CsvTable t;
  base_metadata(t, c);
  t.metadata.emplace_back("mode", "spine");
  t.columns = {"n", "spine_value", "w_shell_mass", "term"};
  for (int n = 1; n <= s.terms; ++n) {
    const WideReal v = prof.spine_value(n);
    const WideReal wm = ldexp(fam.w.shell_mean(n), -n);
    const WideReal term = pow(prof.square_sum[n], fam.p / 2.0) * wm;
    t.rows.push_back({fmt(n), fmt(v.to_double()), fmt(wm.to_double()), fmt(term.to_double())});
  }
  t.footers.push_back({"#snorm", "spine", fmt(s.value_p), fmt(s.value), fmt(s.terms),
                       fmt(s.tail_bound)});
  if (c.depth) {
    SnormOptions fo;
    fo.mode = SnormMode::full;
    fo.depth = *c.depth;
    const SnormResult f = weighted_snorm(fam.sigma_f, fam.w, fam.p, fo);
    t.footers.push_back({"#snorm", "full", fmt(f.value_p), fmt(f.value), fmt(f.terms), ""});
  }
  return t;
}

CsvTable scaling_table(const RunConfig& c) {
  const auto betas = betas_of(c);
  ScalingOptions o;
  if (c.n_max) o.n_max = *c.n_max;
  const ScalingFamily fam =
      c.family == "lerner" ? ScalingFamily::lerner : ScalingFamily::alternating;
  const ScalingReport rep = scaling_experiment(fam, *c.p, betas, o);

  CsvTable t;
  base_metadata(t, c);
  t.metadata.emplace_back("n_max_rule", c.n_max ? "fixed" : "max(4096, 128/(1-beta))");
  t.metadata.emplace_back("ainfty_depth_rule", "ceil(16/(1-beta)), radial");
  t.metadata.emplace_back("fit_x", "1/(1-beta)");
  t.metadata.emplace_back("fit_window", "all rows except the " + std::to_string(rep.fit_skip) +
                                            " smallest beta");
  t.metadata.emplace_back("fit_columns", "label,slope,intercept,max_residual,points,predicted");
  t.columns = {"beta", "fnorm", "snorm", "ap_joint", "ainfty_w", "ainfty_sigma", "ratio"};
  for (const auto& r : rep.rows) {
    t.rows.push_back({fmt(r.beta), fmt(r.fnorm), fmt(r.snorm), fmt(r.ap_joint), fmt(r.ainfty_w),
                      fmt(r.ainfty_sigma), fmt(r.ratio)});
  }
  t.footers.push_back(fit_row("snorm", rep.snorm_fit, rep.predicted_snorm_exponent));
  t.footers.push_back(fit_row("ratio", rep.ratio_fit, rep.predicted_ratio_exponent));
  return t;
}

CsvTable divergence_table(const RunConfig& c) {
  CsvTable t;
  base_metadata(t, c);
  t.columns = {"k", "partial_mass", "paper_bound", "ratio"};
  if (c.family == "lai_treil") {
    const double r = c.r.value_or(lai_treil_default_r(*c.p));
    const LaiTreilDivergence d = lai_treil_divergence(*c.p, r, c.k_max.value_or(1000000));
    if (!c.r) t.metadata.emplace_back("r", fmt(r));
    t.metadata.emplace_back("k_max", fmt(d.k_max));
    t.metadata.emplace_back("partial_mass", "(spine square sum on I_k)^(p/2) * w(I_k)");
    t.metadata.emplace_back("c1", fmt(d.c1));
    t.metadata.emplace_back("c2_with_ln2", fmt(d.c2));
    t.metadata.emplace_back("rows", "log-spaced sample; checks below cover every k");
    t.metadata.emplace_back("violations", fmt(d.violations));
    t.metadata.emplace_back("min_ratio", fmt(d.min_ratio));
    t.metadata.emplace_back("nondecreasing_in_window", d.nondecreasing ? "true" : "false");
    t.metadata.emplace_back("min_inner_difference_ratio", fmt(d.min_difference_ratio));
    t.metadata.emplace_back("min_shell_difference_ratio", fmt(d.min_shell_difference_ratio));
    t.metadata.emplace_back("fit_window", fmt(d.fit_lo) + ".." + fmt(d.fit_hi));
    t.metadata.emplace_back("fit_columns", "label,slope,intercept,max_residual,points,predicted");
    for (const auto& row : d.rows) {
      t.rows.push_back({fmt(row.k), fmt(row.partial), fmt(row.bound), fmt(row.ratio)});
    }
    t.footers.push_back(fit_row("log_partial_mass_vs_log_k", d.growth_fit, d.predicted_exponent));
    return t;
  }
  const DirectSumDivergence d = direct_sum_divergence(*c.p, c.k_max.value_or(10000), 400);
  t.metadata.emplace_back("k", "number of odd blocks K");
  t.metadata.emplace_back("partial_mass", "sum of block square norms^p over the first K odd blocks");
  t.metadata.emplace_back("paper_bound", "sum_{j<K} 1/(2j+1), up to a constant");
  t.metadata.emplace_back("fnorm_p_blocks", fmt(d.norm_blocks));
  t.metadata.emplace_back("fnorm_p_partial", fmt(d.norm_limit - d.norm_tail));
  t.metadata.emplace_back("fnorm_p_limit", fmt(d.norm_limit));
  t.metadata.emplace_back("fnorm_p_tail", fmt(d.norm_tail));
  t.metadata.emplace_back("fit_window", "ln K for K = " + fmt(d.fit_lo) + ".." + fmt(d.square_blocks));
  t.metadata.emplace_back("fit_columns", "label,slope,intercept,max_residual,points,predicted");
  for (const auto& row : d.square_rows) {
    t.rows.push_back({fmt(row.k), fmt(row.partial), fmt(row.bound), fmt(row.ratio)});
  }
  t.footers.push_back(fit_row("partial_mass_affine_in_ln_k", d.log_fit, kNotApplicable));
  return t;
}

CsvTable extension_table(const RunConfig& c) {
  const FamilyInstance fam = make_family(c);
  const double span = c.span.value_or(4.0);
  const double h = grid_step_of(c);
  const ExtensionReport rep = extension_experiment(fam, span, h);
  CsvTable t;
  base_metadata(t, c);
  t.metadata.emplace_back("grid_step", fmt(h));
  t.columns = {"span", "scan_max", "argmax"};
  t.rows.push_back({fmt(rep.scan_span.span), fmt(rep.scan_span.value), rep.scan_span.argmax});
  t.rows.push_back({fmt(rep.scan_double_span.span), fmt(rep.scan_double_span.value),
                    rep.scan_double_span.argmax});
  t.footers.push_back({"#summary", "span_ratio", fmt(rep.ratio)});
  t.footers.push_back({"#summary", "unit_dyadic", fmt(rep.unit_dyadic.value), rep.unit_dyadic.argmax});
  t.footers.push_back({"#summary", "invariant_failures", fmt(rep.invariant_failures),
                       fmt(rep.invariant_samples)});
  return t;
}

CsvTable ainfty_table(const RunConfig& c) {
  const AinftyReport rep = ainfty_growth_experiment(*c.p, betas_of(c));
  CsvTable t;
  base_metadata(t, c);
  t.metadata.emplace_back("weights", "w = x^-beta, sigma = x^(beta/(p-1))");
  t.metadata.emplace_back("depth_rule", "ceil(16/(1-beta)), radial");
  t.metadata.emplace_back("fit_window", "all rows except the " + std::to_string(rep.fit_skip) +
                                            " smallest beta");
  t.metadata.emplace_back("fit_columns", "label,slope,intercept,max_residual,points,predicted");
  t.columns = {"beta", "depth", "ainfty_w", "ainfty_sigma"};
  for (const auto& r : rep.rows) {
    t.rows.push_back({fmt(r.beta), fmt(r.depth), fmt(r.ainfty_w), fmt(r.ainfty_sigma)});
  }
  t.footers.push_back(fit_row("ainfty_w", rep.w_fit, 1.0));
  t.footers.push_back({"#summary", "sigma_max_over_min", fmt(rep.sigma_spread)});
  return t;
}

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void join(std::ostringstream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << quote(cells[i]);
  }
  os << '\n';
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = {"characteristics", "square-function", "scaling",
                                             "divergence",      "extension-check", "ainfty-growth"};
  return c;
}

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> f = {"lerner",    "alternating", "power_pair_i",
                                             "power_pair_ii", "lai_treil", "direct_sum",
                                             "direct_sum_naive"};
  return f;
}

std::vector<double> parse_beta_grid(const std::string& spec) {
  static const std::regex re(R"(j=(\d+)\.\.(\d+))");
  std::smatch m;
  if (!std::regex_match(spec, m, re)) throw UsageError("grid spec must look like j=a..b");
  return dyadic_beta_grid(std::stoi(m[1]), std::stoi(m[2]));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string render_csv(const CsvTable& t) {
  std::ostringstream os;
  for (const auto& [k, v] : t.metadata) os << "# " << k << '=' << v << '\n';
  join(os, t.columns);
  for (const auto& row : t.rows) join(os, row);
  for (const auto& row : t.footers) join(os, row);
  return os.str();
}

void emit_csv(const CsvTable& table, const std::string& path) {
  const std::string text = render_csv(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string output_path(const RunConfig& c) {
  if (!c.out.empty()) return c.out;
  const char* env = std::getenv(kOutputDirEnv);
  const std::filesystem::path dir = env && *env ? env : ".";
  std::string name = c.command;
  if (!c.family.empty()) name += "-" + c.family;
  return (dir / (name + ".csv")).string();
}

CsvTable build_table(const RunConfig& c) {
  validate(c);
  CsvTable t;
  if (c.command == "characteristics") t = characteristics_table(c);
  else if (c.command == "square-function") t = square_function_table(c);
  else if (c.command == "scaling") t = scaling_table(c);
  else if (c.command == "divergence") t = divergence_table(c);
  else if (c.command == "extension-check") t = extension_table(c);
  else t = ainfty_table(c);
  if (c.timestamp) t.metadata.emplace_back("timestamp", utc_now());
  return t;
}

int run(const RunConfig& config, std::ostream& err) {
  auto fail = [&](const char* kind, int status, const std::string& msg) {
    std::string flat = msg;
    std::replace(flat.begin(), flat.end(), '\n', ' ');
    err << "error," << kind << ',' << status << ',' << flat << '\n';
    return status;
  };
  try {
    const CsvTable t = build_table(config);
    emit_csv(t, output_path(config));
    return kOk;
  } catch (const UsageError& e) {
    return fail("usage", kUsage, e.what());
  } catch (const IoError& e) {
    return fail("io", kIoFailure, e.what());
  } catch (const TailNotCertifiedError& e) {
    return fail("not_certified", kNotCertified, e.what());
  } catch (const HypothesisError& e) {
    return fail("hypothesis", kHypothesisFailure, e.what());
  } catch (const DomainError& e) {
    return fail("invalid_parameter", kInvalidParameter, e.what());
  } catch (const NonIntegrableError& e) {
    return fail("invalid_parameter", kInvalidParameter, e.what());
  } catch (const std::exception& e) {
    return fail("numerical", kNumericalFailure, e.what());
  }
}

}  // namespace dyadsq::cli
