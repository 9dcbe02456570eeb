#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dyadsq/cli.hpp"

namespace cli = dyadsq::cli;

int main(int argc, char** argv) {
  CLI::App app{"Dyadic square function experiments; writes CSV reports."};
  app.set_version_flag("--version", cli::kToolVersion);

  cli::RunConfig c;
  app.add_option("command", c.command, "characteristics | square-function | scaling | divergence | "
                                       "extension-check | ainfty-growth")
      ->required();
  app.add_option("--family", c.family, "lerner, alternating, power_pair_i, power_pair_ii, "
                                       "lai_treil, direct_sum, direct_sum_naive");
  app.add_option("--p", c.p, "Exponent p > 1");
  app.add_option("--beta", c.beta, "Power parameter in (0, 1)");
  app.add_option("--r", c.r, "Log exponent for lai_treil, in (1/p, 1/2)");
  app.add_option("--beta-grid", c.beta_grid, "Dyadic grid j=a..b meaning beta_j = 1 - 2^-j");
  app.add_option("--beta-list", c.beta_list, "Explicit increasing beta values")->delimiter(',');
  app.add_option("--depth", c.depth, "Dyadic depth");
  app.add_option("--n-max", c.n_max, "Shells available to the spine series");
  app.add_option("--span", c.span, "Scan intervals inside [-span, span] (default 4)");
  app.add_option("--grid-log2", c.grid_log2, "Scan grid step 2^-g (default 12)");
  app.add_option("--k-max", c.k_max, "Last spine index (lai_treil) or norm blocks (direct_sum)");
  app.add_option("--out", c.out, "Output CSV path");
  bool no_timestamp = false;
  app.add_flag("--no-timestamp", no_timestamp, "Omit the timestamp metadata line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "error,usage," << cli::kUsage << ',' << e.what() << '\n';
    return cli::kUsage;
  }
  c.timestamp = !no_timestamp;
  return cli::run(c, std::cerr);
}
