#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dicke/dicke.hpp"

namespace {

int run(const std::string& command, const std::string& config_path, const dicke::cli::Overrides& overrides) {
  using namespace dicke;
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read config '" << config_path << "'\n";
    return cli::kIoError;
  }
  std::stringstream text;
  text << in.rdbuf();

  return cli::guarded(
      [&]() -> int {
        config::RunConfig cfg = config::parse_text(text.str());
        cli::apply_overrides(cfg, overrides);
        if (command == "derive") return cli::cmd_derive(cfg, std::cout, std::cerr);
        if (command == "meanfield") return cli::cmd_meanfield(cfg, std::cout, std::cerr);
        if (command == "ed") return cli::cmd_ed(cfg, std::cout, std::cerr);
        if (command == "sweep") return cli::cmd_sweep(cfg, std::cout, std::cerr);
        if (command == "ed-sweep") return cli::cmd_ed_sweep(cfg, std::cout, std::cerr);
        return cli::cmd_fit(cfg, std::cout, std::cerr);
      },
      std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states of the generalized Dicke model for two-component condensates in a cavity"};
  app.require_subcommand(1);

  std::string config_path;
  dicke::cli::Overrides o;
  std::vector<double> window;

  auto add_common = [&](CLI::App* sub, bool sweeps) {
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option_function<std::string>("--out", [&](const std::string& v) { o.out = v; }, "output file");
    sub->add_option_function<std::string>("--format", [&](const std::string& v) { o.format = v; },
                                          "csv, json (text for scalar reports)")
        ->check(CLI::IsMember({"csv", "json", "text"}));
    if (!sweeps) return;
    sub->add_option_function<double>("--from", [&](double v) { o.from = v; }, "sweep start");
    sub->add_option_function<double>("--to", [&](double v) { o.to = v; }, "sweep end");
    sub->add_option_function<int>("--steps", [&](int v) { o.steps = v; }, "number of grid points");
    sub->add_option_function<std::string>("--column", [&](const std::string& v) { o.column = v; },
                                          "column for crossover or fit");
    sub->add_option("--window", window, "fit window lo,hi (distance from the critical point)")
        ->expected(2)
        ->delimiter(',');
    sub->add_option_function<std::string>("--variable", [&](const std::string& v) { o.variable = v; },
                                          "swept model parameter (q or lambda)");
  };

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"derive", "couplings, critical point and two-mode validity from physical inputs"},
      {"meanfield", "closed-form large-N ground state"},
      {"ed", "exact diagonalization at finite N"},
      {"sweep", "mean-field sweep over rho12 with transition summary"},
      {"ed-sweep", "exact-diagonalization sweep over q or lambda"},
      {"fit", "onset exponent fit on a mean-field sweep"}};
  for (const auto& [name, help] : commands) {
    const bool sweeps = name == "sweep" || name == "ed-sweep" || name == "fit";
    add_common(app.add_subcommand(name, help), sweeps);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : dicke::cli::kConfigError;
  }
  if (window.size() == 2) o.window = dicke::sweep::FitWindow{window[0], window[1]};

  const std::string command = app.get_subcommands().front()->get_name();
  return run(command, config_path, o);
}
