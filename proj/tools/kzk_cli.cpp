// kzk: figure data, sweeps and self-checks for kinks after a Kibble-Zurek
// quench of the transverse-field Ising chain.
//
// Exit codes: 0 ok, 1 invariant violation or failed check, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "kzk/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace kzk::cli;
  RunConfig cfg;

  CLI::App app{"Kink statistics after a linear quench of the quantum Ising chain"};
  app.set_config("--config", "", "Read options from a key = value file (keys are long option names)");
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(
      "Environment:\n  KZK_THREADS  worker threads (default: hardware concurrency)\n\n"
      "Exit codes: 0 ok, 1 invariant violation, 2 usage error.");

  app.add_option("--tau-q", cfg.tau_q, "Quench times (default per command: 4 16 64; fig3: 16 64 256; dephasing: 16)")
      ->delimiter(',');
  app.add_option("--wait-w", cfg.wait_w, "Waiting coefficients w for the dephasing sweep (default 0 2 4 6 8 10)")
      ->delimiter(',');
  app.add_option("--g-w", cfg.g_w, "Plateau field of waiting ramps")->capture_default_str();
  app.add_option("--epsilon", cfg.epsilon, "fig4: g_initial = 1 + epsilon (default 0.05 -0.05 0.1 -0.1)")
      ->delimiter(',');
  std::string method = "analytic";
  app.add_option("--method", method, "Mode spectrum: analytic (Landau-Zener) or ode (exact mode dynamics)")
      ->check(CLI::IsMember({"analytic", "ode"}))
      ->capture_default_str();
  std::string evaluator = "pfaffian";
  app.add_option("--evaluator", evaluator, "E_L of dephased tables: pfaffian or dephased-det")
      ->check(CLI::IsMember({"pfaffian", "dephased-det"}))
      ->capture_default_str();
  app.add_option("--k-points", cfg.k_points, "Momentum grid size (0: sized from tau_q)")->capture_default_str();
  app.add_option("--r-max", cfg.r_max, "Largest separation R (0: ceil(4 xi_hat))")->capture_default_str();
  app.add_option("--l-max", cfg.l_max, "Largest domain length L (0: ceil(4 xi_hat))")->capture_default_str();
  app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
  std::string format = "csv";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  app.add_subcommand("fig1", "Connected two-kink correlator vs R/xi_hat with the dephased curve");
  app.add_subcommand("fig2", "Domain sizes P_L and emptiness E_L with asymptotes and the mean check");
  app.add_subcommand("fig3", "Kink pair wave function after Kibble-Zurek ramps");
  app.add_subcommand("fig4", "Kink pair wave function after sudden quenches near the critical point");
  app.add_subcommand("dephasing", "Waiting-ramp sweep: E_L decay rate crossover and ramp shapes");
  auto* verify = app.add_subcommand("verify", "Oracle diff and invariant suite with a JSON report");
  verify->add_flag("--inject-corruption", cfg.inject_corruption,
                   "Corrupt the correlator tables before validation (negative test)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.method = method == "ode" ? SpectrumMethod::ode : SpectrumMethod::analytic;
  cfg.evaluator = evaluator == "dephased-det" ? Evaluator::dephased_det : Evaluator::pfaffian;
  cfg.format = format == "json" ? Format::json : Format::csv;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "kzk: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (cfg.command == "verify") {
      const nlohmann::json report = cmd_verify(cfg);
      std::filesystem::create_directories(cfg.out);
      std::ofstream(std::filesystem::path(cfg.out) / "verify.json") << report.dump(1) << '\n';
      std::cout << report.dump(1) << '\n';
      if (!report["ok"].get<bool>()) {
        for (const auto& c : report["checks"])
          if (!c["ok"].get<bool>())
            std::cerr << "kzk verify: check " << c["name"].get<std::string>() << " failed"
                      << (c.contains("invariant") ? " (" + c["invariant"].get<std::string>() + ")" : "")
                      << '\n';
        return kExitViolation;
      }
      return kExitOk;
    }
    Sink sink(cfg.out, cfg.format);
    if (cfg.command == "fig1") cmd_fig1(cfg, sink);
    if (cfg.command == "fig2") cmd_fig2(cfg, sink);
    if (cfg.command == "fig3") cmd_fig3(cfg, sink);
    if (cfg.command == "fig4") cmd_fig4(cfg, sink);
    if (cfg.command == "dephasing") cmd_dephasing(cfg, sink);
    for (const auto& path : sink.finish(cfg.command, cfg.to_json())) std::cout << path.string() << '\n';
  } catch (const kzk::InvariantViolation& e) {
    std::cerr << "kzk: invariant violation: " << e.what() << '\n';
    return kExitViolation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "kzk: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "kzk: " << e.what() << '\n';
    return kExitViolation;
  }
  return kExitOk;
}
