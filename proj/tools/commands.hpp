#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "output.hpp"

namespace kzk::cli {

enum class SpectrumMethod { analytic, ode };
enum class Evaluator { pfaffian, dephased_det };

struct RunConfig {
  std::string command;
  std::vector<double> tau_q;   // empty selects the per-command default
  std::vector<double> wait_w;  // dephasing sweep
  std::vector<double> epsilon; // sudden quenches, g_initial = 1 + epsilon
  double g_w = 0.5;
  SpectrumMethod method = SpectrumMethod::analytic;
  Evaluator evaluator = Evaluator::pfaffian;
  int k_points = 0;  // 0: sized from tau_q
  int r_max = 0;     // 0: ceil(4 xi_hat)
  int l_max = 0;     // 0: ceil(4 xi_hat)
  std::string out = "kzk-out";
  Format format = Format::csv;
  bool inject_corruption = false;

  void validate() const;
  nlohmann::json to_json() const;
};

std::vector<double> default_taus(const std::string& command);

void cmd_fig1(const RunConfig& cfg, Sink& sink);
void cmd_fig2(const RunConfig& cfg, Sink& sink);
void cmd_fig3(const RunConfig& cfg, Sink& sink);
void cmd_fig4(const RunConfig& cfg, Sink& sink);
void cmd_dephasing(const RunConfig& cfg, Sink& sink);

/// Runs the oracle diff and invariant checks; returns the report. The
/// "ok" field is false when any check fails.
nlohmann::json cmd_verify(const RunConfig& cfg);

}  // namespace kzk::cli
