#pragma once

// CSV and JSON writers for spectra, correlator tables, series and pair
// waves; RampSpec serialization as flat key = value text and JSON.

#include <iosfwd>
#include <map>
#include <string>

#include "json.hpp"
#include "kzk/bdg.hpp"
#include "kzk/correlators.hpp"
#include "kzk/observables.hpp"
#include "kzk/pairwave.hpp"

namespace kzk {

/// Columns k, p_k, phi_k.
void write_spectrum_csv(std::ostream& os, const ModeSpectrum& spectrum);
/// Columns R, N_R, re_Delta_R, im_Delta_R, abs_Delta_R after a '#' line
/// recording method and (A, B).
void write_correlators_csv(std::ostream& os, const CorrelatorTable& table);
/// Columns L, value, log10_value.
void write_series_csv(std::ostream& os, const DistributionSeries& series);
/// Columns n, re_Z, im_Z, abs_Z, n_over_xi, scaled_abs_Z (|Z| xi / 2 sqrt(pi)).
void write_pairwave_csv(std::ostream& os, const PairWave& wave);

nlohmann::json to_json(const RampSpec& ramp);
RampSpec ramp_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DistributionSeries& series);

/// Flat "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> parse_key_values(std::istream& is);
std::string to_key_values(const RampSpec& ramp);
RampSpec ramp_from_key_values(const std::map<std::string, std::string>& kv);

std::string to_string(RampKind kind);
std::string to_string(CorrelatorMethod method);

}  // namespace kzk
