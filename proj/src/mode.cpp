#include "fastwdm/mode.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fastwdm/error.hpp"
#include "fastwdm/json_util.hpp"

namespace fastwdm {

namespace jsonutil {

void require_keys_subset(const json& object, std::initializer_list<std::string_view> allowed,
                         std::string_view where) {
  if (!object.is_object())
    throw Error(ErrorCode::ConfigError, std::string(where) + ": expected an object");
  for (const auto& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw Error(ErrorCode::ConfigError, std::string(where) + ": unknown field '" + key + "'");
  }
}

const json& required(const json& object, std::string_view key, std::string_view where) {
  auto it = object.find(std::string(key));
  if (it == object.end())
    throw Error(ErrorCode::ConfigError, std::string(where) + ": missing field '" + std::string(key) + "'");
  return *it;
}

double number(const json& object, std::string_view key, std::string_view where) {
  const json& v = required(object, key, where);
  if (!v.is_number())
    throw Error(ErrorCode::ConfigError, std::string(where) + "." + std::string(key) + " must be a number");
  return v.get<double>();
}

double number_or(const json& object, std::string_view key, double fallback, std::string_view where) {
  if (!object.contains(std::string(key))) return fallback;
  return number(object, key, where);
}

std::string string(const json& object, std::string_view key, std::string_view where) {
  const json& v = required(object, key, where);
  if (!v.is_string())
    throw Error(ErrorCode::ConfigError, std::string(where) + "." + std::string(key) + " must be a string");
  return v.get<std::string>();
}

}  // namespace jsonutil

void TransmissionMode::validate() const {
  if (id.empty()) throw Error(ErrorCode::ConfigError, "mode id is empty");
  if (!(line_rate_gbps > 0.0)) throw Error(ErrorCode::ConfigError, "mode " + id + ": line_rate must be > 0");
  if (!(baud_gbd > 0.0)) throw Error(ErrorCode::ConfigError, "mode " + id + ": baud must be > 0");
  if (!std::isfinite(required_gsnr.db()))
    throw Error(ErrorCode::ConfigError, "mode " + id + ": required_gsnr must be finite");
}

const TransmissionMode* TrxCharacteristics::find(std::string_view mode_id) const noexcept {
  for (const auto& m : modes) {
    if (m.id == mode_id) return &m;
  }
  return nullptr;
}

const TransmissionMode& TrxCharacteristics::mode(std::string_view mode_id) const {
  if (const auto* m = find(mode_id)) return *m;
  throw Error(ErrorCode::UnknownMode, "vendor " + vendor + " has no mode '" + std::string(mode_id) + "'");
}

bool TrxCharacteristics::in_range(double thz) const noexcept {
  return thz >= freq_min_thz - 1e-9 && thz <= freq_max_thz + 1e-9;
}

bool TrxCharacteristics::on_grid(double thz) const noexcept {
  const double steps = (thz - kItuAnchorThz) * 1000.0 / grid_ghz;
  return std::abs(steps - std::round(steps)) < 1e-6;
}

double TrxCharacteristics::channel_frequency(int index) const {
  if (index < 1) throw Error(ErrorCode::FrequencyOutOfRange, "channel index starts at 1");
  const double f = freq_min_thz + (index - 1) * grid_ghz / 1000.0;
  if (!in_range(f))
    throw Error(ErrorCode::FrequencyOutOfRange,
                "channel " + std::to_string(index) + " is outside vendor " + vendor + " range");
  return std::round(f * 1e4) / 1e4;
}

void TrxCharacteristics::validate() const {
  if (!(freq_min_thz < freq_max_thz))
    throw Error(ErrorCode::ConfigError, "vendor " + vendor + ": freq_range min must be < max");
  if (!(grid_ghz > 0.0)) throw Error(ErrorCode::ConfigError, "vendor " + vendor + ": grid must be > 0");
  std::set<std::string> ids;
  for (const auto& m : modes) {
    m.validate();
    if (!ids.insert(m.id).second)
      throw Error(ErrorCode::ConfigError, "vendor " + vendor + ": duplicate mode id " + m.id);
  }
  for (const auto& q : modes) {
    if (q.modulation != Modulation::QPSK) continue;
    for (const auto& h : modes) {
      if (h.modulation == Modulation::QAM16 && h.baud_gbd == q.baud_gbd && !(q.required_gsnr < h.required_gsnr))
        throw Error(ErrorCode::ConfigError,
                    "vendor " + vendor + ": QPSK mode " + q.id + " must need less GSNR than " + h.id);
    }
  }
}

nlohmann::json to_json(const TransmissionMode& m) {
  return {
      {"id", m.id},
      {"modulation", std::string(to_string(m.modulation))},
      {"baud_gbd", m.baud_gbd},
      {"line_rate_gbps", m.line_rate_gbps},
      {"snr_trx_db", m.snr_trx.db()},
      {"required_gsnr_db", m.required_gsnr.db()},
  };
}

TransmissionMode mode_from_json(const nlohmann::json& j) {
  using namespace jsonutil;
  constexpr std::string_view where = "mode";
  require_keys_subset(j, {"id", "modulation", "baud_gbd", "line_rate_gbps", "snr_trx_db", "required_gsnr_db"}, where);
  TransmissionMode m;
  m.id = string(j, "id", where);
  try {
    m.modulation = modulation_from_string(string(j, "modulation", where));
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  m.baud_gbd = number(j, "baud_gbd", where);
  m.line_rate_gbps = number(j, "line_rate_gbps", where);
  m.snr_trx = GsnrDb(number(j, "snr_trx_db", where));
  m.required_gsnr = GsnrDb(number(j, "required_gsnr_db", where));
  m.validate();
  return m;
}

nlohmann::json to_json(const TrxCharacteristics& c) {
  nlohmann::json modes = nlohmann::json::array();
  for (const auto& m : c.modes) modes.push_back(to_json(m));
  return {
      {"schema", kCharacteristicsSchema},
      {"vendor", c.vendor},
      {"form_factor", c.form_factor},
      {"freq_range_thz", {c.freq_min_thz, c.freq_max_thz}},
      {"grid_ghz", c.grid_ghz},
      {"modes", modes},
  };
}

TrxCharacteristics characteristics_from_json(const nlohmann::json& j) {
  using namespace jsonutil;
  constexpr std::string_view where = "characteristics";
  require_keys_subset(j, {"schema", "vendor", "form_factor", "freq_range_thz", "grid_ghz", "modes"}, where);
  if (j.contains("schema") && j.at("schema") != kCharacteristicsSchema)
    throw Error(ErrorCode::ConfigError, "unsupported characteristics schema " + j.at("schema").dump());
  TrxCharacteristics c;
  c.vendor = string(j, "vendor", where);
  c.form_factor = j.contains("form_factor") ? string(j, "form_factor", where) : std::string("unknown");
  const auto& range = required(j, "freq_range_thz", where);
  if (!range.is_array() || range.size() != 2 || !range[0].is_number() || !range[1].is_number())
    throw Error(ErrorCode::ConfigError, "characteristics.freq_range_thz must be [min, max]");
  c.freq_min_thz = range[0].get<double>();
  c.freq_max_thz = range[1].get<double>();
  c.grid_ghz = number(j, "grid_ghz", where);
  const auto& modes = required(j, "modes", where);
  if (!modes.is_array()) throw Error(ErrorCode::ConfigError, "characteristics.modes must be an array");
  for (const auto& m : modes) c.modes.push_back(mode_from_json(m));
  c.validate();
  return c;
}

GsnrDb pair_back_to_back(GsnrDb a, GsnrDb b) {
  const double inverse = 0.5 * (a.inverse_linear() + b.inverse_linear());
  if (inverse == 0.0) return GsnrDb::noise_free();
  return GsnrDb(-linear_to_db(inverse));
}

std::vector<TransmissionMode> common_modes(const TrxCharacteristics& a, const TrxCharacteristics& b) {
  std::vector<TransmissionMode> out;
  for (const auto& ma : a.modes) {
    const auto* mb = b.find(ma.id);
    if (!mb || mb->modulation != ma.modulation || mb->baud_gbd != ma.baud_gbd ||
        mb->line_rate_gbps != ma.line_rate_gbps)
      continue;
    TransmissionMode m = ma;
    m.snr_trx = pair_back_to_back(ma.snr_trx, mb->snr_trx);
    m.required_gsnr = std::max(ma.required_gsnr, mb->required_gsnr);
    out.push_back(std::move(m));
  }
  return out;
}

TrxCharacteristics reference_catalog(std::string vendor, double freq_min_thz, double freq_max_thz,
                                     double grid_ghz) {
  TrxCharacteristics c;
  c.vendor = std::move(vendor);
  c.form_factor = "CFP2-DCO";
  c.freq_min_thz = freq_min_thz;
  c.freq_max_thz = freq_max_thz;
  c.grid_ghz = grid_ghz;
  c.modes = {
      {"400G-DP16QAM-64GBd", Modulation::QAM16, 64.0, 400.0, GsnrDb(17.51), GsnrDb(10.3)},
      {"200G-DPQPSK-64GBd", Modulation::QPSK, 64.0, 200.0, GsnrDb(17.1), GsnrDb(5.5)},
  };
  return c;
}

}  // namespace fastwdm
