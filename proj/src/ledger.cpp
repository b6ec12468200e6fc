#include "fastwdm/ledger.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "fastwdm/error.hpp"
#include "fastwdm/json_util.hpp"

namespace fastwdm {

nlohmann::json db_to_json(double db) {
  if (std::isinf(db)) return db > 0 ? "+inf" : "-inf";
  return db;
}

double db_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j == "+inf") return std::numeric_limits<double>::infinity();
  if (j == "-inf") return -std::numeric_limits<double>::infinity();
  throw Error(ErrorCode::ParseError, "expected a dB value, got " + j.dump());
}

nlohmann::json to_json(const LinkGsnrRecord& r) {
  return {
      {"link_id", r.link_id},
      {"probe_mode_id", r.probe_mode_id},
      {"probe_modulation", std::string(to_string(r.probe_modulation))},
      {"ber", r.ber},
      {"raw_gsnr_db", db_to_json(r.raw_gsnr_db)},
      {"probe_snr_trx_db", db_to_json(r.probe_snr_trx_db)},
      {"line_gsnr_db", db_to_json(r.line_gsnr_db)},
      {"timestamp", r.timestamp},
      {"probe_freq_thz", r.probe_freq_thz},
      {"fallback", r.fallback},
  };
}

LinkGsnrRecord record_from_json(const nlohmann::json& j) {
  try {
    jsonutil::require_keys_subset(j, {"link_id", "probe_mode_id", "probe_modulation", "ber", "raw_gsnr_db",
                                      "probe_snr_trx_db", "line_gsnr_db", "timestamp", "probe_freq_thz", "fallback"},
                                  "record");
    LinkGsnrRecord r;
    r.link_id = j.at("link_id").get<std::string>();
    r.probe_mode_id = j.at("probe_mode_id").get<std::string>();
    r.probe_modulation = modulation_from_string(j.at("probe_modulation").get<std::string>());
    r.ber = j.at("ber").get<double>();
    r.raw_gsnr_db = db_from_json(j.at("raw_gsnr_db"));
    r.probe_snr_trx_db = db_from_json(j.at("probe_snr_trx_db"));
    r.line_gsnr_db = db_from_json(j.at("line_gsnr_db"));
    r.timestamp = j.at("timestamp").get<double>();
    r.probe_freq_thz = j.at("probe_freq_thz").get<double>();
    r.fallback = j.value("fallback", false);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad ledger record: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, "bad ledger record: " + e.detail());
  }
}

LinkLedger::LinkLedger(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(*path_);
  if (!in) return;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      records_.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::ParseError, path_->string() + " line " + std::to_string(n) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, path_->string() + " line " + std::to_string(n) + ": " + e.detail());
    }
  }
}

void LinkLedger::append(const LinkGsnrRecord& r) {
  if (path_) {
    std::ofstream out(*path_, std::ios::app);
    if (!out) throw Error(ErrorCode::ConfigError, "cannot append to ledger " + path_->string());
    out << to_json(r).dump() << '\n';
  }
  records_.push_back(r);
}

std::optional<LinkGsnrRecord> LinkLedger::latest(std::string_view link_id) const {
  for (auto it = records_.rbegin(); it != records_.rend(); ++it) {
    if (it->link_id == link_id) return *it;
  }
  return std::nullopt;
}

std::optional<LinkGsnrRecord> LinkLedger::fresh(std::string_view link_id, double now, double freshness_s) const {
  auto r = latest(link_id);
  if (r && now - r->timestamp < freshness_s) return r;
  return std::nullopt;
}

MarginTable::MarginTable(std::vector<MarginRow> rows) : rows_(std::move(rows)) { validate(); }

MarginTable MarginTable::reference() {
  return MarginTable({{100.0, 0.60, 0.05, 0.65}, {150.0, 0.32, 0.11, 0.43}, {200.0, 0.47, 0.22, 0.69}});
}

const MarginRow& MarginTable::lookup(double length_km) const {
  if (length_km < 0.0) throw Error(ErrorCode::InvalidArgument, "negative route length");
  for (const auto& r : rows_) {
    if (length_km <= r.max_km) return r;
  }
  throw Error(ErrorCode::MarginUnavailable,
              "no margin row covers " + std::to_string(length_km) + " km");
}

void MarginTable::validate() const {
  if (rows_.empty()) throw Error(ErrorCode::ConfigError, "margin table is empty");
  double prev = -1.0;
  for (const auto& r : rows_) {
    if (!(r.max_km > prev)) throw Error(ErrorCode::ConfigError, "margin rows must have increasing distance");
    if (r.lbl_error_db < 0.0 || r.wl_error_db < 0.0)
      throw Error(ErrorCode::ConfigError, "margin error terms must be >= 0");
    if (std::abs(r.required_margin_db - (r.lbl_error_db + r.wl_error_db)) > 1e-9)
      throw Error(ErrorCode::ConfigError, "margin row " + std::to_string(r.max_km) +
                                              " km: required margin must equal the sum of its error terms");
    prev = r.max_km;
  }
}

nlohmann::json to_json(const MarginTable& t) {
  auto rows = nlohmann::json::array();
  for (const auto& r : t.rows()) {
    rows.push_back({{"max_km", r.max_km},
                    {"lbl_error_db", r.lbl_error_db},
                    {"wl_error_db", r.wl_error_db},
                    {"required_margin_db", r.required_margin_db}});
  }
  return rows;
}

MarginTable margin_table_from_json(const nlohmann::json& j) {
  using namespace jsonutil;
  if (!j.is_array()) throw Error(ErrorCode::ConfigError, "margin_table must be an array");
  std::vector<MarginRow> rows;
  for (const auto& r : j) {
    require_keys_subset(r, {"max_km", "lbl_error_db", "wl_error_db", "required_margin_db"}, "margin_table row");
    MarginRow row;
    row.max_km = number(r, "max_km", "margin_table row");
    row.lbl_error_db = number(r, "lbl_error_db", "margin_table row");
    row.wl_error_db = number(r, "wl_error_db", "margin_table row");
    row.required_margin_db = number_or(r, "required_margin_db", row.lbl_error_db + row.wl_error_db, "margin_table row");
    rows.push_back(row);
  }
  return MarginTable(std::move(rows));
}

}  // namespace fastwdm
