#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fastwdm/qot.hpp"
#include "json.hpp"

namespace fastwdm {

/// Result of probing one link.
struct LinkGsnrRecord {
  std::string link_id;
  std::string probe_mode_id;
  Modulation probe_modulation = Modulation::QAM16;
  double ber = 0.0;
  double raw_gsnr_db = 0.0;
  double probe_snr_trx_db = 0.0;
  /// raw GSNR with the probe pair's back-to-back noise removed; may be +inf.
  double line_gsnr_db = 0.0;
  double timestamp = 0.0;
  double probe_freq_thz = 191.5;
  bool fallback = false;

  friend bool operator==(const LinkGsnrRecord&, const LinkGsnrRecord&) = default;
};

/// dB values go to JSON as numbers, with "+inf" / "-inf" strings for the
/// sentinels.
nlohmann::json db_to_json(double db);
double db_from_json(const nlohmann::json& j);

nlohmann::json to_json(const LinkGsnrRecord& r);
LinkGsnrRecord record_from_json(const nlohmann::json& j);

/// Append-only list of probe records, optionally mirrored to a JSON-lines file.
class LinkLedger {
 public:
  LinkLedger() = default;
  /// Loads existing records from `path` (if present) and appends new ones to it.
  explicit LinkLedger(std::filesystem::path path);

  void append(const LinkGsnrRecord& r);
  const std::vector<LinkGsnrRecord>& records() const noexcept { return records_; }
  std::optional<LinkGsnrRecord> latest(std::string_view link_id) const;
  /// Latest record with now - timestamp < freshness_s.
  std::optional<LinkGsnrRecord> fresh(std::string_view link_id, double now, double freshness_s) const;

 private:
  std::optional<std::filesystem::path> path_;
  std::vector<LinkGsnrRecord> records_;
};

struct MarginRow {
  double max_km = 0.0;
  double lbl_error_db = 0.0;
  double wl_error_db = 0.0;
  double required_margin_db = 0.0;
};

class MarginTable {
 public:
  MarginTable() = default;
  explicit MarginTable(std::vector<MarginRow> rows);

  /// 100 km: 0.60 + 0.05, 150 km: 0.32 + 0.11, 200 km: 0.47 + 0.22.
  static MarginTable reference();

  const std::vector<MarginRow>& rows() const noexcept { return rows_; }
  /// Smallest row covering the length. Throws MarginUnavailable beyond the
  /// last row.
  const MarginRow& lookup(double length_km) const;
  double required_margin(double length_km) const { return lookup(length_km).required_margin_db; }

  /// Throws ConfigError if rows are unsorted, negative, or the required
  /// margin is not the sum of the two error terms.
  void validate() const;

 private:
  std::vector<MarginRow> rows_;
};

nlohmann::json to_json(const MarginTable& t);
MarginTable margin_table_from_json(const nlohmann::json& j);

}  // namespace fastwdm
