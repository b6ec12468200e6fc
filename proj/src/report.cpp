#include "fastwdm/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fastwdm {

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string db_text(double db) {
  if (std::isinf(db)) return db > 0 ? "inf" : "-inf";
  return fmt("%.2f", db);
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

}  // namespace

nlohmann::json to_json(const RouteCandidate& r) {
  return {{"nodes", r.nodes}, {"links", r.links}, {"length_km", r.length_km}, {"latency_ms", r.latency_ms}};
}

nlohmann::json to_json(const ProvisioningReport& r) {
  nlohmann::json links = nlohmann::json::array();
  for (const auto& u : r.links) {
    auto j = to_json(u.record);
    j["reused"] = u.reused;
    j["length_km"] = u.length_km;
    j["kind"] = u.kind;
    links.push_back(std::move(j));
  }
  nlohmann::json channels = nlohmann::json::array();
  for (const auto& c : r.channels) {
    channels.push_back({
        {"freq_thz", c.freq_thz},
        {"mode_id", c.mode_id},
        {"modulation", std::string(to_string(c.modulation))},
        {"line_rate_gbps", c.line_rate_gbps},
        {"est_gsnr_db", c.est_gsnr_db},
        {"required_gsnr_db", c.required_gsnr_db},
        {"secured_margin_db", c.secured_margin_db},
        {"measured_ber", c.measured_ber},
        {"measured_gsnr_db", c.measured_gsnr_db},
        {"est_q_db", c.est_q_db},
        {"meas_q_db", c.meas_q_db},
        {"error_db", c.error_db},
    });
  }
  return {
      {"request",
       {{"src", r.request.src},
        {"dst", r.request.dst},
        {"demand_gbps", r.request.demand_gbps},
        {"operational_margin_db", r.request.operational_margin_db}}},
      {"status", r.status},
      {"message", r.message},
      {"route", r.route ? to_json(*r.route) : nlohmann::json(nullptr)},
      {"required_margin_db", r.required_margin_db},
      {"links", links},
      {"channels", channels},
      {"notes", r.notes},
      {"timing",
       {{"gather_s", r.timing.gather_s},
        {"probe_s", r.timing.probe_s},
        {"design_s", r.timing.design_s},
        {"config_s", r.timing.config_s},
        {"total_s", r.timing.total_s}}},
  };
}

std::string render_record(const LinkGsnrRecord& r) {
  std::ostringstream s;
  s << r.link_id << "  mode " << r.probe_mode_id << (r.fallback ? " (fallback)" : "") << "  BER "
    << fmt("%.3e", r.ber) << "  raw " << db_text(r.raw_gsnr_db) << " dB  line " << db_text(r.line_gsnr_db)
    << " dB  at " << fmt("%.1f", r.probe_freq_thz) << " THz, t=" << fmt("%.1f", r.timestamp) << " s";
  return s.str();
}

std::string render_table(const ProvisioningReport& r) {
  std::ostringstream s;
  s << "Request  " << r.request.src << " -> " << r.request.dst << ", " << fmt("%g", r.request.demand_gbps)
    << " Gb/s\n";
  if (r.route) {
    s << "Route    ";
    for (std::size_t i = 0; i < r.route->nodes.size(); ++i) s << (i ? " - " : "") << r.route->nodes[i];
    s << "  (" << fmt("%.0f", r.route->length_km) << " km, " << fmt("%.2f", r.route->latency_ms)
      << " ms, margin " << fmt("%.2f", r.required_margin_db) << " dB)\n";
  }
  if (!r.links.empty()) {
    s << "\n" << pad("Link", 10) << pad("Kind", 6) << pad("km", 7) << pad("Probe mode", 22) << pad("BER", 11)
      << "GSNR\n";
    for (const auto& u : r.links) {
      s << pad(u.record.link_id, 10) << pad(u.kind, 6) << pad(fmt("%.0f", u.length_km), 7)
        << pad(u.record.probe_mode_id + (u.reused ? "*" : ""), 22) << pad(fmt("%.2e", u.record.ber), 11)
        << db_text(u.record.line_gsnr_db) << " dB\n";
    }
  }
  if (!r.channels.empty()) {
    s << "\n"
      << pad("THz", 9) << pad("Mode", 21) << pad("Est. GSNR (Q)", 17) << pad("Margin", 9) << pad("Mes. GSNR (Q)", 17)
      << "Error\n";
    for (const auto& c : r.channels) {
      s << pad(fmt("%.1f", c.freq_thz), 9) << pad(c.mode_id, 21)
        << pad(fmt("%.2f", c.est_gsnr_db) + " (" + fmt("%.2f", c.est_q_db) + ")", 17)
        << pad(fmt("%.2f", c.secured_margin_db), 9)
        << pad(fmt("%.2f", c.measured_gsnr_db) + " (" + fmt("%.2f", c.meas_q_db) + ")", 17)
        << fmt("%.2f", c.error_db) << "\n";
    }
  }
  for (const auto& n : r.notes) s << "note: " << n << "\n";
  s << "\nTiming   gather " << fmt("%.1f", r.timing.gather_s) << " s, probe " << fmt("%.1f", r.timing.probe_s)
    << " s, design " << fmt("%.1f", r.timing.design_s) << " s, configure+verify " << fmt("%.1f", r.timing.config_s)
    << " s, total " << fmt("%.1f", r.timing.total_s) << " s\n";
  s << "Status   " << r.status;
  if (!r.message.empty()) s << ": " << r.message;
  s << "\n";
  return s.str();
}

}  // namespace fastwdm
