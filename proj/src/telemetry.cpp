#include "fastwdm/telemetry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>

#include "fastwdm/error.hpp"
#include "fastwdm/kernels.hpp"

namespace fastwdm {

std::vector<double> Series::times() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.t);
  return out;
}

std::vector<double> Series::values() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.gsnr_db);
  return out;
}

void Series::validate() const {
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].t > samples[i - 1].t))
      throw Error(ErrorCode::InvalidArgument, "series " + id + ": timestamps must strictly increase");
  }
}

Series moving_average(const Series& series, double window_s) {
  if (series.samples.empty()) throw Error(ErrorCode::EmptySeries, "series " + series.id + " is empty");
  series.validate();
  const auto ma = kernels::moving_average_parallel(series.times(), series.values(), window_s);
  Series out{series.id, {}};
  out.samples.reserve(ma.t.size());
  for (std::size_t i = 0; i < ma.t.size(); ++i) out.samples.push_back({ma.t[i], ma.value[i]});
  return out;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw Error(ErrorCode::EmptySeries, "percentile of no values");
  if (!(p > 0.0 && p <= 100.0)) throw Error(ErrorCode::InvalidArgument, "percentile must be in (0, 100]");
  const auto n = values.size();
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, n);
  auto nth = values.begin() + static_cast<long>(rank - 1);
  std::nth_element(values.begin(), nth, values.end());
  return *nth;
}

namespace {

FluctuationStats stats_of(const Series& s, double window_s, double duration_s) {
  if (s.samples.size() < kMinFluctuationPoints)
    throw Error(ErrorCode::InsufficientData, "series " + s.id + " has " + std::to_string(s.samples.size()) +
                                                 " points, need " + std::to_string(kMinFluctuationPoints));
  FluctuationStats st;
  st.window_s = window_s;
  const auto v = s.values();
  st.p5 = percentile(v, 5.0);
  st.p95 = percentile(v, 95.0);
  st.fluctuation = st.p95 - st.p5;
  st.duration_s = duration_s;
  st.points = v.size();
  return st;
}

double span_of(const Series& s) { return s.samples.empty() ? 0.0 : s.samples.back().t - s.samples.front().t; }

}  // namespace

FluctuationStats fluctuation(const Series& series, double window_s) {
  return stats_of(moving_average(series, window_s), window_s, span_of(series));
}

FluctuationStats raw_fluctuation(const Series& series) {
  if (series.samples.empty()) throw Error(ErrorCode::EmptySeries, "series " + series.id + " is empty");
  return stats_of(series, 0.0, span_of(series));
}

double standard_deviation(const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorCode::EmptySeries, "standard deviation of no values");
  long double mean = 0.0L;
  for (double v : values) mean += v;
  mean /= static_cast<long double>(values.size());
  long double acc = 0.0L;
  for (double v : values) acc += (v - mean) * (v - mean);
  return static_cast<double>(std::sqrt(acc / static_cast<long double>(values.size())));
}

namespace {

double parse_number(std::string_view field, std::size_t line_no, const char* what) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line_no) + ": bad " + what + " '" + std::string(field) + "'");
  return v;
}

}  // namespace

std::vector<Series> read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "line 1: missing header");
  ++line_no;
  if (line != "series_id,t_seconds,gsnr_db")
    throw Error(ErrorCode::ParseError, "line 1: header must be 'series_id,t_seconds,gsnr_db'");

  std::vector<Series> out;
  std::map<std::string, std::size_t> index;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.find('\r') != std::string::npos)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": CR line endings are not accepted");
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 3 fields");
    const std::string id = line.substr(0, c1);
    if (id.empty()) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": empty series_id");
    const std::string_view view(line);
    const double t = parse_number(view.substr(c1 + 1, c2 - c1 - 1), line_no, "t_seconds");
    const double g = parse_number(view.substr(c2 + 1), line_no, "gsnr_db");
    auto [it, fresh] = index.emplace(id, out.size());
    if (fresh) out.push_back(Series{id, {}});
    auto& s = out[it->second];
    if (!s.samples.empty() && !(t > s.samples.back().t))
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": t_seconds must increase within series " + id);
    s.samples.push_back({t, g});
  }
  return out;
}

void write_csv(std::ostream& out, const std::vector<Series>& series) {
  out << "series_id,t_seconds,gsnr_db\n";
  out << std::setprecision(17);
  for (const auto& s : series) {
    for (const auto& p : s.samples) out << s.id << ',' << p.t << ',' << p.gsnr_db << '\n';
  }
}

Series sample_link(LineSystem& line, const std::string& link_id, double thz, double t0, double duration_s,
                   double cadence_s) {
  Series s{link_id, {}};
  const auto n = static_cast<std::size_t>(std::floor(duration_s / cadence_s + 1e-9));
  s.samples.reserve(n);
  line.prepare(t0 + duration_s);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * cadence_s;
    s.samples.push_back({t, line.link_gsnr(link_id, thz, t).db()});
  }
  return s;
}

Series sample_connection(World& world, const TrxEndpoint& rx, double t0, double duration_s, double cadence_s) {
  Series s{rx.lane(), {}};
  const auto n = static_cast<std::size_t>(std::floor(duration_s / cadence_s + 1e-9));
  s.samples.reserve(n);
  world.line().prepare(t0 + duration_s);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * cadence_s;
    const auto g = world.connection_gsnr(rx, t);
    if (!g) throw Error(ErrorCode::LossOfSignal, rx.lane() + " is not receiving a signal");
    s.samples.push_back({t, g->db()});
  }
  return s;
}

}  // namespace fastwdm
