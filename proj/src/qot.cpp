#include "fastwdm/qot.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fastwdm/error.hpp"

namespace fastwdm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Solver bracket on linear GSNR.
constexpr double kGsnrLow = 1e-6;
constexpr double kGsnrHigh = 1e6;

double psi(double g_linear, BerCurve c) noexcept {
  return c.scale * math::erfc(std::sqrt(g_linear / c.divisor));
}

double psi_derivative(double g_linear, BerCurve c) noexcept {
  return -c.scale * std::exp(-g_linear / c.divisor) /
         std::sqrt(std::numbers::pi * c.divisor * g_linear);
}

}  // namespace

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) noexcept { return 10.0 * std::log10(linear); }

GsnrDb::GsnrDb(double db) : db_(db) {
  if (std::isnan(db)) throw Error(ErrorCode::InvalidArgument, "GSNR is NaN");
}

GsnrDb GsnrDb::from_linear(double linear) {
  if (std::isnan(linear) || linear < 0.0)
    throw Error(ErrorCode::InvalidArgument, "linear SNR must be >= 0");
  if (linear == 0.0) return zero_snr();
  if (linear == kInf) return noise_free();
  return GsnrDb(linear_to_db(linear));
}

double GsnrDb::inverse_linear() const noexcept {
  if (is_noise_free()) return 0.0;
  if (is_zero_snr()) return kInf;
  return std::pow(10.0, -db_ / 10.0);
}

Ber::Ber(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 0.5))
    throw Error(ErrorCode::BerOutOfRange, "BER must lie in [0, 0.5], got " + std::to_string(value));
}

std::string_view to_string(Modulation m) noexcept {
  switch (m) {
    case Modulation::QPSK:
      return "QPSK";
    case Modulation::QAM16:
      return "16QAM";
  }
  return "?";
}

Modulation modulation_from_string(std::string_view name) {
  if (name == "QPSK") return Modulation::QPSK;
  if (name == "16QAM") return Modulation::QAM16;
  throw Error(ErrorCode::ModeUnsupported, "unknown modulation '" + std::string(name) + "'");
}

BerCurve ber_curve(Modulation m) noexcept {
  switch (m) {
    case Modulation::QPSK:
      return {0.5, 2.0};
    case Modulation::QAM16:
      return {3.0 / 8.0, 10.0};
  }
  return {0.5, 2.0};
}

double zero_snr_ber(Modulation m) noexcept { return ber_curve(m).scale; }

namespace math {

double erfc(double x) noexcept {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 - erfc(-x);
  if (x > 27.3) return 0.0;  // below the smallest subnormal

  const double x2 = x * x;
  if (x < 2.0) {
    // erf(x) = 2/sqrt(pi) e^{-x^2} sum_n 2^n x^{2n+1} / (2n+1)!!, all terms positive.
    double term = x;
    double sum = x;
    for (int n = 1; n < 500; ++n) {
      term *= 2.0 * x2 / (2.0 * n + 1.0);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return 1.0 - 2.0 / std::sqrt(std::numbers::pi) * std::exp(-x2) * sum;
  }

  // erfc(x) = e^{-x^2}/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
  // evaluated with the modified Lentz method.
  constexpr double tiny = 1e-300;
  double f = x;
  double c = f;
  double d = 0.0;
  for (int n = 1; n < 5000; ++n) {
    const double a = 0.5 * n;
    d = x + a * d;
    if (d == 0.0) d = tiny;
    c = x + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x2) / std::sqrt(std::numbers::pi) / f;
}

double erfc_inv(double y) {
  if (!(y > 0.0 && y < 2.0)) {
    if (y == 0.0) return kInf;
    if (y == 2.0) return -kInf;
    throw Error(ErrorCode::InvalidArgument, "erfc_inv domain is (0, 2)");
  }
  if (y == 1.0) return 0.0;
  if (y > 1.0) return -erfc_inv(2.0 - y);

  // Starting point from the rational upper-tail normal quantile
  // approximation (|error| < 4.5e-4), with erfc(x) = 2 Q(x sqrt 2).
  const double p = 0.5 * y;
  const double t = std::sqrt(-2.0 * std::log(p));
  const double z = t - (2.515517 + t * (0.802853 + t * 0.010328)) /
                           (1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308)));
  double x = std::max(z / std::numbers::sqrt2, 0.0);

  // Newton on log erfc(x) - log y, bracketed by [lo, hi].
  double lo = 0.0;
  double hi = 27.3;
  const double log_y = std::log(y);
  for (int i = 0; i < 100; ++i) {
    const double e = erfc(x);
    if (e > y) lo = x; else hi = x;
    const double g = std::log(e) - log_y;
    const double dg = -2.0 / std::sqrt(std::numbers::pi) * std::exp(-x * x) / e;
    double next = x - g / dg;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= 1e-15 * std::max(1.0, x)) break;
  }
  return x;
}

}  // namespace math

Ber ber_from_gsnr(GsnrDb gsnr, Modulation format) {
  const BerCurve c = ber_curve(format);
  if (gsnr.is_zero_snr()) return Ber(c.scale);
  if (gsnr.is_noise_free()) return Ber(0.0);
  return Ber(psi(gsnr.linear(), c));
}

GsnrDb gsnr_from_ber(Ber ber, Modulation format) {
  const BerCurve c = ber_curve(format);
  const double target = ber.value();
  if (target <= 0.0)
    throw Error(ErrorCode::BerOutOfRange, "BER 0 corresponds to unbounded GSNR");
  if (target > c.scale)
    throw Error(ErrorCode::BerOutOfRange,
                "BER " + std::to_string(target) + " exceeds the zero-SNR BER of " +
                    std::string(to_string(format)));
  if (target == c.scale) return GsnrDb::zero_snr();

  // Psi is strictly decreasing: lo has the larger BER.
  double lo = kGsnrLow;
  double hi = kGsnrHigh;
  bool log_domain = true;
  if (psi(lo, c) < target) {
    // Between the bracket floor and zero SNR.
    lo = 0.0;
    hi = kGsnrLow;
    log_domain = false;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = log_domain ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (psi(mid, c) > target) lo = mid; else hi = mid;
    if (hi - lo <= 1e-13 * hi) break;
  }
  double g = 0.5 * (lo + hi);

  // Newton polish, kept inside the final bracket.
  for (int i = 0; i < 8; ++i) {
    const double f = psi(g, c) - target;
    const double df = psi_derivative(g, c);
    if (f == 0.0 || df == 0.0 || !std::isfinite(df)) break;
    const double next = g - f / df;
    if (!(next >= lo && next <= hi)) break;
    if (std::abs(next - g) <= 1e-16 * g) {
      g = next;
      break;
    }
    g = next;
  }
  return GsnrDb::from_linear(g);
}

QSquaredDb q_squared_from_ber(Ber ber) {
  if (ber.value() <= 0.0)
    throw Error(ErrorCode::BerOutOfRange, "Q^2 is unbounded for BER 0");
  const double x = math::erfc_inv(2.0 * ber.value());
  return QSquaredDb{GsnrDb::from_linear(2.0 * x * x).db()};
}

GsnrDb combine_inverse(std::span<const GsnrDb> components) {
  if (components.empty()) throw Error(ErrorCode::EmptyList, "combine_inverse needs >= 1 component");
  double inverse = 0.0;
  for (GsnrDb g : components) inverse += g.inverse_linear();
  if (inverse == 0.0) return GsnrDb::noise_free();
  if (inverse == kInf) return GsnrDb::zero_snr();
  return GsnrDb(-linear_to_db(inverse));
}

GsnrDb combine_inverse(std::initializer_list<GsnrDb> components) {
  return combine_inverse(std::span<const GsnrDb>(components.begin(), components.size()));
}

GsnrDb remove_contribution(GsnrDb total, GsnrDb component) {
  if (component.is_noise_free()) return total;
  if (total.is_zero_snr()) return total;
  const double remainder = total.inverse_linear() - component.inverse_linear();
  if (!(remainder > 0.0))
    throw Error(ErrorCode::NonPositiveRemainder,
                "component " + std::to_string(component.db()) + " dB does not exceed total " +
                    std::to_string(total.db()) + " dB");
  return GsnrDb(-linear_to_db(remainder));
}

}  // namespace fastwdm
