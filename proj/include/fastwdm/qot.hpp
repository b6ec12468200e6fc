#pragma once

// BER <-> GSNR <-> Q^2 conversions and reciprocal-SNR composition.
//
// All decibel quantities use 10*log10. A GSNR of +inf dB is a noise-free
// contribution (identity in combine_inverse); -inf dB is the zero-SNR limit
// (absorbing in combine_inverse).

#include <initializer_list>
#include <limits>
#include <span>
#include <string_view>

namespace fastwdm {

double db_to_linear(double db) noexcept;
double linear_to_db(double linear) noexcept;

/// A signal-to-noise ratio in dB. Used for every role: total GSNR, SNR_TRx,
/// SNR_ASE, SNR_NLI and per-link line GSNR.
class GsnrDb {
 public:
  constexpr GsnrDb() = default;
  explicit GsnrDb(double db);

  static GsnrDb from_linear(double linear);
  static constexpr GsnrDb noise_free() { return GsnrDb(Raw{std::numeric_limits<double>::infinity()}); }
  static constexpr GsnrDb zero_snr() { return GsnrDb(Raw{-std::numeric_limits<double>::infinity()}); }

  constexpr double db() const noexcept { return db_; }
  double linear() const noexcept { return db_to_linear(db_); }
  /// 1/linear, which is the quantity that adds under concatenation.
  double inverse_linear() const noexcept;

  constexpr bool is_noise_free() const noexcept { return db_ == std::numeric_limits<double>::infinity(); }
  constexpr bool is_zero_snr() const noexcept { return db_ == -std::numeric_limits<double>::infinity(); }

  friend constexpr auto operator<=>(GsnrDb a, GsnrDb b) noexcept { return a.db_ <=> b.db_; }
  friend constexpr bool operator==(GsnrDb a, GsnrDb b) noexcept { return a.db_ == b.db_; }

 private:
  struct Raw {
    double v;
  };
  constexpr explicit GsnrDb(Raw r) : db_(r.v) {}

  double db_ = 0.0;
};

/// Pre-FEC bit error ratio, in [0, 0.5].
class Ber {
 public:
  explicit Ber(double value);
  constexpr double value() const noexcept { return value_; }

 private:
  double value_;
};

struct QSquaredDb {
  double db;
};

enum class Modulation { QPSK, QAM16 };

std::string_view to_string(Modulation m) noexcept;
Modulation modulation_from_string(std::string_view name);

/// Psi_MF(g) = scale * erfc(sqrt(g / divisor)) with g linear.
struct BerCurve {
  double scale;
  double divisor;
};

BerCurve ber_curve(Modulation m) noexcept;
/// BER at zero SNR, i.e. the largest BER the format can report.
double zero_snr_ber(Modulation m) noexcept;

namespace math {

double erfc(double x) noexcept;
/// Inverse of erfc on (0, 2).
double erfc_inv(double y);

}  // namespace math

Ber ber_from_gsnr(GsnrDb gsnr, Modulation format);
GsnrDb gsnr_from_ber(Ber ber, Modulation format);
QSquaredDb q_squared_from_ber(Ber ber);

GsnrDb combine_inverse(std::span<const GsnrDb> components);
GsnrDb combine_inverse(std::initializer_list<GsnrDb> components);

/// Isolates the remaining contribution: 1/result = 1/total - 1/component.
GsnrDb remove_contribution(GsnrDb total, GsnrDb component);

}  // namespace fastwdm
