#pragma once

// Fast evaluation of omega_j for the AFE sums. The weight is tabulated once
// per process as piecewise Chebyshev expansions in u = log xi, with each
// sample computed by the trapezoid quadrature on a contour chosen for that
// xi (left of the pole at s = 0 for xi < 1, near the saddle for large xi).

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "qcentral/special.hpp"

namespace qcentral {

class OmegaTable {
 public:
  static constexpr double kMinXi = 1e-15;
  static constexpr double kEnvelopeStep = 0.01;

  /// Builds the table for settings.j; settings.c is ignored (contours are
  /// chosen per sample), settings.T and settings.h are honoured.
  explicit OmegaTable(const OmegaWeight& settings);
  ~OmegaTable();
  OmegaTable(const OmegaTable&) = delete;
  OmegaTable& operator=(const OmegaTable&) = delete;

  [[nodiscard]] int j() const noexcept { return j_; }
  /// omega_j(xi) is treated as 0 beyond this point.
  [[nodiscard]] double cutoff() const noexcept { return cutoff_; }
  [[nodiscard]] std::size_t segment_count() const noexcept { return segments_.size(); }

  [[nodiscard]] double operator()(double xi) const;
  /// Same, taking log xi directly.
  [[nodiscard]] double at_log(double u) const;

  /// sup of |omega_j| over [xi, cutoff), read off a grid in log xi with a
  /// 10% allowance for peaks between grid points; 0 from the cutoff on.
  [[nodiscard]] double envelope(double xi) const;

  /// Reference evaluation used to fill the table; exposed for tests.
  [[nodiscard]] double sample(double xi) const;

 private:
  struct Segment {
    double u0, u1;
    std::vector<double> coeffs;
  };
  struct NodeCache;

  const NodeCache& nodes_for(double c) const;
  void build_segment(double u0, double u1, int depth);

  int j_;
  double T_;
  double h_;
  double cutoff_ = 0.0;
  double u_min_ = 0.0;
  double u_max_ = 0.0;
  std::vector<Segment> segments_;
  std::vector<double> segment_starts_;
  std::vector<double> envelope_;  // suffix maxima on u = k * kEnvelopeStep
  mutable std::mutex cache_mutex_;
  mutable std::vector<std::unique_ptr<NodeCache>> caches_;
};

// The omega_1, omega_2, omega_3 tables, built lazily and shareable between
// threads.
class OmegaWeights {
 public:
  explicit OmegaWeights(double T = 200.0, double h = 0.01);
  ~OmegaWeights();
  OmegaWeights(const OmegaWeights&) = delete;
  OmegaWeights& operator=(const OmegaWeights&) = delete;

  [[nodiscard]] const OmegaTable& table(int j) const;
  [[nodiscard]] double operator()(int j, double xi) const { return table(j)(xi); }
  /// Changes whenever anything that affects tabulated values changes.
  [[nodiscard]] std::uint64_t version() const noexcept;

  static const OmegaWeights& standard();

 private:
  double T_;
  double h_;
  mutable std::array<std::once_flag, 3> once_;
  mutable std::array<std::unique_ptr<OmegaTable>, 3> tables_;
};

}  // namespace qcentral
