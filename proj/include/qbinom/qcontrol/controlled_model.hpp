#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "qbinom/error.hpp"
#include "qbinom/qcontrol/circle.hpp"
#include "qbinom/qmodel/model.hpp"

namespace qbinom::qcontrol {

using qmodel::ModelCoefficients;
using qmodel::Plant;
using qmodel::TimeGrid;

inline double control_w(double u, double lambda) { return std::sqrt(1.0 + lambda * lambda * u * u); }

// Dispersive coupling L2 = i sigma_z with the drive L3 = i u (sigma_+ - sigma_-).
inline qmodel::InteractionSpec controlled_interaction(double u, const TimeGrid& grid) {
  using namespace qlin::pauli;
  const cplx i(0.0, 1.0);
  return {AtomOperator::zero(), sigma_z() * i, (sigma_plus() - sigma_minus()) * (i * u), grid};
}

inline ModelCoefficients controlled_coeffs(double u, const TimeGrid& grid) {
  using namespace qlin::pauli;
  const double lam = grid.lambda();
  const double w = control_w(u, lam);
  const double sinc = std::sin(lam * w) / (lam * w);
  // cos(x) - 1 = -2 sin^2(x/2) keeps full precision after division by lambda^2.
  const double half = std::sin(0.5 * lam * w);
  const double cosm1 = -2.0 * half * half / (lam * lam);
  ModelCoefficients c;
  c.lambda = lam;
  c.Mpm = AtomOperator::zero();
  c.Mp = sigma_z() * sinc;
  c.Mm = sigma_z() * (-sinc);
  c.Mo = AtomOperator::identity() * cosm1 + (sigma_plus() - sigma_minus()) * (sinc * u);
  return c;
}

// Controlled dispersive plant. closed_form selects the analytic coefficients over
// exponentiate-and-decompose; the unitary is always exponentiated.
inline Plant controlled_dispersive(const TimeGrid& grid, bool closed_form = true) {
  Plant::CoefficientMap coeffs;
  if (closed_form) coeffs = [grid](double u) { return controlled_coeffs(u, grid); };
  return Plant::controlled([grid](double u) { return controlled_interaction(u, grid); }, grid, "controlled-dispersive",
                           std::move(coeffs));
}

// Equispaced control values on [-u_max, u_max] and angles on [0, 2 pi).
// An odd number of control points spans both endpoints. An even number uses the step
// 2 u_max / points starting at -u_max, so that u = 0 is a grid member and +u_max is not.
class ControlGrid {
 public:
  ControlGrid(double u_max, std::size_t points, std::size_t theta_points)
      : u_max_(u_max), points_(points), theta_points_(theta_points) {
    if (!(u_max >= 0.0) || !std::isfinite(u_max)) throw DomainError("ControlGrid: u_max must be nonnegative");
    if (points < 1) throw DomainError("ControlGrid: at least one control point is required");
    if (points > 65535) throw DomainError("ControlGrid: at most 65535 control points");
    if (theta_points < 4) throw DomainError("ControlGrid: at least 4 theta points are required");
    if (points > 1 && u_max == 0.0) throw DomainError("ControlGrid: several control points need u_max > 0");
  }

  // Paper-scale defaults: 400 controls on [-10, 10] and 10^5 angles.
  static ControlGrid paper() { return ControlGrid(10.0, 400, 100000); }

  double u_max() const { return u_max_; }
  std::size_t points() const { return points_; }
  std::size_t theta_points() const { return theta_points_; }

  // u_j = u_max (j - h) / h with h = points / 2 (integer division) covers both cases.
  std::vector<double> controls() const {
    std::vector<double> u(points_, 0.0);
    if (points_ == 1) return u;
    const double half = static_cast<double>(points_ / 2);
    for (std::size_t j = 0; j < points_; ++j) u[j] = u_max_ * (static_cast<double>(j) - half) / half;
    return u;
  }

  double theta(std::size_t i) const { return kTwoPi * static_cast<double>(i) / static_cast<double>(theta_points_); }

 private:
  double u_max_;
  std::size_t points_;
  std::size_t theta_points_;
};

struct ControlledModelReport {
  double unitarity = 0.0;      // max reconstruction unitarity defect
  double trace_lindblad = 0.0;  // max |L(I, u)|
  double closed_form = 0.0;    // max entrywise closed form vs decomposition
};

inline double coefficient_distance(const ModelCoefficients& a, const ModelCoefficients& b) {
  return std::max({qlin::max_abs_diff(a.Mpm, b.Mpm), qlin::max_abs_diff(a.Mp, b.Mp), qlin::max_abs_diff(a.Mm, b.Mm),
                   qlin::max_abs_diff(a.Mo, b.Mo)});
}

inline ControlledModelReport controlled_model_check(const TimeGrid& grid, const std::vector<double>& controls) {
  ControlledModelReport r;
  for (double u : controls) {
    const ModelCoefficients closed = controlled_coeffs(u, grid);
    const ModelCoefficients numeric = qmodel::coefficients_of(controlled_interaction(u, grid));
    r.closed_form = std::max(r.closed_form, coefficient_distance(closed, numeric));
    r.unitarity = std::max(r.unitarity, qmodel::unitarity_defect(qmodel::reconstruct_unitary(closed)));
    r.trace_lindblad =
        std::max(r.trace_lindblad, qmodel::lindblad(AtomOperator::identity(), closed).max_abs());
  }
  return r;
}

}  // namespace qbinom::qcontrol
