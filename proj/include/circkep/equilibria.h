#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "circkep/blowup_charts.h"
#include "circkep/core_model.h"

namespace circkep {

template <std::size_t N>
using Vector = std::array<double, N>;
template <std::size_t N>
using Matrix = std::array<std::array<double, N>, N>;
template <std::size_t N>
using VectorField = std::function<Vector<N>(const Vector<N>&)>;

enum class Stability { HyperbolicSink, SaddleType, ZeroHopf, CenterDegenerate };

std::string_view stability_name(Stability s);

struct EquilibriumReport {
  ChartId chart = ChartId::GammaNeg;
  bool exists = false;
  std::vector<double> location;
  std::vector<std::complex<double>> eigenvalues;          // closed form
  std::vector<std::complex<double>> numeric_eigenvalues;  // from numeric_jacobian
  std::optional<Stability> stability;
  std::optional<double> det_j;
  std::optional<double> ecc_sq;
  std::optional<double> decay_a;
  std::string note;
};

/// Equilibrium of the gamma > 0 chart: (q1, v11, mu11) = (0, -delta^(-1/(1+alpha)), 0)
/// for alpha > 0 and (y, v1, mu1) = (0, 0, 0) for alpha = 0.
/// Throws std::invalid_argument when gamma <= 0.
EquilibriumReport gamma_pos_equilibrium(const DampingParams& params);

/// The zero-Hopf point (r1, v, x) = (1, 0, 0) of the gamma < 0 chart, with the
/// decay exponent a = -(alpha + beta) / gamma_tilde. Throws when gamma >= 0.
EquilibriumReport zero_hopf_report(const DampingParams& params);

/// Interior equilibrium of the critical planar system (r1, v). Reports
/// exists = false for delta >= 1/2. Throws when gamma != 0.
EquilibriumReport critical_interior_equilibrium(const DampingParams& params);

/// Boundary equilibrium (v1*, 0) of the critical l2-chart. Throws when gamma != 0.
EquilibriumReport critical_boundary_equilibrium(const DampingParams& params);

/// Negative root of v^2/2 = 1 + delta |v|^alpha v, by bisection.
double critical_boundary_v1(const DampingParams& params);

/// Analytic Jacobian of the critical planar field at (r1, v).
Matrix<2> critical_jacobian(const DampingParams& params, double r1, double v);

/// Divergence of the critical planar field: -2 delta (alpha + beta) r1^(-alpha-beta) (1 + r1^2 v^2)^(alpha/2).
double critical_divergence(const DampingParams& params, double r1, double v);

/// Central differences with h_i = max(rel_step, rel_step |x_i|).
/// Throws std::domain_error on non-finite entries.
template <std::size_t N>
Matrix<N> numeric_jacobian(const VectorField<N>& field, const Vector<N>& point, double rel_step = 1e-6) {
  Matrix<N> jac{};
  for (std::size_t j = 0; j < N; ++j) {
    const double h = std::max(rel_step, rel_step * std::abs(point[j]));
    Vector<N> plus = point;
    Vector<N> minus = point;
    plus[j] += h;
    minus[j] -= h;
    const Vector<N> f_plus = field(plus);
    const Vector<N> f_minus = field(minus);
    for (std::size_t i = 0; i < N; ++i) {
      jac[i][j] = (f_plus[i] - f_minus[i]) / (2.0 * h);
      if (!std::isfinite(jac[i][j])) throw std::domain_error("numeric_jacobian: non-finite entry");
    }
  }
  return jac;
}

/// Roots of the characteristic polynomial (closed-form quadratic or cubic),
/// ordered by ascending real part, then descending imaginary part.
std::vector<std::complex<double>> eigenvalues_small(const Matrix<2>& m);
std::vector<std::complex<double>> eigenvalues_small(const Matrix<3>& m);

/// Restricts the chart field to (c1, c2, c3) for numeric_jacobian.
VectorField<3> chart_vector_field(ChartId chart, const DampingParams& params);

}  // namespace circkep
