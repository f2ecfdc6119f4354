#include "circkep/equilibria.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "circkep/math_util.h"

namespace circkep {

namespace {

using cplx = std::complex<double>;

// Zero out rounding residue so that real roots print as real and reports stay byte-stable.
std::vector<cplx> canonical(std::vector<cplx> roots, double scale) {
  const double tol = 1e-12 * std::max(1.0, scale);
  for (cplx& z : roots) {
    double re = z.real();
    double im = z.imag();
    if (std::abs(im) <= tol) im = 0.0;
    if (std::abs(re) <= tol) re = 0.0;
    z = {re, im};
  }
  std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() > b.imag();
  });
  return roots;
}

std::vector<cplx> sorted_plain(std::vector<cplx> roots) { return canonical(std::move(roots), 0.0); }

void require_gamma_zero(const DampingParams& params, const char* what) {
  if (params.gamma != 0.0) {
    throw std::invalid_argument(std::string(what) + " requires gamma = 0");
  }
}

}  // namespace

std::string_view stability_name(Stability s) {
  switch (s) {
    case Stability::HyperbolicSink: return "HyperbolicSink";
    case Stability::SaddleType: return "SaddleType";
    case Stability::ZeroHopf: return "ZeroHopf";
    case Stability::CenterDegenerate: return "CenterDegenerate";
  }
  return "unknown";
}

std::vector<cplx> eigenvalues_small(const Matrix<2>& m) {
  const long double tr = static_cast<long double>(m[0][0]) + m[1][1];
  const long double det =
      static_cast<long double>(m[0][0]) * m[1][1] - static_cast<long double>(m[0][1]) * m[1][0];
  const long double half = tr / 2.0L;
  const long double disc = half * half - det;
  std::vector<cplx> roots;
  if (disc >= 0.0L) {
    // avoid cancellation: the larger-magnitude root first, the other from the product
    const long double s = std::sqrt(disc);
    const long double big = half >= 0.0L ? half + s : half - s;
    const long double small = big != 0.0L ? det / big : 0.0L;
    roots = {cplx(static_cast<double>(big), 0.0), cplx(static_cast<double>(small), 0.0)};
  } else {
    const double im = static_cast<double>(std::sqrt(-disc));
    roots = {cplx(static_cast<double>(half), im), cplx(static_cast<double>(half), -im)};
  }
  double scale = 0.0;
  for (const auto& row : m)
    for (double v : row) scale = std::max(scale, std::abs(v));
  return canonical(roots, scale);
}

std::vector<cplx> eigenvalues_small(const Matrix<3>& m) {
  using ld = long double;
  auto at = [&](int i, int j) { return static_cast<ld>(m[i][j]); };
  const ld tr = at(0, 0) + at(1, 1) + at(2, 2);
  const ld minors = at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0) + at(0, 0) * at(2, 2) -
                    at(0, 2) * at(2, 0) + at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1);
  const ld det = at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
                 at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
                 at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
  // lambda^3 + a lambda^2 + b lambda + c
  const ld a = -tr;
  const ld b = minors;
  const ld c = -det;
  const ld shift = a / 3.0L;
  const ld p = b - a * a / 3.0L;
  const ld q = 2.0L * a * a * a / 27.0L - a * b / 3.0L + c;
  const ld disc = q * q / 4.0L + p * p * p / 27.0L;

  double scale = 0.0;
  for (const auto& row : m)
    for (double v : row) scale = std::max(scale, std::abs(v));

  std::vector<cplx> roots;
  if (disc > 0.0L) {
    const ld s = std::sqrt(disc);
    const ld u = std::cbrt(-q / 2.0L + s);
    const ld v = std::cbrt(-q / 2.0L - s);
    const ld re = -(u + v) / 2.0L - shift;
    const ld im = std::sqrt(3.0L) / 2.0L * (u - v);
    roots = {cplx(static_cast<double>(u + v - shift), 0.0),
             cplx(static_cast<double>(re), static_cast<double>(im)),
             cplx(static_cast<double>(re), static_cast<double>(-im))};
  } else if (p == 0.0L) {
    roots.assign(3, cplx(static_cast<double>(-shift), 0.0));
  } else {
    const ld mag = 2.0L * std::sqrt(-p / 3.0L);
    ld arg = 3.0L * q / (p * mag);
    arg = std::clamp(arg, -1.0L, 1.0L);
    const ld phi = std::acos(arg) / 3.0L;
    const ld two_pi_3 = 2.0L * std::numbers::pi_v<ld> / 3.0L;
    for (int k = 0; k < 3; ++k) {
      roots.emplace_back(static_cast<double>(mag * std::cos(phi - two_pi_3 * k) - shift), 0.0);
    }
  }
  return canonical(roots, scale);
}

VectorField<3> chart_vector_field(ChartId chart, const DampingParams& params) {
  return [chart, params](const Vector<3>& c) { return chart_field(chart, params, c); };
}

EquilibriumReport gamma_pos_equilibrium(const DampingParams& params) {
  if (!(params.gamma > 0.0)) throw std::invalid_argument("gamma_pos_equilibrium requires gamma > 0");
  EquilibriumReport rep;
  rep.chart = select_chart(params);
  rep.exists = true;
  rep.stability = Stability::CenterDegenerate;
  const double a = params.alpha;
  const double d = params.delta;
  if (a == 0.0) {
    rep.location = {0.0, 0.0, 0.0};
    rep.eigenvalues = sorted_plain({0.0, -d, -d});
  } else {
    const double k = std::pow(d, 1.0 / (1.0 + a));
    rep.location = {0.0, -1.0 / k, 0.0};
    rep.eigenvalues = sorted_plain({0.0, -k, -(1.0 + a) * k});
  }
  const Vector<3> x{rep.location[0], rep.location[1], rep.location[2]};
  rep.numeric_eigenvalues = eigenvalues_small(numeric_jacobian<3>(chart_vector_field(rep.chart, params), x));
  rep.ecc_sq = chart_ecc_sq(params, {rep.chart, x[0], x[1], x[2], 0.0, 0.0});
  rep.note = "one zero eigenvalue along the radial direction; attracting center manifold";
  return rep;
}

EquilibriumReport zero_hopf_report(const DampingParams& params) {
  if (!(params.gamma < 0.0)) throw std::invalid_argument("zero_hopf_report requires gamma < 0");
  EquilibriumReport rep;
  rep.chart = ChartId::GammaNeg;
  rep.exists = true;
  rep.stability = Stability::ZeroHopf;
  rep.location = {1.0, 0.0, 0.0};
  rep.eigenvalues = sorted_plain({cplx(0.0, 1.0), cplx(0.0, -1.0), 0.0});
  rep.numeric_eigenvalues =
      eigenvalues_small(numeric_jacobian<3>(chart_vector_field(rep.chart, params), {1.0, 0.0, 0.0}));
  rep.decay_a = -(params.alpha + params.beta) / params.gamma_tilde;
  rep.ecc_sq = 0.0;
  return rep;
}

Matrix<2> critical_jacobian(const DampingParams& params, double r1, double v) {
  const double a = params.alpha;
  const double ab = params.alpha + params.beta;
  const double w = 1.0 + r1 * r1 * v * v;
  const double g = pow_nonneg(r1, -ab) * pow_nonneg(w, 0.5 * a);
  const double dg_dr = g * (-ab / r1 + a * r1 * v * v / w);
  const double dg_dv = g * (a * r1 * r1 * v / w);
  const double d = params.delta;
  Matrix<2> j{};
  j[0][0] = 2.0 * d * (g + r1 * dg_dr);
  j[0][1] = 1.0 + 2.0 * d * r1 * dg_dv;
  j[1][0] = (2.0 * r1 - 3.0) / (r1 * r1 * r1 * r1) - 2.0 * d * v * dg_dr;
  j[1][1] = -2.0 * d * (g + v * dg_dv);
  return j;
}

double critical_divergence(const DampingParams& params, double r1, double v) {
  const double ab = params.alpha + params.beta;
  return -2.0 * params.delta * ab * pow_nonneg(r1, -ab) *
         pow_nonneg(1.0 + r1 * r1 * v * v, 0.5 * params.alpha);
}

EquilibriumReport critical_interior_equilibrium(const DampingParams& params) {
  require_gamma_zero(params, "critical_interior_equilibrium");
  EquilibriumReport rep;
  rep.chart = ChartId::Critical;
  const double d = params.delta;
  if (!(d < 0.5)) {
    rep.exists = false;
    rep.note = "no interior equilibrium for delta >= 1/2";
    return rep;
  }
  const double s = 1.0 - 4.0 * d * d;
  const double r1 = 1.0 / s;
  const double v = -2.0 * d * std::sqrt(s);
  rep.exists = true;
  rep.location = {r1, v};
  const Matrix<2> jac = critical_jacobian(params, r1, v);
  rep.eigenvalues = eigenvalues_small(jac);
  rep.det_j = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
  rep.ecc_sq = 2.0 * hamiltonian(r1, v).h;

  const VectorField<3> full = chart_vector_field(ChartId::Critical, params);
  const VectorField<2> planar = [&full](const Vector<2>& x) {
    const auto f = full({x[0], x[1], 0.0});
    return Vector<2>{f[0], f[1]};
  };
  rep.numeric_eigenvalues = eigenvalues_small(numeric_jacobian<2>(planar, {r1, v}));
  rep.stability = Stability::HyperbolicSink;
  rep.note = rep.eigenvalues[0].imag() != 0.0 ? "stable focus" : "stable node";
  return rep;
}

double critical_boundary_v1(const DampingParams& params) {
  const double a = params.alpha;
  const double d = params.delta;
  auto residual = [&](double v) { return 0.5 * v * v - 1.0 - d * pow_nonneg(std::abs(v), a) * v; };
  double lo = -2.0;
  double hi = -1e-9;
  // residual(hi) < 0; push lo left until residual(lo) > 0
  for (int i = 0; i < 64 && residual(lo) <= 0.0; ++i) lo *= 2.0;
  if (!(residual(lo) > 0.0) || !(residual(hi) < 0.0)) {
    throw std::runtime_error("critical_boundary_v1: no sign change in bracket");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (residual(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(residual(lo)) < std::abs(residual(hi)) ? lo : hi;
}

EquilibriumReport critical_boundary_equilibrium(const DampingParams& params) {
  require_gamma_zero(params, "critical_boundary_equilibrium");
  EquilibriumReport rep;
  rep.chart = ChartId::CriticalL2;
  rep.exists = true;
  const double v1 = critical_boundary_v1(params);
  rep.location = {v1, 0.0};
  const double a = params.alpha;
  const double d = params.delta;
  const double m = std::abs(v1);
  // triangular at mu1 = 0: d/dv1 of the v1-equation and d/dmu1 of the mu1-equation
  const double lam_v = v1 - d * (a + 1.0) * pow_nonneg(m, a);
  const double lam_mu = 0.5 * m - d * pow_nonneg(m, a);
  rep.eigenvalues = sorted_plain({lam_v, lam_mu});

  const VectorField<3> full = chart_vector_field(ChartId::CriticalL2, params);
  const VectorField<2> planar = [&full](const Vector<2>& x) {
    const auto f = full({x[0], x[1], 0.0});
    return Vector<2>{f[0], f[1]};
  };
  rep.numeric_eigenvalues = eigenvalues_small(numeric_jacobian<2>(planar, {v1, 0.0}));
  rep.ecc_sq = 1.0;
  if (d > 0.5) {
    rep.stability = Stability::HyperbolicSink;
  } else if (d == 0.5) {
    rep.stability = Stability::CenterDegenerate;
    rep.note = "zero eigenvalue at delta = 1/2; attracting by a center manifold argument";
  } else {
    rep.stability = Stability::SaddleType;
  }
  return rep;
}

}  // namespace circkep
