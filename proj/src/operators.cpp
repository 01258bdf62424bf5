#include "ahlfors/operators.hpp"

#include <cmath>
#include <vector>

#include "ahlfors/errors.hpp"

namespace ahlfors {
namespace {

// grads[b][a] = d_a theta_b
std::vector<OneForm> gradients(const OneForm& theta) {
  std::vector<OneForm> grads;
  grads.reserve(theta.dim());
  for (int b = 0; b < theta.dim(); ++b) grads.push_back(gradient(theta[b]));
  return grads;
}

SymTensor2 sym_from_gradients(const Metric& g, const OneForm& theta,
                              const std::vector<OneForm>& grads) {
  const int n = theta.dim();
  const Christoffel& gamma = g.connection();
  SymTensor2 out(g.grid());
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      ScalarField& t = out(a, b);
      t.add_scaled(0.5, grads[b][a]);
      t.add_scaled(0.5, grads[a][b]);
      for (int c = 0; c < n; ++c) t.add_product(-1.0, gamma(c, a, b), theta[c]);
    }
  return out;
}

ScalarField codiff_from_gradients(const Metric& g, const OneForm& theta,
                                  const std::vector<OneForm>& grads) {
  const int n = theta.dim();
  ScalarField out(g.grid());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      out.add_product(-1.0, g.inverse()(a, b), grads[b][a]);
  const VectorField& trace = g.contracted_connection();
  for (int c = 0; c < n; ++c) out.add_product(1.0, trace[c], theta[c]);
  return out;
}

// Lowers V^b = -(1/sqrt g) d_a(sqrt g T^ab) [+ correction^b] to a one-form.
template <class Entry>
OneForm divergence_form(const Metric& g, Entry entry,
                        const VectorField* correction) {
  const int n = g.dim();
  const ScalarField& w = g.volume_density();
  VectorField v(g.grid());
  std::vector<ScalarField> column(n);
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) column[a] = w * entry(a, b);
    v[b] = -1.0 * (divergence(column) / w);
    if (correction) v[b] += (*correction)[b];
  }
  return flat(g, v);
}

void require_dim(int n, const Metric& g) {
  if (n != g.dim())
    throw InvalidArgument("field dimension does not match metric dimension");
}

}  // namespace

SymTensor2 delta_star(const Metric& g, const OneForm& theta) {
  require_dim(theta.dim(), g);
  return sym_from_gradients(g, theta, gradients(theta));
}

OneForm div_sym(const Metric& g, const SymTensor2& phi) {
  require_dim(phi.dim(), g);
  const int n = phi.dim();
  const SymTensor2Up up = raise(g, phi);
  const Christoffel& gamma = g.connection();
  VectorField corr(g.grid());
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a)
      for (int c = a; c < n; ++c)
        corr[b].add_product(a == c ? -1.0 : -2.0, gamma(b, a, c), up(a, c));
  return divergence_form(
      g, [&](int a, int b) -> const ScalarField& { return up(a, b); }, &corr);
}

ScalarField delta_oneform(const Metric& g, const OneForm& theta) {
  require_dim(theta.dim(), g);
  return codiff_from_gradients(g, theta, gradients(theta));
}

OneForm ext_d_scalar(const ScalarField& f) { return gradient(f); }

TwoForm ext_d_oneform(const OneForm& theta) {
  const int n = theta.dim();
  const auto grads = gradients(theta);
  TwoForm out(theta.grid(), n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) out(a, b) = grads[b][a] - grads[a][b];
  return out;
}

OneForm codiff_twoform(const Metric& g, const TwoForm& omega) {
  require_dim(omega.dim(), g);
  const TwoFormUp up = raise(g, omega);
  const ScalarField zero(g.grid());
  std::vector<ScalarField> lower_half;
  lower_half.reserve(up.count());
  for (std::size_t i = 0; i < up.count(); ++i) lower_half.push_back(-up[i]);
  const int n = omega.dim();
  return divergence_form(
      g,
      [&](int a, int b) -> const ScalarField& {
        if (a == b) return zero;
        if (a < b) return up(a, b);
        return lower_half[AntiLayout::index(n, b, a)];
      },
      nullptr);
}

SymTensor2 cauchy_ahlfors_S(const Metric& g, const OneForm& theta) {
  require_dim(theta.dim(), g);
  const auto grads = gradients(theta);
  SymTensor2 s = sym_from_gradients(g, theta, grads);
  const ScalarField div = codiff_from_gradients(g, theta, grads);
  const double inv_n = 1.0 / g.dim();
  for (std::size_t i = 0; i < s.count(); ++i)
    s[i].add_product(inv_n, div, g.covariant()[i]);
  return s;
}

OneForm ahlfors_laplacian(const Metric& g, const OneForm& theta) {
  return div_sym(g, cauchy_ahlfors_S(g, theta));
}

OneForm ricci_action(const Metric& g, const SymTensor2& ric,
                     const OneForm& theta) {
  return contract(ric, sharp(g, theta));
}

OneForm weitzenboeck_rhs(const Metric& g, const SymTensor2& ric,
                         const OneForm& theta, int sign) {
  if (sign != 1 && sign != -1)
    throw InvalidArgument("Ricci term sign must be +1 or -1");
  const int n = g.dim();
  OneForm out = codiff_twoform(g, ext_d_oneform(theta));
  out *= 0.5;
  out.add_scaled(static_cast<double>(sign), ricci_action(g, ric, theta));
  out.add_scaled(double(n - 1) / n, ext_d_scalar(delta_oneform(g, theta)));
  return out;
}

OneForm weitzenboeck_rhs(const Metric& g, const OneForm& theta, int sign) {
  return weitzenboeck_rhs(g, ricci(g), theta, sign);
}

SignCalibration calibrate_ricci_sign(const Metric& g, const OneForm& theta) {
  const SymTensor2 ric = ricci(g);
  const OneForm lap = ahlfors_laplacian(g, theta);
  SignCalibration c;
  c.laplacian_norm = l2_norm(lap, g);
  if (!(c.laplacian_norm > 0.0))
    throw InvalidArgument("calibration needs a one-form outside ker Delta_A");
  c.residual_plus =
      l2_norm(lap - weitzenboeck_rhs(g, ric, theta, +1), g) / c.laplacian_norm;
  c.residual_minus =
      l2_norm(lap - weitzenboeck_rhs(g, ric, theta, -1), g) / c.laplacian_norm;
  c.sign = c.residual_minus <= c.residual_plus ? -1 : +1;
  return c;
}

}  // namespace ahlfors
