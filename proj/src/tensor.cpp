#include "ahlfors/tensor.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "ahlfors/errors.hpp"
#include "ahlfors/kernels.hpp"

namespace ahlfors {
namespace {

constexpr int kMaxDim = 8;
using SmallMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

void require_compatible(int n, const Metric& g) {
  if (n != g.dim())
    throw InvalidArgument("tensor dimension " + std::to_string(n) +
                          " does not match metric dimension " +
                          std::to_string(g.dim()));
}

// d_e g_ab for every (a <= b), e: dg[e](a, b).
std::vector<SymTensor2> metric_derivatives(const SymTensor2& g) {
  const int n = g.dim();
  std::vector<SymTensor2> dg(n, SymTensor2(g.grid()));
  for (std::size_t i = 0; i < g.count(); ++i) {
    OneForm grad = gradient(g[i]);
    for (int e = 0; e < n; ++e) dg[e][i] = std::move(grad[e]);
  }
  return dg;
}

Christoffel connection_from(const SymTensor2& g, const SymTensor2Up& ginv) {
  const int n = g.dim();
  const auto dg = metric_derivatives(g);
  // First kind: Gamma_dab = 1/2 (d_a g_bd + d_b g_ad - d_d g_ab).
  std::vector<SymTensor2> lower(n, SymTensor2(g.grid()));
  for (int d = 0; d < n; ++d)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        ScalarField& t = lower[d](a, b);
        t.add_scaled(0.5, dg[a](b, d));
        t.add_scaled(0.5, dg[b](a, d));
        t.add_scaled(-0.5, dg[d](a, b));
      }
  Christoffel gamma;
  gamma.upper.assign(n, SymTensor2(g.grid()));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        for (int d = 0; d < n; ++d)
          gamma(c, a, b).add_product(1.0, ginv(c, d), lower[d](a, b));
  return gamma;
}

}  // namespace

// ---- specifications ---------------------------------------------------------

void validate_mode(const GridPtr& grid, const std::vector<int>& wavevector) {
  if (static_cast<int>(wavevector.size()) != grid->dim())
    throw InvalidArgument("wavevector needs " + std::to_string(grid->dim()) +
                          " entries");
  for (int a = 0; a < grid->dim(); ++a) {
    if (std::abs(wavevector[a]) > grid->points(a) / 4) {
      std::ostringstream msg;
      msg << "wavevector component " << wavevector[a] << " on axis " << a
          << " exceeds the band limit N/4 = " << grid->points(a) / 4;
      throw BandLimitError(msg.str());
    }
  }
}

ScalarField evaluate_modes(const GridPtr& grid,
                           const std::vector<FourierMode>& modes) {
  ScalarField f(grid);
  for (const auto& m : modes) {
    validate_mode(grid, m.wavevector);
    for (std::size_t p = 0; p < grid->size(); ++p)
      f[p] += m.amplitude * std::cos(grid->phase(m.wavevector, p) + m.phase);
  }
  return f;
}

SymTensor2 evaluate_tensor_modes(const GridPtr& grid,
                                 const std::vector<TensorMode>& modes) {
  const int n = grid->dim();
  SymTensor2 t(grid);
  for (const auto& m : modes) {
    if (m.a < 0 || m.b < 0 || m.a >= n || m.b >= n)
      throw InvalidArgument("tensor mode index out of range");
    validate_mode(grid, m.wavevector);
    ScalarField& c = t(m.a, m.b);
    for (std::size_t p = 0; p < grid->size(); ++p)
      c[p] += m.amplitude * std::cos(grid->phase(m.wavevector, p) + m.phase);
  }
  return t;
}

// ---- metric -----------------------------------------------------------------

Metric Metric::from_components(SymTensor2 g) {
  const int n = g.dim();
  if (n > kMaxDim)
    throw InvalidArgument("metric dimension above " + std::to_string(kMaxDim) +
                          " is not supported");
  const GridPtr grid = g.grid();
  Metric m;
  m.ginv_ = SymTensor2Up(grid);
  m.sqrt_det_ = ScalarField(grid);
  m.min_eig_ = std::numeric_limits<double>::infinity();

  SmallMatrix a(n, n);
  Eigen::SelfAdjointEigenSolver<SmallMatrix> eig(n);
  for (std::size_t p = 0; p < grid->size(); ++p) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) a(i, j) = a(j, i) = g(i, j)[p];
    eig.compute(a);
    const auto& lambda = eig.eigenvalues();
    const double lo = lambda.minCoeff();
    if (!(lo > 0.0) || !lambda.allFinite()) {
      std::vector<double> x(n);
      grid->coordinates(p, x);
      std::ostringstream msg;
      msg << "metric is not positive definite at x = (";
      for (int i = 0; i < n; ++i) msg << (i ? ", " : "") << x[i];
      msg << "): smallest eigenvalue " << lo;
      throw DegenerateMetric(msg.str(), x);
    }
    m.min_eig_ = std::min(m.min_eig_, lo);
    const auto& v = eig.eigenvectors();
    const SmallMatrix inv =
        v * lambda.cwiseInverse().asDiagonal() * v.transpose();
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) m.ginv_(i, j)[p] = inv(i, j);
    m.sqrt_det_[p] = std::sqrt(lambda.prod());
  }
  m.gamma_ = connection_from(g, m.ginv_);
  m.gamma_trace_ = VectorField(grid);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        m.gamma_trace_[c].add_product(1.0, m.ginv_(a, b), m.gamma_(c, a, b));
  m.g_ = std::move(g);
  return m;
}

Metric flat_metric(const GridPtr& grid) {
  SymTensor2 g(grid);
  for (int a = 0; a < grid->dim(); ++a) g(a, a) = ScalarField(grid, 1.0);
  return Metric::from_components(std::move(g));
}

Metric metric_from_spec(const MetricSpec& spec, const GridPtr& grid) {
  const int n = grid->dim();
  SymTensor2 g(grid);
  switch (spec.kind) {
    case MetricSpec::Kind::Flat:
      for (int a = 0; a < n; ++a) g(a, a) = ScalarField(grid, 1.0);
      break;
    case MetricSpec::Kind::Conformal: {
      ScalarField f = evaluate_modes(grid, spec.conformal_factor);
      for (double& v : f.values()) v = std::exp(2.0 * v);
      for (int a = 0; a < n; ++a) g(a, a) = f;
      break;
    }
    case MetricSpec::Kind::Perturbation:
      g = evaluate_tensor_modes(grid, spec.perturbation);
      for (int a = 0; a < n; ++a) g(a, a) += ScalarField(grid, 1.0);
      break;
  }
  return Metric::from_components(std::move(g));
}

MetricSpec random_perturbation_spec(int dim, std::uint64_t seed,
                                    double amplitude, int max_mode,
                                    int modes_per_component) {
  if (dim < 2 || max_mode < 1 || modes_per_component < 1 || !(amplitude >= 0.0))
    throw InvalidArgument("invalid random perturbation parameters");
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  MetricSpec spec;
  spec.kind = MetricSpec::Kind::Perturbation;
  for (int a = 0; a < dim; ++a)
    for (int b = a; b < dim; ++b)
      for (int m = 0; m < modes_per_component; ++m) {
        TensorMode mode;
        mode.a = a;
        mode.b = b;
        mode.wavevector.assign(dim, 0);
        bool nonzero = false;
        while (!nonzero)
          for (int& k : mode.wavevector) {
            k = static_cast<int>(rng() % std::uint64_t(2 * max_mode + 1)) -
                max_mode;
            nonzero = nonzero || k != 0;
          }
        mode.amplitude = amplitude * (2.0 * uniform() - 1.0);
        mode.phase = 2.0 * std::numbers::pi * uniform();
        spec.perturbation.push_back(std::move(mode));
      }
  return spec;
}

Christoffel christoffel(const Metric& g) {
  return connection_from(g.covariant(), g.inverse());
}

// ---- curvature --------------------------------------------------------------

SymTensor2 ricci(const Metric& g) {
  const int n = g.dim();
  const GridPtr& grid = g.grid();
  const Christoffel& gamma = g.connection();

  // Lambda_b = Gamma^c_cb
  OneForm lambda(grid);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) lambda[b] += gamma(c, c, b);
  std::vector<OneForm> dlambda;  // dlambda[b][a] = d_a Lambda_b
  dlambda.reserve(n);
  for (int b = 0; b < n; ++b) dlambda.push_back(gradient(lambda[b]));

  SymTensor2 ric(grid);
  std::vector<ScalarField> column(n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      for (int c = 0; c < n; ++c) column[c] = gamma(c, a, b);
      ScalarField r = divergence(column);  // d_c Gamma^c_ab
      // d_a Gamma^c_cb, symmetrized in (a, b)
      r.add_scaled(-0.5, dlambda[b][a]);
      r.add_scaled(-0.5, dlambda[a][b]);
      for (int d = 0; d < n; ++d) {
        r.add_product(1.0, lambda[d], gamma(d, a, b));
        for (int c = 0; c < n; ++c)
          r.add_product(-1.0, gamma(c, a, d), gamma(d, c, b));
      }
      ric(a, b) = std::move(r);
    }
  return ric;
}

ScalarField trace_g(const SymTensor2& phi, const Metric& g) {
  const int n = phi.dim();
  require_compatible(n, g);
  ScalarField tr(g.grid());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) tr.add_product(1.0, g.inverse()(a, b), phi(a, b));
  return tr;
}

ScalarField scalar_curvature(const Metric& g, const SymTensor2& ric) {
  return trace_g(ric, g);
}

SymTensor2 scaled_metric(const Metric& g, const ScalarField& f) {
  SymTensor2 out(g.grid());
  for (std::size_t i = 0; i < out.count(); ++i) out[i] = f * g.covariant()[i];
  return out;
}

SymTensor2 traceless_ricci(const Metric& g) {
  SymTensor2 ric = ricci(g);
  const ScalarField s = scalar_curvature(g, ric);
  const double inv_n = 1.0 / g.dim();
  for (std::size_t i = 0; i < ric.count(); ++i)
    ric[i].add_product(-inv_n, s, g.covariant()[i]);
  return ric;
}

// ---- derivatives ------------------------------------------------------------

Tensor2 covariant_derivative_oneform(const Metric& g, const OneForm& theta) {
  const int n = theta.dim();
  require_compatible(n, g);
  Tensor2 out(g.grid());
  for (int b = 0; b < n; ++b) {
    OneForm d = gradient(theta[b]);
    for (int a = 0; a < n; ++a) out(a, b) = std::move(d[a]);
  }
  const Christoffel& gamma = g.connection();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        out(a, b).add_product(-1.0, gamma(c, a, b), theta[c]);
  return out;
}

SymTensor2 lie_derivative_metric(const Metric& g, const VectorField& xi) {
  const Tensor2 nabla = covariant_derivative_oneform(g, flat(g, xi));
  const int n = xi.dim();
  SymTensor2 out(g.grid());
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) out(a, b) = nabla(a, b) + nabla(b, a);
  return out;
}

VectorField sharp(const Metric& g, const OneForm& theta) {
  const int n = theta.dim();
  require_compatible(n, g);
  VectorField xi(g.grid());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) xi[a].add_product(1.0, g.inverse()(a, b), theta[b]);
  return xi;
}

OneForm flat(const Metric& g, const VectorField& xi) {
  const int n = xi.dim();
  require_compatible(n, g);
  OneForm theta(g.grid());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      theta[a].add_product(1.0, g.covariant()(a, b), xi[b]);
  return theta;
}

OneForm contract(const SymTensor2& phi, const VectorField& xi) {
  const int n = phi.dim();
  OneForm out(phi.grid());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out[a].add_product(1.0, phi(a, b), xi[b]);
  return out;
}

// ---- raising ----------------------------------------------------------------

SymTensor2Up raise(const Metric& g, const SymTensor2& phi) {
  const int n = phi.dim();
  require_compatible(n, g);
  const auto& gi = g.inverse();
  // half[a][d] = g^ac phi_cd
  std::vector<ScalarField> half(n * n, ScalarField(g.grid()));
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < n; ++d)
      for (int c = 0; c < n; ++c)
        half[a * n + d].add_product(1.0, gi(a, c), phi(c, d));
  SymTensor2Up out(g.grid());
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      for (int d = 0; d < n; ++d)
        out(a, b).add_product(1.0, half[a * n + d], gi(d, b));
  return out;
}

Tensor2 raise_full(const Metric& g, const Tensor2& t) {
  const int n = t.dim();
  require_compatible(n, g);
  const auto& gi = g.inverse();
  std::vector<ScalarField> half(n * n, ScalarField(g.grid()));
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < n; ++d)
      for (int c = 0; c < n; ++c)
        half[a * n + d].add_product(1.0, gi(a, c), t(c, d));
  Tensor2 out(g.grid());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d)
        out(a, b).add_product(1.0, half[a * n + d], gi(d, b));
  return out;
}

TwoFormUp raise(const Metric& g, const TwoForm& omega) {
  const int n = omega.dim();
  require_compatible(n, g);
  const auto& gi = g.inverse();
  TwoFormUp out(g.grid());
  // omega^ab = sum_{c<d} (g^ac g^bd - g^ad g^bc) omega_cd
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          ScalarField w = gi(a, c) * gi(b, d);
          w.add_product(-1.0, gi(a, d), gi(b, c));
          out(a, b).add_product(1.0, w, omega(c, d));
        }
  return out;
}

// ---- inner products ---------------------------------------------------------

namespace {

double weighted(const Metric& g, const ScalarField& x, const ScalarField& y) {
  require_same_grid(x, y);
  return kernels::active().wdot(g.volume_density().data(), x.data(), y.data(),
                                x.size());
}

}  // namespace

double l2_inner(const ScalarField& x, const ScalarField& y, const Metric& g) {
  return g.grid()->cell_volume() * weighted(g, x, y);
}

double l2_inner(const OneForm& x, const OneForm& y, const Metric& g) {
  const VectorField up = sharp(g, x);
  double s = 0.0;
  for (int a = 0; a < x.dim(); ++a) s += weighted(g, up[a], y[a]);
  return g.grid()->cell_volume() * s;
}

double l2_inner(const VectorField& x, const VectorField& y, const Metric& g) {
  const OneForm down = flat(g, x);
  double s = 0.0;
  for (int a = 0; a < x.dim(); ++a) s += weighted(g, down[a], y[a]);
  return g.grid()->cell_volume() * s;
}

double l2_inner(const SymTensor2& x, const SymTensor2& y, const Metric& g) {
  const SymTensor2Up up = raise(g, x);
  const int n = x.dim();
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      s += (a == b ? 1.0 : 2.0) * weighted(g, up(a, b), y(a, b));
  return g.grid()->cell_volume() * s;
}

double l2_inner(const Tensor2& x, const Tensor2& y, const Metric& g) {
  const Tensor2 up = raise_full(g, x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.count(); ++i) s += weighted(g, up[i], y[i]);
  return g.grid()->cell_volume() * s;
}

double l2_inner(const TwoForm& x, const TwoForm& y, const Metric& g) {
  const TwoFormUp up = raise(g, x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.count(); ++i) s += weighted(g, up[i], y[i]);
  return g.grid()->cell_volume() * s;
}

ScalarField pointwise_norm2(const SymTensor2& x, const Metric& g) {
  const SymTensor2Up up = raise(g, x);
  const int n = x.dim();
  ScalarField out(g.grid());
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      out.add_product(a == b ? 1.0 : 2.0, up(a, b), x(a, b));
  return out;
}

}  // namespace ahlfors
