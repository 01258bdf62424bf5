#pragma once
// Uniform periodic grid on the n-torus with Fourier pseudo-spectral
// differentiation and rectangle-rule quadrature.
//
// Storage is row-major with axis 0 slowest. Point i has coordinates
// x_a = i_a * L_a / N_a. Transforms are FFTW r2c/c2r plans built with
// FFTW_ESTIMATE so that the same grid always runs the same algorithm and
// results are bitwise reproducible.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "ahlfors/errors.hpp"

namespace ahlfors {

struct GridSpec {
  int dimension = 2;
  std::vector<int> resolution;  // N_a, even, >= 8
  std::vector<double> periods;  // L_a > 0; empty means 2*pi on every axis

  // Throws InvalidArgument on any violated invariant.
  void validate() const;
};

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

class Grid {
 public:
  static GridPtr create(GridSpec spec);
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  const GridSpec& spec() const { return spec_; }
  int dim() const { return spec_.dimension; }
  std::size_t size() const { return size_; }
  int points(int axis) const { return spec_.resolution[axis]; }
  double period(int axis) const { return spec_.periods[axis]; }
  double spacing(int axis) const { return period(axis) / points(axis); }
  double cell_volume() const { return cell_volume_; }
  double volume() const;

  // Largest admissible Fourier mode for inputs: min_a N_a / 4.
  int band_limit() const;
  // Largest angular wavenumber 2*pi*(N_a/2)/L_a over all axes.
  double max_wavenumber() const;

  // Multi-index of flat point index p.
  void unflatten(std::size_t p, std::span<int> index) const;
  void coordinates(std::size_t p, std::span<double> x) const;
  // 2*pi * sum_a k_a x_a / L_a at point p, for an integer wavevector.
  double phase(std::span<const int> wavevector, std::size_t p) const;

  // Number of complex coefficients of the half spectrum.
  std::size_t spectral_size() const { return spectral_size_; }
  // Angular wavenumber along `axis` for every complex coefficient, with the
  // Nyquist entry set to zero.
  std::span<const double> wavenumbers(int axis) const {
    return wavenumbers_[axis];
  }

  // Unnormalized forward transform into spectral_size() coefficients.
  void forward(std::span<const double> in,
               std::span<std::complex<double>> out) const;
  // Inverse transform including the 1/N normalization. `in` is destroyed.
  void backward(std::span<std::complex<double>> in,
                std::span<double> out) const;

 private:
  explicit Grid(GridSpec spec);

  GridSpec spec_;
  std::size_t size_ = 0;
  std::size_t spectral_size_ = 0;
  double cell_volume_ = 0.0;
  std::vector<std::vector<double>> wavenumbers_;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

}  // namespace ahlfors
