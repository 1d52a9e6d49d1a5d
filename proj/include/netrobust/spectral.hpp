#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Eigenvalues>

#include "netrobust/error.hpp"
#include "netrobust/graph.hpp"

namespace netrobust {

inline constexpr double kDefaultZeroTolerance = 1e-9;

/// Laplacian eigenvalues, ascending, with the zero/non-zero split.
struct Spectrum {
  std::vector<double> eigenvalues;
  double zero_tolerance = kDefaultZeroTolerance;
  std::size_t zero_count = 0;
  std::size_t nonzero_count = 0;
  double largest = 0.0;
};

/// All eigenvalues of a Laplacian. An eigenvalue is zero when
/// |lambda| <= max(tol, tol * lambda_max); those are stored as exactly 0.
inline Spectrum laplacian_spectrum(const SymmetricMatrix& l,
                                   double zero_tolerance = kDefaultZeroTolerance) {
  if (!(zero_tolerance > 0.0)) throw std::invalid_argument("zero_tolerance must be positive");
  Spectrum s;
  s.zero_tolerance = zero_tolerance;
  const auto n = static_cast<Eigen::Index>(l.size());
  if (n == 0) return s;

  Eigen::MatrixXd dense(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) dense(i, j) = l(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");

  const auto& values = solver.eigenvalues();
  s.eigenvalues.assign(values.data(), values.data() + n);
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  const double top = std::max(0.0, s.eigenvalues.back());
  const double cutoff = std::max(zero_tolerance, zero_tolerance * top);
  for (double& lambda : s.eigenvalues) {
    if (std::abs(lambda) <= cutoff) {
      lambda = 0.0;
      ++s.zero_count;
    } else if (lambda < 0.0) {
      throw NumericalError("Laplacian eigenvalue " + std::to_string(lambda) + " is negative beyond tolerance");
    }
  }
  s.nonzero_count = s.eigenvalues.size() - s.zero_count;
  s.largest = s.eigenvalues.back();
  return s;
}

inline Spectrum laplacian_spectrum(const Graph& g, double zero_tolerance = kDefaultZeroTolerance) {
  return laplacian_spectrum(laplacian(g), zero_tolerance);
}

inline std::size_t count_nonzero_eigenvalues(const Spectrum& s) noexcept { return s.nonzero_count; }

/// Multiplicity of the zero eigenvalue, i.e. the number of connected components.
inline std::size_t spectral_component_count(const Spectrum& s) noexcept { return s.zero_count; }

inline double largest_eigenvalue(const Spectrum& s) noexcept { return s.largest; }

}  // namespace netrobust
