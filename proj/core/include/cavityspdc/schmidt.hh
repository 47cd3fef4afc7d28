#pragma once
// Schmidt decomposition of a sampled joint amplitude and the derived
// entanglement numbers. The decomposition is the SVD of the amplitude
// matrix; squared singular values, normalized to the full matrix weight,
// are the Schmidt coefficients.
#include <vector>

#include <Eigen/Dense>

#include "cavityspdc/errors.hh"
#include "cavityspdc/spectral.hh"

namespace spdc {

struct SchmidtResult {
  // coefficients in descending order, truncated; they sum to 1 within 1e-9
  // because the truncation rule keeps the residual below 1e-9
  std::vector<double> lambda;
  double schmidt_K = 1.0;   // 1 / sum lambda^2
  double purity = 1.0;      // sum lambda^2, stored once; K = 1/purity
  int rank = 0;             // modes kept
  double residual = 0.0;    // weight dropped by truncation
  // optional mode functions, orthonormal columns; empty unless requested
  Eigen::MatrixXcd signal_modes;
  Eigen::MatrixXcd idler_modes;
};

// Decompose a normalized grid. Mode functions are computed for the leading
// `want_modes` coefficients when > 0. The backend is an exact dense solve:
// a one-sided Jacobi SVD up to 256 points on the smaller axis, and above
// that the eigendecomposition of the smaller Gram matrix, which returns the
// identical spectrum at a fraction of the cost. Throws NumericalFailure if
// the backend does not converge, DomainError on non-normalized input.
SchmidtResult schmidt_decompose(const JSAGrid& jsa, int want_modes = 0);

double schmidt_number(const SchmidtResult& r);  // K
double purity(const SchmidtResult& r);          // P = 1/K

// Unheralded second-order autocorrelation of one arm at zero delay for a
// thermal mixture of K equally useful modes: g2 = 1 + 1/K.
double g2_unheralded_from_K(double K);

// Inverse bridge, K = 1 / (g2 - 1); only defined on g2 in (1, 2].
double K_from_g2(double g2);

}  // namespace spdc
