#include "cavityspdc/schmidt.hh"

#include <algorithm>
#include <cmath>

namespace spdc {

namespace {

// smaller side at or below this goes through the full Jacobi SVD; larger
// problems use the Gram route, whose cubic constant is far smaller
constexpr int jacobi_cutoff = 256;

}  // namespace

SchmidtResult schmidt_decompose(const JSAGrid& jsa, int want_modes) {
  jsa.validate();
  if (!jsa.normalized)
    throw DomainError("schmidt_decompose: input grid must be normalized");
  const Eigen::MatrixXcd& a = jsa.amp;
  const int rows = int(a.rows()), cols = int(a.cols());
  const int small = std::min(rows, cols);
  if (small < 1) throw DomainError("schmidt_decompose: empty grid");
  want_modes = std::min(want_modes, small);

  // total Schmidt weight; the cell measure cancels out of every normalized
  // quantity, so plain squared norms are enough
  const double total = a.squaredNorm();
  if (!(total > 0.0))
    throw DomainError("schmidt_decompose: zero amplitude");

  std::vector<double> lam(small);
  Eigen::MatrixXcd u_modes, v_modes;
  if (small <= jacobi_cutoff) {
    const unsigned opts =
        want_modes > 0 ? Eigen::ComputeThinU | Eigen::ComputeThinV : 0u;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, opts);
    if (svd.info() != Eigen::Success)
      throw NumericalFailure("schmidt_decompose: SVD did not converge");
    for (int k = 0; k < small; ++k) {
      const double s = svd.singularValues()(k);
      lam[k] = s * s;
    }
    if (want_modes > 0) {
      u_modes = svd.matrixU().leftCols(want_modes);
      v_modes = svd.matrixV().leftCols(want_modes);
    }
  } else {
    // Gram matrix of the smaller side; its eigenvalues are the squared
    // singular values and the full spectrum comes back in one solve
    const bool idler_small = cols <= rows;
    const Eigen::MatrixXcd gram =
        idler_small ? Eigen::MatrixXcd(a.adjoint() * a)
                    : Eigen::MatrixXcd(a * a.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        gram, want_modes > 0 ? Eigen::ComputeEigenvectors
                             : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw NumericalFailure(
          "schmidt_decompose: eigendecomposition did not converge");
    // ascending from the solver; flip and clamp the roundoff negatives
    for (int k = 0; k < small; ++k)
      lam[k] = std::max(0.0, es.eigenvalues()(small - 1 - k));
    if (want_modes > 0) {
      Eigen::MatrixXcd lead(small, want_modes);
      for (int k = 0; k < want_modes; ++k)
        lead.col(k) = es.eigenvectors().col(small - 1 - k);
      // the other side's modes follow from psi applied to these
      if (idler_small) {
        v_modes = lead;
        u_modes = a * lead;
      } else {
        u_modes = lead;
        v_modes = a.adjoint() * lead;
      }
      Eigen::MatrixXcd& derived = idler_small ? u_modes : v_modes;
      for (int k = 0; k < want_modes; ++k) {
        const double nrm = derived.col(k).norm();
        if (nrm > 0.0) derived.col(k) /= nrm;
      }
    }
  }

  SchmidtResult out;
  for (double& l : lam) l /= total;
  // keep coefficients down to 1e-12 of the leading one, then extend if the
  // dropped tail would still be visible at the 1e-9 bookkeeping level
  const double floor = 1e-12 * lam[0];
  int rank = 0;
  double kept = 0.0;
  while (rank < small && lam[rank] >= floor) kept += lam[rank++];
  while (rank < small && 1.0 - kept >= 1e-9) kept += lam[rank++];
  out.lambda.assign(lam.begin(), lam.begin() + rank);
  out.rank = rank;
  out.residual = std::max(0.0, 1.0 - kept);

  double p = 0.0;
  for (double l : out.lambda) p += l * l;
  out.purity = p;
  out.schmidt_K = 1.0 / p;
  if (want_modes > 0) {
    out.signal_modes = u_modes.leftCols(std::min(want_modes, rank));
    out.idler_modes = v_modes.leftCols(std::min(want_modes, rank));
  }
  return out;
}

double schmidt_number(const SchmidtResult& r) { return r.schmidt_K; }

double purity(const SchmidtResult& r) { return r.purity; }

double g2_unheralded_from_K(double K) {
  if (!(K >= 1.0))
    throw DomainError("g2_unheralded_from_K: K must be >= 1");
  return 1.0 + 1.0 / K;
}

double K_from_g2(double g2) {
  if (!(g2 > 1.0 && g2 <= 2.0))
    throw DomainError("K_from_g2: g2 must lie in (1, 2]");
  return 1.0 / (g2 - 1.0);
}

}  // namespace spdc
