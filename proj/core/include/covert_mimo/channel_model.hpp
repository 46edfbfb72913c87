#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace covert_mimo {

inline constexpr double kDefaultRankRtol = 1e-10;

// A two-receiver Gaussian channel: the intended receiver sees
// y = H_b x + N(0, sigma_b2 I), the adversary sees z = H_w x + N(0, sigma_w2 I).
struct ChannelPair {
  Eigen::MatrixXd h_b;  // N_b x N_a
  Eigen::MatrixXd h_w;  // N_w x N_a
  double sigma_b2 = 1.0;
  double sigma_w2 = 1.0;

  void validate() const;  // throws DimensionMismatch / DomainError
};

// Joint diagonalization H_b = U_b diag(lambda_b) V^T, H_w = U_w diag(lambda_w) V^T
// with a shared invertible V and orthonormal-column U_b, U_w. The full-rank
// decomposition path normalizes lambda_b(j)^2 + lambda_w(j)^2 = 1; every
// physical quantity downstream depends only on the ratios lambda_b/lambda_w
// and on V, so other gain conventions (see from_gains) are equally valid
// coordinate systems.
struct GsvdDecomposition {
  Eigen::MatrixXd u_b;       // N_b x m
  Eigen::MatrixXd u_w;       // N_w x m
  Eigen::VectorXd lambda_b;  // m, >= 0, sorted by descending lambda_b/lambda_w
  Eigen::VectorXd lambda_w;  // m, > 0
  Eigen::MatrixXd v;         // N_a x m, invertible when m == N_a

  // Interprets explicit per-subchannel gains as their own coordinate system
  // (U_b = U_w = V = I). Entries of lambda_w must be positive.
  static GsvdDecomposition from_gains(Eigen::VectorXd lambda_b,
                                      Eigen::VectorXd lambda_w);

  Eigen::Index subchannels() const { return lambda_b.size(); }
  Eigen::VectorXd gain_ratio() const;  // lambda_b ./ lambda_w
  double trace_ratio2() const;         // sum (lambda_b/lambda_w)^2
  double trace_ratio4() const;         // sum (lambda_b/lambda_w)^4
};

// CS-decomposition route: QR of the stacked (N_b+N_w) x N_a matrix, then a CS
// decomposition of the two orthonormal blocks. Requires both H_b and H_w to
// have full column rank (throws RankDeficient otherwise, naming the matrix).
GsvdDecomposition decompose_gsvd(const ChannelPair& pair,
                                 double rank_rtol = kDefaultRankRtol);

// Dimensions of the four invariant subspaces of transmit space:
//   p       directions seen only by the intended receiver
//   q       directions seen by both receivers
//   dim_s_w directions seen only by the adversary
//   dim_s_n directions seen by neither
struct SubspaceReport {
  Eigen::Index m = 0;  // rank of the stacked matrix [H_b; H_w]
  Eigen::Index p = 0;
  Eigen::Index q = 0;
  Eigen::Index dim_s_w = 0;
  Eigen::Index dim_s_n = 0;
  bool square_root_law_holds = false;  // p == 0 && m == p + q && N_a == m
};

SubspaceReport classify_subspaces(const ChannelPair& pair,
                                  double rank_rtol = kDefaultRankRtol);

// Moore-Penrose pseudo-inverse; singular values below rank_rtol * sigma_max
// are treated as zero.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& mat,
                               double rank_rtol = kDefaultRankRtol);

// Maps a sub-channel input block (m x n) to the physical antenna-domain input
// x = V^-T x_tilde, so that U_b^T H_b x == diag(lambda_b) x_tilde.
Eigen::MatrixXd precode(const GsvdDecomposition& gsvd,
                        const Eigen::MatrixXd& x_tilde);

}  // namespace covert_mimo
