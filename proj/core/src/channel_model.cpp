#include "covert_mimo/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "covert_mimo/errors.hpp"

namespace covert_mimo {
namespace {

Eigen::Index numerical_rank(const Eigen::MatrixXd& mat, double rank_rtol) {
  if (mat.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  double tol = rank_rtol * sv(0);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > tol) ++r;
  return r;
}

}  // namespace

void ChannelPair::validate() const {
  if (h_b.rows() < 1 || h_b.cols() < 1) {
    throw DimensionMismatch("ChannelPair: H_b must be non-empty");
  }
  if (h_w.rows() < 1 || h_w.cols() < 1) {
    throw DimensionMismatch("ChannelPair: H_w must be non-empty");
  }
  if (h_b.cols() != h_w.cols()) {
    throw DimensionMismatch(
        "ChannelPair: H_b and H_w must share the transmit dimension (columns), got " +
        std::to_string(h_b.cols()) + " vs " + std::to_string(h_w.cols()));
  }
  if (!(sigma_b2 > 0.0)) {
    throw DomainError("ChannelPair: sigma_b2 must be positive");
  }
  if (!(sigma_w2 > 0.0)) {
    throw DomainError("ChannelPair: sigma_w2 must be positive");
  }
}

GsvdDecomposition GsvdDecomposition::from_gains(Eigen::VectorXd lambda_b,
                                                Eigen::VectorXd lambda_w) {
  if (lambda_b.size() != lambda_w.size() || lambda_b.size() == 0) {
    throw DimensionMismatch("from_gains: gain vectors must match and be non-empty");
  }
  for (Eigen::Index j = 0; j < lambda_b.size(); ++j) {
    if (!(lambda_w(j) > 0.0)) {
      throw DomainError("from_gains: lambda_w entries must be positive");
    }
    if (lambda_b(j) < 0.0) {
      throw DomainError("from_gains: lambda_b entries must be non-negative");
    }
  }
  const Eigen::Index m = lambda_b.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return lambda_b(a) / lambda_w(a) > lambda_b(b) / lambda_w(b);
  });

  GsvdDecomposition out;
  out.lambda_b.resize(m);
  out.lambda_w.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    out.lambda_b(j) = lambda_b(order[static_cast<std::size_t>(j)]);
    out.lambda_w(j) = lambda_w(order[static_cast<std::size_t>(j)]);
  }
  out.u_b = Eigen::MatrixXd::Identity(m, m);
  out.u_w = Eigen::MatrixXd::Identity(m, m);
  out.v = Eigen::MatrixXd::Identity(m, m);
  return out;
}

Eigen::VectorXd GsvdDecomposition::gain_ratio() const {
  return lambda_b.array() / lambda_w.array();
}

double GsvdDecomposition::trace_ratio2() const {
  return (lambda_b.array() / lambda_w.array()).square().sum();
}

double GsvdDecomposition::trace_ratio4() const {
  return (lambda_b.array() / lambda_w.array()).square().square().sum();
}

GsvdDecomposition decompose_gsvd(const ChannelPair& pair, double rank_rtol) {
  pair.validate();
  const Eigen::Index n_a = pair.h_b.cols();
  const Eigen::Index n_b = pair.h_b.rows();
  const Eigen::Index n_w = pair.h_w.rows();

  Eigen::Index rb = numerical_rank(pair.h_b, rank_rtol);
  if (rb < n_a) {
    throw RankDeficient("H_b", rb,
                        "decompose_gsvd: H_b has numerical rank " +
                            std::to_string(rb) + " < " + std::to_string(n_a));
  }
  Eigen::Index rw = numerical_rank(pair.h_w, rank_rtol);
  if (rw < n_a) {
    throw RankDeficient("H_w", rw,
                        "decompose_gsvd: H_w has numerical rank " +
                            std::to_string(rw) + " < " + std::to_string(n_a));
  }

  // QR of the stacked matrix fixes a common row space; the CS decomposition
  // of the two orthonormal blocks then splits it between the receivers.
  Eigen::MatrixXd g(n_b + n_w, n_a);
  g.topRows(n_b) = pair.h_b;
  g.bottomRows(n_w) = pair.h_w;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n_b + n_w, n_a);
  Eigen::MatrixXd r =
      qr.matrixQR().topRows(n_a).triangularView<Eigen::Upper>();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(q.topRows(n_b),
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::MatrixXd u_b = svd.matrixU();
  Eigen::MatrixXd w1 = svd.matrixV();
  Eigen::VectorXd c = svd.singularValues().cwiseMin(1.0);

  // Deterministic sign convention: the dominant entry of each V column is
  // made positive. Flipping a W1 column flips the matching U_b column and,
  // through B = Q2 W1 below, the matching U_w column.
  Eigen::MatrixXd v = r.transpose() * w1;
  for (Eigen::Index j = 0; j < n_a; ++j) {
    Eigen::Index imax = 0;
    v.col(j).cwiseAbs().maxCoeff(&imax);
    if (v(imax, j) < 0.0) {
      w1.col(j) *= -1.0;
      u_b.col(j) *= -1.0;
      v.col(j) *= -1.0;
    }
  }

  // B has orthogonal columns with norms s_j = sqrt(1 - c_j^2); a QR pass
  // recovers an exactly orthonormal U_w and the s_j as |diag(R_B)|.
  Eigen::MatrixXd b = q.bottomRows(n_w) * w1;
  Eigen::HouseholderQR<Eigen::MatrixXd> qrb(b);
  Eigen::MatrixXd u_w = qrb.householderQ() * Eigen::MatrixXd::Identity(n_w, n_a);
  Eigen::VectorXd s(n_a);
  for (Eigen::Index j = 0; j < n_a; ++j) {
    double rjj = qrb.matrixQR()(j, j);
    s(j) = std::abs(rjj);
    if (rjj < 0.0) u_w.col(j) *= -1.0;
  }

  // SVD already orders c descending, hence c/s descending; re-sort defensively
  // so the ordering postcondition never depends on that.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n_a));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return c(x) * s(y) > c(y) * s(x);
  });

  GsvdDecomposition out;
  out.u_b.resize(n_b, n_a);
  out.u_w.resize(n_w, n_a);
  out.v.resize(n_a, n_a);
  out.lambda_b.resize(n_a);
  out.lambda_w.resize(n_a);
  for (Eigen::Index j = 0; j < n_a; ++j) {
    Eigen::Index src = order[static_cast<std::size_t>(j)];
    out.u_b.col(j) = u_b.col(src);
    out.u_w.col(j) = u_w.col(src);
    out.v.col(j) = v.col(src);
    out.lambda_b(j) = c(src);
    out.lambda_w(j) = s(src);
  }
  return out;
}

SubspaceReport classify_subspaces(const ChannelPair& pair, double rank_rtol) {
  pair.validate();
  const Eigen::Index n_a = pair.h_b.cols();

  Eigen::Index rb = numerical_rank(pair.h_b, rank_rtol);
  Eigen::Index rw = numerical_rank(pair.h_w, rank_rtol);
  Eigen::MatrixXd g(pair.h_b.rows() + pair.h_w.rows(), n_a);
  g.topRows(pair.h_b.rows()) = pair.h_b;
  g.bottomRows(pair.h_w.rows()) = pair.h_w;
  Eigen::Index m = numerical_rank(g, rank_rtol);

  SubspaceReport rep;
  rep.m = m;
  rep.p = m - rw;
  rep.q = rb + rw - m;
  rep.dim_s_w = m - rb;
  rep.dim_s_n = n_a - m;
  rep.square_root_law_holds =
      rep.p == 0 && rep.dim_s_w == 0 && rep.dim_s_n == 0;
  return rep;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& mat, double rank_rtol) {
  if (mat.size() == 0) {
    throw DimensionMismatch("pseudo_inverse: empty matrix");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double tol = sv.size() > 0 ? rank_rtol * sv(0) : 0.0;
  Eigen::VectorXd inv = sv;
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    inv(i) = sv(i) > tol ? 1.0 / sv(i) : 0.0;
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::MatrixXd precode(const GsvdDecomposition& gsvd,
                        const Eigen::MatrixXd& x_tilde) {
  if (x_tilde.rows() != gsvd.subchannels()) {
    throw DimensionMismatch("precode: input rows must equal sub-channel count");
  }
  if (gsvd.v.rows() != gsvd.v.cols()) {
    throw DimensionMismatch("precode: V must be square (full-rank decomposition)");
  }
  // x = V^-T x_tilde
  return gsvd.v.transpose().partialPivLu().solve(x_tilde);
}

}  // namespace covert_mimo
