#include "covert_mimo/covertness.hpp"

#include <cmath>
#include <string>

#include "covert_mimo/accumulate.hpp"
#include "covert_mimo/errors.hpp"
#include "covert_mimo/gaussian.hpp"
#include "covert_mimo/rng.hpp"

namespace covert_mimo {
namespace {

constexpr std::uint64_t kMixStreamTag = 0x6d697853u;
constexpr std::uint64_t kNullStreamTag = 0x6e756c6cu;

void check_profile(const Eigen::VectorXd& lambda_w, const Eigen::VectorXd& rho) {
  if (lambda_w.size() != rho.size() || lambda_w.size() == 0) {
    throw DimensionMismatch("covertness: gain/power vectors must match");
  }
}

double two_sample_half_width(double p1, double p0, std::uint64_t per_side) {
  if (per_side == 0) return 0.0;
  return 1.96 * std::sqrt((p1 * (1.0 - p1) + p0 * (1.0 - p0)) / double(per_side));
}

}  // namespace

double product_form_v(const Eigen::VectorXd& lambda_w, const Eigen::VectorXd& rho,
                      double sigma_w2, double n) {
  check_profile(lambda_w, rho);
  if (!(sigma_w2 > 0.0)) throw DomainError("product_form_v: sigma_w2 must be positive");
  if (!(n >= 1.0)) throw DomainError("product_form_v: n must be >= 1");
  double quad = (lambda_w.array().square().square() * rho.array().square()).sum() /
                (4.0 * sigma_w2 * sigma_w2);
  return 1.0 - 2.0 * qfunc(std::sqrt(0.5 * n * quad));
}

double product_form_v(const GsvdDecomposition& gsvd,
                      const Constellation& constellation, double sigma_w2) {
  return product_form_v(gsvd.lambda_w, constellation.rho, sigma_w2,
                        double(constellation.n));
}

double mixture_llr(const Eigen::VectorXd& z_letter,
                   const Constellation& constellation,
                   const GsvdDecomposition& gsvd, double sigma_w2) {
  if (z_letter.size() != gsvd.subchannels() ||
      constellation.rho.size() != gsvd.subchannels()) {
    throw DimensionMismatch("mixture_llr: dimension mismatch");
  }
  double llr = 0.0;
  for (Eigen::Index j = 0; j < z_letter.size(); ++j) {
    double lw = gsvd.lambda_w(j);
    llr += -lw * lw * constellation.rho(j) / (2.0 * sigma_w2) +
           logcosh(lw * constellation.amplitude(j) * z_letter(j) / sigma_w2);
  }
  return llr;
}

CovertnessEstimate v_product_mc(const Constellation& constellation,
                                const GsvdDecomposition& gsvd, double sigma_w2,
                                std::uint64_t trials, std::uint64_t seed) {
  if (trials < 2) throw DomainError("v_product_mc: trials must be >= 2");
  const Eigen::Index m = gsvd.subchannels();
  const std::int64_t n = constellation.n;
  const double sw = std::sqrt(sigma_w2);
  const std::uint64_t per_side = trials / 2;

  // Per-letter terms of the log likelihood ratio, precomputed.
  Eigen::VectorXd drift(m), scale(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    double lw = gsvd.lambda_w(j);
    drift(j) = -lw * lw * constellation.rho(j) / (2.0 * sigma_w2);
    scale(j) = lw * constellation.amplitude(j) / sigma_w2;
  }
  const double drift_total = drift.sum() * double(n);

  auto exceeds = [&](std::uint64_t stream, bool under_mixture) {
    NormalSampler noise(stream);
    Xoshiro256pp signs(derive_seed(stream, 1));
    KahanSum sum;
    for (std::int64_t i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        double z = sw * noise();
        if (under_mixture) {
          double a = signs.bit() ? constellation.amplitude(j)
                                 : -constellation.amplitude(j);
          z += gsvd.lambda_w(j) * a;
        }
        sum.add(logcosh(scale(j) * z));
      }
    }
    return sum.value() + drift_total >= 0.0;
  };

  std::uint64_t mix_base = derive_seed(seed, kMixStreamTag);
  std::uint64_t null_base = derive_seed(seed, kNullStreamTag);
  std::uint64_t count_mix = mc_count(per_side, [&](std::uint64_t t) {
    return exceeds(derive_seed(mix_base, t), true);
  });
  std::uint64_t count_null = mc_count(per_side, [&](std::uint64_t t) {
    return exceeds(derive_seed(null_base, t), false);
  });

  double p1 = double(count_mix) / double(per_side);
  double p0 = double(count_null) / double(per_side);
  CovertnessEstimate est;
  est.value = p1 - p0;
  est.half_width = two_sample_half_width(p1, p0, per_side);
  est.trials = 2 * per_side;
  return est;
}

CovertnessEstimate v_codebook_mc(const Codebook& codebook,
                                 const GsvdDecomposition& gsvd, double sigma_w2,
                                 std::uint64_t trials, std::uint64_t seed,
                                 std::int64_t word_cap) {
  if (codebook.words.empty()) {
    throw EmptyCodebook("v_codebook_mc: codebook has no words");
  }
  if (trials < 2) throw DomainError("v_codebook_mc: trials must be >= 2");
  const std::int64_t total = codebook.total_words();
  if (total > word_cap) {
    throw BudgetExceeded("v_codebook_mc: M*K = " + std::to_string(total) +
                         " exceeds word cap " + std::to_string(word_cap));
  }
  const Eigen::Index m = gsvd.subchannels();
  const std::int64_t n = codebook.n;
  const double sw = std::sqrt(sigma_w2);
  const std::uint64_t per_side = trials / 2;

  // Rows of wmat are vec(diag(lambda_w) * word) / sigma_w2, so that the
  // per-word log density ratio is wmat * vec(z) - energy (energy absorbs the
  // 0.5 |lambda_w x|^2 / sigma_w2 term).
  Eigen::MatrixXd wmat(total, m * n);
  Eigen::VectorXd energy(total);
  for (std::int64_t w = 0; w < total; ++w) {
    const Eigen::MatrixXd& x = codebook.words[std::size_t(w)];
    Eigen::MatrixXd s = gsvd.lambda_w.asDiagonal() * x;
    wmat.row(w) =
        Eigen::Map<Eigen::VectorXd>(s.data(), m * n).transpose() / sigma_w2;
    energy(w) = 0.5 * (s.array().square()).sum() / sigma_w2;
  }
  const double log_total = std::log(double(total));

  auto exceeds = [&](std::uint64_t stream, bool under_code) {
    NormalSampler noise(stream);
    Eigen::VectorXd z(m * n);
    std::int64_t sent = 0;
    if (under_code) {
      Xoshiro256pp pick(derive_seed(stream, 1));
      sent = std::int64_t(pick() % std::uint64_t(total));
    }
    for (std::int64_t i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        double val = sw * noise();
        if (under_code) {
          val += gsvd.lambda_w(j) * codebook.words[std::size_t(sent)](j, i);
        }
        z(i * m + j) = val;
      }
    }
    Eigen::VectorXd scores = wmat * z - energy;
    double peak = scores.maxCoeff();
    double lse = 0.0;
    for (std::int64_t w = 0; w < total; ++w) lse += std::exp(scores(w) - peak);
    double llr = peak + std::log(lse) - log_total;
    return llr >= 0.0;
  };

  std::uint64_t mix_base = derive_seed(seed, kMixStreamTag);
  std::uint64_t null_base = derive_seed(seed, kNullStreamTag);
  std::uint64_t count_mix = mc_count(per_side, [&](std::uint64_t t) {
    return exceeds(derive_seed(mix_base, t), true);
  });
  std::uint64_t count_null = mc_count(per_side, [&](std::uint64_t t) {
    return exceeds(derive_seed(null_base, t), false);
  });

  double p1 = double(count_mix) / double(per_side);
  double p0 = double(count_null) / double(per_side);
  CovertnessEstimate est;
  est.value = p1 - p0;
  est.half_width = two_sample_half_width(p1, p0, per_side);
  est.trials = 2 * per_side;
  return est;
}

double kl_per_letter(const Eigen::VectorXd& lambda_w, const Eigen::VectorXd& rho,
                     double sigma_w2) {
  check_profile(lambda_w, rho);
  if (!(sigma_w2 > 0.0)) throw DomainError("kl_per_letter: sigma_w2 must be positive");
  double kl = 0.0;
  for (Eigen::Index j = 0; j < lambda_w.size(); ++j) {
    double u = lambda_w(j) * lambda_w(j) * rho(j) / sigma_w2;
    kl += 0.5 * (u - std::log1p(u));
  }
  return kl;
}

double kl_per_letter(const Constellation& constellation,
                     const GsvdDecomposition& gsvd, double sigma_w2) {
  return kl_per_letter(gsvd.lambda_w, constellation.rho, sigma_w2);
}

}  // namespace covert_mimo
