#include "covert_mimo/covert_code.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "covert_mimo/capacity.hpp"
#include "covert_mimo/errors.hpp"
#include "covert_mimo/rng.hpp"

namespace covert_mimo {
namespace {

constexpr std::uint64_t kWordStreamTag = 0x636f6465u;   // codebook entries
constexpr std::uint64_t kNoiseStreamTag = 0x6e6f6973u;  // channel noise
constexpr std::uint64_t kTrialStreamTag = 0x7472696cu;  // reliability trials

double binomial_half_width(double rate, std::uint64_t trials) {
  if (trials == 0) return 0.0;
  return 1.96 * std::sqrt(rate * (1.0 - rate) / double(trials));
}

}  // namespace

CodeSizing size_code(const GsvdDecomposition& gsvd, const AllocationResult& alloc,
                     double sigma_b2, double sigma_w2, std::int64_t n,
                     double delta, double xi) {
  if (!(xi > 0.0) || !(xi < 1.0)) {
    throw DomainError("size_code: xi must lie strictly inside (0, 1)");
  }
  if (n < 1) throw DomainError("size_code: n must be >= 1");
  auto budget = CovertnessBudget::from_delta(delta);
  double scale = std::sqrt(double(n)) * budget.d;

  double bob = (gsvd.lambda_b.array().square() * alloc.t.array()).sum() /
               (2.0 * sigma_b2);
  double willie = (gsvd.lambda_w.array().square() * alloc.t.array()).sum() /
                  (2.0 * sigma_w2);

  CodeSizing sizing;
  sizing.log_m = (1.0 - xi) * scale * bob;
  sizing.log_mk = (1.0 + xi) * scale * willie;
  // Defensive: a genuine violation is macroscopic. The tolerance keeps the
  // zero-key boundary (log MK mathematically equal to log M) from tripping
  // the check through rounding alone.
  double slack = 1e-9 * std::max(1.0, std::abs(sizing.log_m));
  if (sizing.log_mk < sizing.log_m - slack) {
    throw KeySizeNegative(
        "size_code: log MK < log M (implied key size is negative); the "
        "adversary-side throughput cannot cover the message size");
  }
  sizing.log_mk = std::max(sizing.log_mk, sizing.log_m);
  return sizing;
}

std::int64_t word_count(double log_size, std::int64_t cap) {
  if (cap < 2) throw DomainError("word_count: cap must be >= 2");
  double raw = std::floor(std::exp(log_size));
  if (!(raw >= 2.0)) return 2;
  if (raw >= double(cap)) return cap;
  return std::int64_t(raw);
}

const Eigen::MatrixXd& Codebook::word(std::int64_t message,
                                      std::int64_t key) const {
  if (message < 0 || message >= m_words) {
    throw IndexOutOfRange("Codebook::word: message " + std::to_string(message) +
                          " outside [0, " + std::to_string(m_words) + ")");
  }
  if (key < 0 || key >= k_keys) {
    throw IndexOutOfRange("Codebook::word: key " + std::to_string(key) +
                          " outside [0, " + std::to_string(k_keys) + ")");
  }
  return words[std::size_t(key * m_words + message)];
}

Codebook generate_codebook(const Constellation& constellation,
                           std::int64_t m_words, std::int64_t k_keys,
                           std::uint64_t seed, std::size_t scalar_budget) {
  if (m_words < 1 || k_keys < 1) {
    throw DomainError("generate_codebook: M and K must be >= 1");
  }
  const std::int64_t m = constellation.rho.size();
  const std::int64_t n = constellation.n;
  if (m < 1 || n < 1) {
    throw DomainError("generate_codebook: constellation is empty");
  }
  std::size_t scalars = std::size_t(m_words) * std::size_t(k_keys) *
                        std::size_t(m) * std::size_t(n);
  if (scalars > scalar_budget) {
    throw BudgetExceeded("generate_codebook: M*K*m*n = " +
                         std::to_string(scalars) + " exceeds budget " +
                         std::to_string(scalar_budget));
  }

  Codebook cb;
  cb.m_words = m_words;
  cb.k_keys = k_keys;
  cb.n = n;
  cb.constellation = constellation;
  cb.words.resize(std::size_t(m_words * k_keys));
  for (std::int64_t w = 0; w < m_words * k_keys; ++w) {
    Xoshiro256pp rng(derive_seed(derive_seed(seed, kWordStreamTag), std::uint64_t(w)));
    Eigen::MatrixXd& word = cb.words[std::size_t(w)];
    word.resize(m, n);
    for (std::int64_t i = 0; i < n; ++i) {
      for (std::int64_t j = 0; j < m; ++j) {
        word(j, i) = rng.bit() ? constellation.amplitude(j)
                               : -constellation.amplitude(j);
      }
    }
  }
  return cb;
}

TransmissionTrace transmit(const Codebook& codebook, std::int64_t message,
                           std::int64_t key, const GsvdDecomposition& gsvd,
                           double sigma_b2, double sigma_w2,
                           std::uint64_t seed) {
  const Eigen::MatrixXd& x = codebook.word(message, key);
  if (x.rows() != gsvd.subchannels()) {
    throw DimensionMismatch("transmit: codebook/channel sub-channel mismatch");
  }
  const double sb = std::sqrt(sigma_b2);
  const double sw = std::sqrt(sigma_w2);

  TransmissionTrace trace;
  trace.message = message;
  trace.key = key;
  trace.y_tilde = gsvd.lambda_b.asDiagonal() * x;
  trace.z_tilde = gsvd.lambda_w.asDiagonal() * x;
  NormalSampler noise(derive_seed(seed, kNoiseStreamTag));
  for (Eigen::Index i = 0; i < trace.y_tilde.cols(); ++i) {
    for (Eigen::Index j = 0; j < trace.y_tilde.rows(); ++j) {
      trace.y_tilde(j, i) += sb * noise();
    }
  }
  for (Eigen::Index i = 0; i < trace.z_tilde.cols(); ++i) {
    for (Eigen::Index j = 0; j < trace.z_tilde.rows(); ++j) {
      trace.z_tilde(j, i) += sw * noise();
    }
  }
  return trace;
}

std::int64_t decode(const Codebook& codebook, std::int64_t key,
                    const Eigen::MatrixXd& y_tilde,
                    const GsvdDecomposition& gsvd, double sigma_b2) {
  if (codebook.words.empty()) {
    throw EmptyCodebook("decode: codebook has no words");
  }
  if (key < 0 || key >= codebook.k_keys) {
    throw IndexOutOfRange("decode: key " + std::to_string(key) + " outside [0, " +
                          std::to_string(codebook.k_keys) + ")");
  }
  if (y_tilde.rows() != gsvd.subchannels() || y_tilde.cols() != codebook.n) {
    throw DimensionMismatch("decode: observation shape mismatch");
  }

  // log-likelihood up to a common constant:
  //   (sum_ij lambda_b_j x_ij y_ij - 0.5 sum_ij lambda_b_j^2 x_ij^2) / sigma_b2
  Eigen::MatrixXd scaled_y = gsvd.lambda_b.asDiagonal() * y_tilde;
  std::int64_t best = 0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (std::int64_t l = 0; l < codebook.m_words; ++l) {
    const Eigen::MatrixXd& x = codebook.word(l, key);
    double cross = (x.array() * scaled_y.array()).sum();
    double energy =
        (gsvd.lambda_b.array().square() *x.array().square().rowwise().sum())
            .sum();
    double ll = (cross - 0.5 * energy) / sigma_b2;
    if (ll > best_ll) {
      best_ll = ll;
      best = l;
    }
  }
  return best;
}

ReliabilityReport simulate_reliability(const Codebook& codebook,
                                       const GsvdDecomposition& gsvd,
                                       double sigma_b2, std::uint64_t trials,
                                       std::uint64_t seed) {
  if (codebook.words.empty()) {
    throw EmptyCodebook("simulate_reliability: codebook has no words");
  }
  if (trials == 0) throw DomainError("simulate_reliability: trials must be > 0");
  const std::int64_t m = gsvd.subchannels();
  const std::int64_t n = codebook.n;
  const std::int64_t mw = codebook.m_words;
  const double sb = std::sqrt(sigma_b2);

  // Draw every trial's (message, key) up front from its own stream, then
  // process trials grouped by key so the per-key decoding matrix is built
  // once. The grouping only reorders integer counting.
  std::uint64_t trial_base = derive_seed(seed, kTrialStreamTag);
  std::vector<std::int64_t> msg_of(trials), key_of(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    Xoshiro256pp pick(derive_seed(trial_base, 2 * t));
    msg_of[t] = std::int64_t(pick() % std::uint64_t(mw));
    key_of[t] = std::int64_t(pick() % std::uint64_t(codebook.k_keys));
  }

  std::uint64_t errors = 0;
  Eigen::VectorXd y(m * n);
  Eigen::VectorXd ll(mw);
  for (std::int64_t k = 0; k < codebook.k_keys; ++k) {
    // Rows are vec(diag(lambda_b) * word); energies the matching halves.
    Eigen::MatrixXd wmat(mw, m * n);
    Eigen::VectorXd energy(mw);
    for (std::int64_t l = 0; l < mw; ++l) {
      Eigen::MatrixXd s = gsvd.lambda_b.asDiagonal() * codebook.word(l, k);
      wmat.row(l) = Eigen::Map<Eigen::VectorXd>(s.data(), m * n).transpose();
      energy(l) = (s.array() * codebook.word(l, k).array()).sum();
    }

    for (std::uint64_t t = 0; t < trials; ++t) {
      if (key_of[t] != k) continue;
      NormalSampler noise(derive_seed(trial_base, 2 * t + 1));
      const Eigen::MatrixXd& x = codebook.word(msg_of[t], k);
      for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t j = 0; j < m; ++j) {
          y(i * m + j) = x(j, i) + sb * noise();
        }
      }
      ll.noalias() = wmat * y;
      ll -= 0.5 * energy;
      Eigen::Index best = 0;
      ll.maxCoeff(&best);
      // maxCoeff returns the first maximizer, matching decode()'s tie policy.
      if (best != msg_of[t]) ++errors;
    }
  }

  ReliabilityReport rep;
  rep.n = n;
  rep.trials = trials;
  rep.error_rate = double(errors) / double(trials);
  rep.half_width = binomial_half_width(rep.error_rate, trials);
  return rep;
}

}  // namespace covert_mimo
