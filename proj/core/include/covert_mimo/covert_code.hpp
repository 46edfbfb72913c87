#pragma once

#include <cstdint>
#include <vector>

#include "covert_mimo/allocation.hpp"
#include "covert_mimo/channel_model.hpp"

namespace covert_mimo {

// Default cap on total stored scalars (M * K * m * n) for generated codes.
inline constexpr std::size_t kDefaultScalarBudget = std::size_t{1} << 26;

// Message/key size exponents in nats for a random binary antipodal code on a
// given allocation: log M grows like (1-xi) and log MK like (1+xi) times the
// respective sqrt(n)-scaled throughputs.
struct CodeSizing {
  double log_m = 0.0;
  double log_mk = 0.0;
};

CodeSizing size_code(const GsvdDecomposition& gsvd, const AllocationResult& alloc,
                     double sigma_b2, double sigma_w2, std::int64_t n,
                     double delta, double xi);

// floor(exp(log_size)) clamped to [2, cap]; the usable word count at desk scale.
std::int64_t word_count(double log_size, std::int64_t cap);

// M*K words of a random binary antipodal code; word (message l, key k) is an
// m x n block whose row j takes values +-amplitude_j.
struct Codebook {
  std::int64_t m_words = 0;  // messages per key, M
  std::int64_t k_keys = 0;   // keys, K
  std::int64_t n = 0;
  Constellation constellation;
  std::vector<Eigen::MatrixXd> words;  // size M*K, each m x n

  const Eigen::MatrixXd& word(std::int64_t message, std::int64_t key) const;
  std::int64_t total_words() const { return m_words * k_keys; }
};

Codebook generate_codebook(const Constellation& constellation,
                           std::int64_t m_words, std::int64_t k_keys,
                           std::uint64_t seed,
                           std::size_t scalar_budget = kDefaultScalarBudget);

// One end-to-end channel use in the sub-channel domain:
// y_tilde = diag(lambda_b) x + noise_b, z_tilde = diag(lambda_w) x + noise_w.
struct TransmissionTrace {
  std::int64_t message = 0;
  std::int64_t key = 0;
  Eigen::MatrixXd y_tilde;  // m x n
  Eigen::MatrixXd z_tilde;  // m x n
};

TransmissionTrace transmit(const Codebook& codebook, std::int64_t message,
                           std::int64_t key, const GsvdDecomposition& gsvd,
                           double sigma_b2, double sigma_w2, std::uint64_t seed);

// Maximum-likelihood message decoding within the key's sub-code; ties break
// toward the smallest index.
std::int64_t decode(const Codebook& codebook, std::int64_t key,
                    const Eigen::MatrixXd& y_tilde,
                    const GsvdDecomposition& gsvd, double sigma_b2);

struct ReliabilityReport {
  std::int64_t n = 0;
  std::uint64_t trials = 0;
  double error_rate = 0.0;
  double half_width = 0.0;  // 95% binomial confidence half-width
};

// Uniform (message, key) draws through the noisy channel, ML decoding with
// the true key; per-trial RNG streams keep the count reproducible.
ReliabilityReport simulate_reliability(const Codebook& codebook,
                                       const GsvdDecomposition& gsvd,
                                       double sigma_b2, std::uint64_t trials,
                                       std::uint64_t seed);

}  // namespace covert_mimo
