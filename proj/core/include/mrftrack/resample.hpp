#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mrftrack/rng.hpp"

namespace mrftrack {

/// Systematic (low-variance) resampling: one uniform offset in [0, 1/m) and m
/// evenly spaced pointers through the cumulative weights. Every index k is
/// drawn floor(m w_k) or ceil(m w_k) times. Weights must sum to 1 within 1e-9
/// (std::invalid_argument otherwise).
[[nodiscard]] std::vector<std::size_t> resample_systematic(std::span<const double> weights,
                                                           std::size_t m, Rng& rng);

/// Normalizes exp(log_weights) with a max shift. Returns false, and leaves
/// uniform weights, when no weight is positive and finite.
bool normalize_log_weights(std::span<const double> log_weights, std::vector<double>& weights);

/// 1 / sum(w^2) for normalized weights.
[[nodiscard]] double effective_sample_size(std::span<const double> weights) noexcept;

} // namespace mrftrack
