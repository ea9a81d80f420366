#include "mrftrack/resample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mrftrack {

std::vector<std::size_t> resample_systematic(std::span<const double> weights, std::size_t m,
                                             Rng& rng) {
    if (weights.empty()) {
        throw std::invalid_argument("resample_systematic: empty weight vector");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("resample_systematic: weights must be finite and >= 0");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("resample_systematic: weights do not sum to 1");
    }

    std::vector<std::size_t> out;
    out.reserve(m);
    if (m == 0) {
        return out;
    }
    const double step = 1.0 / static_cast<double>(m);
    const double offset = uniform01(rng) * step;
    const std::size_t last = weights.size() - 1;
    std::size_t k = 0;
    double cumulative = weights[0];
    for (std::size_t j = 0; j < m; ++j) {
        const double u = offset + static_cast<double>(j) * step;
        while (u >= cumulative && k < last) {
            ++k;
            cumulative += weights[k];
        }
        out.push_back(k);
    }
    return out;
}

bool normalize_log_weights(std::span<const double> log_weights, std::vector<double>& weights) {
    weights.assign(log_weights.size(), 0.0);
    if (log_weights.empty()) {
        return false;
    }
    double top = -std::numeric_limits<double>::infinity();
    for (double lw : log_weights) {
        if (!std::isnan(lw)) {
            top = std::max(top, lw);
        }
    }
    double total = 0.0;
    if (std::isfinite(top)) {
        for (std::size_t k = 0; k < log_weights.size(); ++k) {
            const double w = std::isnan(log_weights[k]) ? 0.0 : std::exp(log_weights[k] - top);
            weights[k] = w;
            total += w;
        }
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        std::fill(weights.begin(), weights.end(), 1.0 / static_cast<double>(weights.size()));
        return false;
    }
    for (double& w : weights) {
        w /= total;
    }
    return true;
}

double effective_sample_size(std::span<const double> weights) noexcept {
    double sq = 0.0;
    for (double w : weights) {
        sq += w * w;
    }
    return sq > 0.0 ? 1.0 / sq : 0.0;
}

} // namespace mrftrack
