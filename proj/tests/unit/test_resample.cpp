#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "mrftrack/resample.hpp"

using namespace mrftrack;

namespace {

std::vector<std::size_t> counts_of(const std::vector<std::size_t>& idx, std::size_t n) {
    std::vector<std::size_t> c(n, 0);
    for (std::size_t k : idx) {
        ++c.at(k);
    }
    return c;
}

} // namespace

TEST(Systematic, CountsAreFloorOrCeilOfExpectation) {
    Rng rng = make_rng(31);
    const std::vector<double> w{0.1, 0.25, 0.05, 0.3, 0.0, 0.3};
    for (std::size_t m : {1u, 4u, 7u, 10u, 33u}) {
        for (int draw = 0; draw < 2000; ++draw) {
            const auto idx = resample_systematic(w, m, rng);
            ASSERT_EQ(idx.size(), m);
            for (std::size_t k = 1; k < idx.size(); ++k) {
                ASSERT_LE(idx[k - 1], idx[k]);
            }
            const auto c = counts_of(idx, w.size());
            for (std::size_t k = 0; k < w.size(); ++k) {
                const double e = static_cast<double>(m) * w[k];
                ASSERT_GE(static_cast<double>(c[k]), std::floor(e - 1e-9));
                ASSERT_LE(static_cast<double>(c[k]), std::ceil(e + 1e-9));
            }
            ASSERT_EQ(c[4], 0u);
        }
    }
}

TEST(Systematic, IntegerExpectationsAreExact) {
    Rng rng = make_rng(32);
    const auto idx = resample_systematic(std::vector<double>{0.5, 0.25, 0.25}, 4, rng);
    EXPECT_EQ(idx, (std::vector<std::size_t>{0, 0, 1, 2}));
    EXPECT_EQ(resample_systematic(std::vector<double>{1.0}, 5, rng), (std::vector<std::size_t>(5, 0)));
    EXPECT_EQ(resample_systematic(std::vector<double>(4, 0.25), 4, rng),
              (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(Systematic, FrequenciesMatchWeights) {
    Rng rng = make_rng(33);
    const std::vector<double> w{0.5, 0.3, 0.2};
    const std::size_t m = 7;
    const int draws = 150000;
    std::vector<double> freq(w.size(), 0.0);
    for (int d = 0; d < draws; ++d) {
        for (std::size_t k : resample_systematic(w, m, rng)) {
            freq[k] += 1.0;
        }
    }
    for (std::size_t k = 0; k < w.size(); ++k) {
        EXPECT_NEAR(freq[k] / (static_cast<double>(m) * draws), w[k], 0.005);
    }
}

TEST(Systematic, RejectsInvalidWeights) {
    Rng rng = make_rng(34);
    EXPECT_THROW((void)resample_systematic(std::vector<double>{}, 3, rng), std::invalid_argument);
    EXPECT_THROW((void)resample_systematic(std::vector<double>{0.5, 0.4}, 3, rng),
                 std::invalid_argument);
    EXPECT_THROW((void)resample_systematic(std::vector<double>{1.5, -0.5}, 3, rng),
                 std::invalid_argument);
    EXPECT_THROW((void)resample_systematic(std::vector<double>{std::nan(""), 1.0}, 3, rng),
                 std::invalid_argument);
    EXPECT_TRUE(resample_systematic(std::vector<double>{1.0}, 0, rng).empty());
}

TEST(LogWeights, NormalizesWithMaxShift) {
    std::vector<double> w;
    EXPECT_TRUE(normalize_log_weights(std::vector<double>{-1000.0, -1000.0 + std::log(3.0)}, w));
    EXPECT_NEAR(w[0], 0.25, 1e-12);
    EXPECT_NEAR(w[1], 0.75, 1e-12);
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_TRUE(normalize_log_weights(std::vector<double>{0.0, -inf, std::nan("")}, w));
    EXPECT_EQ(w, (std::vector<double>{1.0, 0.0, 0.0}));
    EXPECT_FALSE(normalize_log_weights(std::vector<double>{-inf, -inf}, w));
    EXPECT_EQ(w, (std::vector<double>{0.5, 0.5}));
    EXPECT_FALSE(normalize_log_weights(std::vector<double>{inf, 0.0}, w));
    EXPECT_EQ(w, (std::vector<double>{0.5, 0.5}));
}

TEST(LogWeights, EffectiveSampleSize) {
    EXPECT_DOUBLE_EQ(effective_sample_size(std::vector<double>(8, 0.125)), 8.0);
    EXPECT_DOUBLE_EQ(effective_sample_size(std::vector<double>{1.0, 0.0, 0.0}), 1.0);
    EXPECT_DOUBLE_EQ(effective_sample_size(std::vector<double>{0.5, 0.5}), 2.0);
}
