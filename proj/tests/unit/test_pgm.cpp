#include <gtest/gtest.h>

#include "mrftrack/error.hpp"
#include "mrftrack/pgm.hpp"
#include "test_support.hpp"

using namespace mrftrack;
using mrftrack::testing::TempDir;
using mrftrack::testing::write_text;

TEST(Pgm, QuantizedFramesRoundTripExactly) {
    TempDir dir;
    std::vector<double> px(12 * 5);
    for (std::size_t k = 0; k < px.size(); ++k) {
        px[k] = static_cast<double>((k * 37) % 256) / 255.0;
    }
    const Frame f(12, 5, px);
    write_pgm(dir / "a.pgm", f);
    const Frame g = read_pgm(dir / "a.pgm");
    ASSERT_EQ(g.width(), 12);
    ASSERT_EQ(g.height(), 5);
    for (std::size_t k = 0; k < px.size(); ++k) {
        EXPECT_EQ(g.pixels()[k], px[k]);
    }
}

TEST(Pgm, QuantizeRoundsToNearestLevel) {
    EXPECT_EQ(quantize_intensity(0.0), 0);
    EXPECT_EQ(quantize_intensity(1.0), 255);
    EXPECT_EQ(quantize_intensity(-3.0), 0);
    EXPECT_EQ(quantize_intensity(7.0), 255);
    EXPECT_EQ(quantize_intensity(0.25), 64);
    EXPECT_EQ(quantize_intensity(100.4 / 255.0), 100);
}

TEST(Pgm, HeaderCommentsAndSmallMaxval) {
    TempDir dir;
    std::string data = "P5\n# a comment\n3 # inline\n1\n15\n";
    data += static_cast<char>(0);
    data += static_cast<char>(15);
    data += static_cast<char>(5);
    write_text(dir / "c.pgm", data);
    const Frame f = read_pgm(dir / "c.pgm");
    EXPECT_EQ(f.at(0, 0), 0.0);
    EXPECT_EQ(f.at(1, 0), 1.0);
    EXPECT_DOUBLE_EQ(f.at(2, 0), 5.0 / 15.0);
}

TEST(Pgm, MalformedFilesRaiseIoErrorWithPath) {
    TempDir dir;
    write_text(dir / "ascii.pgm", "P2\n1 1\n255\n0\n");
    write_text(dir / "short.pgm", std::string("P5\n4 4\n255\n") + "abc");
    write_text(dir / "deep.pgm", "P5\n1 1\n65535\n\x01\x02");
    write_text(dir / "neg.pgm", "P5\n-1 1\n255\n");
    for (const char* name : {"ascii.pgm", "short.pgm", "deep.pgm", "neg.pgm", "missing.pgm"}) {
        try {
            (void)read_pgm(dir / name);
            ADD_FAILURE() << name << " was accepted";
        } catch (const IoError& e) {
            EXPECT_NE(std::string(e.what()).find(name), std::string::npos);
            EXPECT_EQ(e.path(), (dir / name).string());
        }
    }
}

TEST(Pgm, PatchImageUsesPatchOrder) {
    TempDir dir;
    const PatchDims d{4, 2};
    const std::vector<double> patch{0, 1 / 255.0, 2 / 255.0, 3 / 255.0,
                                    4 / 255.0, 5 / 255.0, 6 / 255.0, 7 / 255.0};
    write_patch_pgm(dir / "p.pgm", patch, d);
    const Frame f = read_pgm(dir / "p.pgm");
    ASSERT_EQ(f.width(), 4);
    ASSERT_EQ(f.height(), 2);
    EXPECT_EQ(f.at(3, 1), 7 / 255.0);
    EXPECT_EQ(f.at(1, 0), 1 / 255.0);
}
