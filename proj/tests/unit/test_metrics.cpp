/*
 * Copyright (C) 2026 The panoloom authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>

#include <doctest.h>

#include <panoloom/errors.hpp>
#include <panoloom/image.hpp>
#include <panoloom/metrics.hpp>
#include <panoloom/rng.hpp>

#include "test_utils.hpp"

using namespace panoloom;
using panoloom::testing::TempDir;

namespace {

FeatureSequence angles_to_features(const std::vector<double>& angles) {
    std::vector<double> data;
    for (double a : angles) {
        data.push_back(std::cos(a));
        data.push_back(std::sin(a));
    }
    return FeatureSequence(std::move(data), angles.size(), 2, "test");
}

FeatureSequence random_features(std::size_t rows, std::size_t dim, Rng& rng) {
    std::vector<double> data(rows * dim);
    for (double& v : data) v = rng.uniform_real(-1.0, 1.0) + 0.05; // avoid zero rows
    return FeatureSequence(std::move(data), rows, dim, "test");
}

// Direct textbook evaluation, plain loops and naive sums.
LoopScores loop_reference(const FeatureSequence& feats, int P) {
    const auto f = static_cast<int>(feats.rows());
    LoopScores out;
    out.p = P;
    double s1 = 0.0;
    for (int p = 1; p <= P; ++p)
        for (int q = 1; q <= P; ++q)
            s1 += cosine_similarity(feats.row(static_cast<std::size_t>(p - 1)),
                                    feats.row(static_cast<std::size_t>(f - q)), feats.dim());
    out.s1 = s1 / (static_cast<double>(P) * P);
    double s2 = 0.0;
    for (int p = 1; p <= P; ++p)
        for (int q = P + 1; q <= f - P; ++q)
            s2 += cosine_similarity(feats.row(static_cast<std::size_t>(p - 1)),
                                    feats.row(static_cast<std::size_t>(q - 1)), feats.dim());
    out.s2 = s2 / (static_cast<double>(P) * (f - 2 * P));
    out.degenerate = 1.0 - out.s1 < 1e-6;
    out.c_loop = out.degenerate ? std::nan("") : (1.0 - out.s2) / (1.0 - out.s1);
    return out;
}

} // namespace

TEST_CASE("cosine_similarity anchors") {
    const double a[] = {1.0, 0.0};
    const double b[] = {0.0, 2.0};
    const double c[] = {-3.0, 0.0};
    CHECK(cosine_similarity(a, a, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine_similarity(a, b, 2) == doctest::Approx(0.0).scale(1));
    CHECK(cosine_similarity(a, c, 2) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("loop consistency reproduces the constructed S1=0.5, S2=0 example") {
    // f=20, P=2. First two rows at angle 0, last two at 60 degrees
    // (similarity exactly 0.5), the middle sixteen orthogonal to the head.
    std::vector<double> angles(20, std::numbers::pi / 2.0);
    angles[0] = angles[1] = 0.0;
    angles[18] = angles[19] = std::numbers::pi / 3.0;
    const FeatureSequence feats = angles_to_features(angles);

    const LoopScores scores = loop_consistency(feats, 2);
    CHECK(scores.s1 == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(scores.s2 == doctest::Approx(0.0).scale(1).epsilon(1e-9));
    CHECK(scores.c_loop == doctest::Approx(2.0).epsilon(1e-9));
    CHECK_FALSE(scores.degenerate);
}

TEST_CASE("loop consistency agrees with a direct reference on random data") {
    Rng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const auto f = static_cast<std::size_t>(rng.uniform_int(11, 40));
        const auto dim = static_cast<std::size_t>(rng.uniform_int(2, 16));
        const int P = static_cast<int>(rng.uniform_int(1, 5));
        const FeatureSequence feats = random_features(f, dim, rng);

        const LoopScores got = loop_consistency(feats, P);
        const LoopScores want = loop_reference(feats, P);
        CHECK(got.s1 == doctest::Approx(want.s1).epsilon(1e-9));
        CHECK(got.s2 == doctest::Approx(want.s2).epsilon(1e-9));
        if (!want.degenerate)
            CHECK(got.c_loop == doctest::Approx(want.c_loop).epsilon(1e-9));
    }
}

TEST_CASE("loop consistency flags the degenerate S1 -> 1 branch") {
    // All rows identical: S1 = 1 exactly.
    const FeatureSequence same = angles_to_features(std::vector<double>(12, 0.3));
    const LoopScores scores = loop_consistency(same, 2);
    CHECK(scores.degenerate);
    CHECK(std::isnan(scores.c_loop));

    // 1 - S1 exactly at the threshold boundary: cos eps spans it.
    std::vector<double> near(12, std::numbers::pi / 2.0);
    near[0] = 0.0;
    near[11] = std::acos(1.0 - 2e-6); // 1 - S1 = 2e-6: not degenerate
    CHECK_FALSE(loop_consistency(angles_to_features(near), 1).degenerate);
    near[11] = std::acos(1.0 - 5e-7); // 1 - S1 = 5e-7: degenerate
    CHECK(loop_consistency(angles_to_features(near), 1).degenerate);

    CHECK_THROWS_AS(loop_consistency(same, 6), DomainError); // needs f > 2P
}

TEST_CASE("similarity_curve starts at exactly 1 and tracks cosine to frame 0") {
    Rng rng(55);
    const FeatureSequence feats = random_features(9, 6, rng);
    const std::vector<double> curve = similarity_curve(feats);
    REQUIRE(curve.size() == 9);
    CHECK(curve[0] == 1.0);
    for (std::size_t k = 1; k < curve.size(); ++k)
        CHECK(curve[k] ==
              doctest::Approx(cosine_similarity(feats.row(0), feats.row(k), feats.dim()))
                  .epsilon(1e-12));
}

TEST_CASE("PSNR anchors: identity cap and the uniform-delta formula") {
    Image a(16, 8), b(16, 8);
    for (auto& v : a.rgb) v = 99;
    b.rgb = a.rgb;
    CHECK(psnr(a, b) == 100.0);

    // Uniform difference of 10 levels: 10 log10(255^2 / 100) = 28.1308 dB.
    for (auto& v : b.rgb) v = 109;
    CHECK(psnr(a, b) == doctest::Approx(28.1308).epsilon(1e-4 / 28.0));
}

TEST_CASE("PSNR matches a scalar reference on random images") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const Image a = panoloom::testing::random_image(8, 8, rng);
        const Image b = panoloom::testing::random_image(8, 8, rng);
        double sq = 0.0;
        for (std::size_t i = 0; i < a.rgb.size(); ++i) {
            const double d = static_cast<double>(a.rgb[i]) - b.rgb[i];
            sq += d * d;
        }
        const double want = 10.0 * std::log10(255.0 * 255.0 /
                                              (sq / static_cast<double>(a.rgb.size())));
        CHECK(psnr(a, b) == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("psnr_windows are inclusive and average per-frame PSNR") {
    Rng rng(70);
    std::vector<Image> gen, ref;
    for (int k = 0; k < 8; ++k) {
        gen.push_back(panoloom::testing::random_image(6, 6, rng));
        ref.push_back(panoloom::testing::random_image(6, 6, rng));
    }
    const auto got = psnr_windows(gen, ref, {{2, 4}});
    const double want = (psnr(gen[2], ref[2]) + psnr(gen[3], ref[3]) + psnr(gen[4], ref[4])) / 3.0;
    CHECK(got.size() == 1);
    CHECK(got[0] == doctest::Approx(want).epsilon(1e-12));

    CHECK_THROWS_AS(psnr_windows(gen, ref, {{5, 8}}), DomainError); // hi out of range
    ref.pop_back();
    CHECK_THROWS_AS(psnr_windows(gen, ref, {{0, 1}}), DomainError); // length mismatch

    const auto defaults = default_psnr_windows();
    REQUIRE(defaults.size() == 3);
    CHECK(defaults[0].first == 20);
    CHECK(defaults[0].second == 25);
    CHECK(defaults[1].first == 50);
    CHECK(defaults[2].second == 75);
}

namespace {

// Direct windowed SSIM, no separability tricks; same parameters as the
// library (Rec.601 luma, gaussian sigma 1.5, valid region, biased stats).
double ssim_reference(const Image& a, const Image& b) {
    int win = std::min({11, a.width, a.height});
    if (win % 2 == 0) --win;
    std::vector<double> k1(static_cast<std::size_t>(win));
    const double mid = (win - 1) / 2.0;
    double ksum = 0.0;
    for (int i = 0; i < win; ++i) {
        k1[static_cast<std::size_t>(i)] = std::exp(-0.5 * (i - mid) * (i - mid) / 2.25);
        ksum += k1[static_cast<std::size_t>(i)];
    }
    for (double& v : k1) v /= ksum;

    const double c1 = 2.55 * 2.55, c2 = 7.65 * 7.65;
    double total = 0.0;
    int count = 0;
    for (int y0 = 0; y0 + win <= a.height; ++y0)
        for (int x0 = 0; x0 + win <= a.width; ++x0) {
            double mx = 0, my = 0, mxx = 0, myy = 0, mxy = 0;
            for (int j = 0; j < win; ++j)
                for (int i = 0; i < win; ++i) {
                    const double wgt = k1[static_cast<std::size_t>(j)] *
                                       k1[static_cast<std::size_t>(i)];
                    const double x = luminance(a.at(x0 + i, y0 + j));
                    const double y = luminance(b.at(x0 + i, y0 + j));
                    mx += wgt * x;
                    my += wgt * y;
                    mxx += wgt * x * x;
                    myy += wgt * y * y;
                    mxy += wgt * x * y;
                }
            const double vx = mxx - mx * mx, vy = myy - my * my, cov = mxy - mx * my;
            total += ((2 * mx * my + c1) * (2 * cov + c2)) /
                     ((mx * mx + my * my + c1) * (vx + vy + c2));
            ++count;
        }
    return total / count;
}

} // namespace

TEST_CASE("SSIM: identity, symmetry, reference agreement") {
    Rng rng(13);
    const Image a = panoloom::testing::random_image(20, 14, rng);
    CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));

    for (int trial = 0; trial < 10; ++trial) {
        const Image x = panoloom::testing::random_image(20, 14, rng);
        const Image y = panoloom::testing::random_image(20, 14, rng);
        const double got = ssim(x, y);
        CHECK(got == doctest::Approx(ssim_reference(x, y)).epsilon(1e-9));
        CHECK(got == doctest::Approx(ssim(y, x)).epsilon(1e-12));
        CHECK(got <= 1.0);
        CHECK(got >= -1.0);
    }

    // Tiny frames shrink the window instead of failing.
    const Image s1 = panoloom::testing::random_image(5, 5, rng);
    const Image s2 = panoloom::testing::random_image(5, 5, rng);
    CHECK(std::isfinite(ssim(s1, s2)));

    Image wrong(7, 5);
    CHECK_THROWS_AS(ssim(s1, wrong), DomainError);
}

TEST_CASE("Frechet distance: exact discrete 1-D cases and properties") {
    // {1,3} vs {2,4}: means 2 and 3, equal variance: distance = 1. (A literal
    // zero sample would be rejected as a zero-norm feature row.)
    const FeatureSequence a({1.0, 3.0}, 2, 1, "t");
    const FeatureSequence b({2.0, 4.0}, 2, 1, "t");
    CHECK(frechet_distance(a, b) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(frechet_distance(a, a) < 1e-12);

    // Same mean, stds 1 and 2 (unbiased): {1,-1,1,-1...} trick is degenerate,
    // so build from a seeded normal instead and check symmetry + positivity.
    Rng rng(3);
    std::vector<double> xs(64), ys(64);
    for (auto& v : xs) v = rng.normal();
    for (auto& v : ys) v = 2.0 * rng.normal() + 0.5;
    const FeatureSequence fx(std::move(xs), 64, 1, "t");
    const FeatureSequence fy(std::move(ys), 64, 1, "t");
    const double dxy = frechet_distance(fx, fy);
    const double dyx = frechet_distance(fy, fx);
    CHECK(dxy > 0.0);
    CHECK(std::abs(dxy - dyx) < 1e-8);
}

TEST_CASE("Frechet distance in d dimensions with equal covariance is the mean gap") {
    Rng rng(21);
    const std::size_t n = 200, d = 4;
    std::vector<double> base(n * d);
    for (double& v : base) v = rng.normal();
    std::vector<double> moved = base;
    for (std::size_t r = 0; r < n; ++r) moved[r * d] += 3.0; // shift first axis by 3

    const FeatureSequence a(std::move(base), n, d, "t");
    const FeatureSequence b(std::move(moved), n, d, "t");
    // Identical covariances cancel: distance = |mean gap|^2 = 9 exactly.
    CHECK(frechet_distance(a, b) == doctest::Approx(9.0).epsilon(1e-6));
}

TEST_CASE("Frechet small-sample guards and shrinkage") {
    Rng rng(31);
    std::vector<double> few(3 * 8);
    for (double& v : few) v = rng.normal();
    const FeatureSequence a(std::move(few), 3, 8, "t");
    std::vector<double> few2(3 * 8);
    for (double& v : few2) v = rng.normal();
    const FeatureSequence b(std::move(few2), 3, 8, "t");

    CHECK_THROWS_AS(frechet_distance(a, b), DomainError); // n < d + 1

    FrechetOptions opts;
    opts.shrinkage = 1e-3;
    CHECK(std::isfinite(frechet_distance(a, b, opts)));
}

TEST_CASE("raw_pixel features: pooled, mean-subtracted, constant frames rejected") {
    Rng rng(91);
    std::vector<Image> frames;
    for (int k = 0; k < 4; ++k) frames.push_back(panoloom::testing::random_image(64, 32, rng));
    const FeatureSequence feats = raw_pixel_features(frames);
    CHECK(feats.rows() == 4);
    CHECK(feats.dim() == 32 * 16);
    CHECK(feats.provider_id() == "raw_pixel");
    for (std::size_t r = 0; r < feats.rows(); ++r) {
        double sum = 0.0;
        for (std::size_t i = 0; i < feats.dim(); ++i) sum += feats.row(r)[i];
        CHECK(std::abs(sum) < 1e-6); // mean removed
    }

    Image flat(64, 32);
    for (auto& v : flat.rgb) v = 77;
    CHECK_THROWS_AS(raw_pixel_features({flat}), ValidationError);
}

namespace {

// Direct O(n^2) DCT-II with orthonormal scaling, one axis at a time.
std::vector<double> dct2_reference(const std::vector<double>& g, int w, int h, int keep) {
    const double pi = std::numbers::pi;
    std::vector<double> out;
    for (int v = 0; v < keep; ++v)
        for (int u = 0; u < keep; ++u) {
            double s = 0.0;
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x)
                    s += g[static_cast<std::size_t>(y) * w + x] *
                         std::cos(pi * (x + 0.5) * u / w) * std::cos(pi * (y + 0.5) * v / h);
            const double au = u == 0 ? std::sqrt(1.0 / w) : std::sqrt(2.0 / w);
            const double av = v == 0 ? std::sqrt(1.0 / h) : std::sqrt(2.0 / h);
            out.push_back(au * av * s);
        }
    return out;
}

} // namespace

TEST_CASE("dct_lowfreq features match a direct DCT-II evaluation") {
    Rng rng(17);
    const Image img = panoloom::testing::random_image(24, 16, rng);
    const FeatureSequence feats = dct_lowfreq_features({img});
    REQUIRE(feats.dim() == 64);
    CHECK(feats.provider_id() == "dct_lowfreq");

    std::vector<double> gray(24 * 16);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 24; ++x)
            gray[static_cast<std::size_t>(y) * 24 + x] = luminance(img.at(x, y));
    const std::vector<double> want = dct2_reference(gray, 24, 16, 8);
    for (std::size_t i = 0; i < 64; ++i)
        CHECK(feats.row(0)[i] == doctest::Approx(want[i]).epsilon(1e-9).scale(1));
}

TEST_CASE("FSEQ files round trip and fail loudly when malformed") {
    TempDir tmp("fseq");
    Rng rng(12);
    const FeatureSequence feats = random_features(13, 7, rng);
    write_fseq(feats, tmp.file("f.fseq"));
    const FeatureSequence back = read_fseq(tmp.file("f.fseq"));
    CHECK(back.rows() == 13);
    CHECK(back.dim() == 7);
    for (std::size_t r = 0; r < back.rows(); ++r)
        for (std::size_t i = 0; i < back.dim(); ++i)
            CHECK(back.row(r)[i] == doctest::Approx(feats.row(r)[i])
                                        .epsilon(1e-6)); // f32 storage

    std::ofstream(tmp.file("bad.fseq"), std::ios::binary) << "NOPE";
    CHECK_THROWS_AS(read_fseq(tmp.file("bad.fseq")), ParseError);

    std::ofstream(tmp.file("cut.fseq"), std::ios::binary)
        << "FSEQ" << std::string(8, '\0') << "xx";
    CHECK_THROWS_AS(read_fseq(tmp.file("cut.fseq")), ParseError);
}

TEST_CASE("feature sequence construction validates shape and content") {
    CHECK_THROWS_AS(FeatureSequence({1.0, 2.0}, 1, 3, "t"), DomainError);
    CHECK_THROWS_AS(FeatureSequence({1.0, std::nan("")}, 1, 2, "t"), DomainError);
    CHECK_THROWS_AS(FeatureSequence({0.0, 0.0}, 1, 2, "t"), ValidationError);
}

TEST_CASE("pairwise_sum matches long-double accumulation") {
    Rng rng(5);
    std::vector<double> v(10001);
    double sum_abs = 0.0;
    for (double& x : v) {
        x = rng.uniform_real(-1e6, 1e6);
        sum_abs += std::abs(x);
    }
    long double acc = 0.0L;
    for (double x : v) acc += x;
    // Tree summation error is ~log2(n) ulps of the magnitude sum; a naive
    // left fold would be ~n ulps, far outside this bound.
    const double tol = 64.0 * std::numeric_limits<double>::epsilon() * sum_abs;
    CHECK(std::abs(pairwise_sum(v) - static_cast<double>(acc)) <= tol);
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}
