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

#include "panoloom/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>
#include <memory>
#include <numbers>

#include <Eigen/Dense>

#include "panoloom/errors.hpp"

namespace panoloom {

double pairwise_sum(const double* values, std::size_t count) {
    if (count <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < count; ++i) s += values[i];
        return s;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

double pairwise_sum(const std::vector<double>& values) {
    return pairwise_sum(values.data(), values.size());
}

FeatureSequence::FeatureSequence(std::vector<double> data, std::size_t rows, std::size_t dim,
                                 std::string provider_id)
    : data_(std::move(data)), rows_(rows), dim_(dim), provider_id_(std::move(provider_id)) {
    if (rows_ == 0 || dim_ == 0)
        throw DomainError("feature sequence: rows and dim must be >= 1");
    if (data_.size() != rows_ * dim_)
        throw DomainError("feature sequence: data size " + std::to_string(data_.size()) +
                          " != rows*dim " + std::to_string(rows_ * dim_));
    for (std::size_t r = 0; r < rows_; ++r) {
        double sq = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) {
            const double v = data_[r * dim_ + k];
            if (!std::isfinite(v))
                throw DomainError("feature sequence (" + provider_id_ + "): non-finite value in row " +
                                  std::to_string(r));
            sq += v * v;
        }
        if (sq == 0.0)
            throw ValidationError("feature sequence (" + provider_id_ + "): zero-norm row " +
                                  std::to_string(r) +
                                  " (cosine similarity undefined; e.g. a constant frame "
                                  "under a mean-subtracted provider)");
    }
}

double cosine_similarity(const double* a, const double* b, std::size_t dim) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        dot += a[k] * b[k];
        na += a[k] * a[k];
        nb += b[k] * b[k];
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

LoopScores loop_consistency(const FeatureSequence& feats, int P, double eps) {
    const int f = static_cast<int>(feats.rows());
    if (P < 1) throw DomainError("loop_consistency: P must be >= 1");
    if (f <= 2 * P)
        throw DomainError("loop_consistency: need f > 2P frames, got f = " + std::to_string(f) +
                          ", P = " + std::to_string(P));

    LoopScores scores;
    scores.p = P;

    // Eq. indices are 1-based; frame p is row p-1 and frame f-q+1 is row f-q.
    double s1 = 0.0;
    for (int p = 1; p <= P; ++p)
        for (int q = 1; q <= P; ++q)
            s1 += cosine_similarity(feats.row(static_cast<std::size_t>(p - 1)),
                                    feats.row(static_cast<std::size_t>(f - q)), feats.dim());
    scores.s1 = s1 / (static_cast<double>(P) * P);

    double s2 = 0.0;
    for (int p = 1; p <= P; ++p)
        for (int q = P + 1; q <= f - P; ++q)
            s2 += cosine_similarity(feats.row(static_cast<std::size_t>(p - 1)),
                                    feats.row(static_cast<std::size_t>(q - 1)), feats.dim());
    scores.s2 = s2 / (static_cast<double>(P) * (f - 2 * P));

    if (1.0 - scores.s1 < eps) {
        scores.degenerate = true;
        scores.c_loop = std::numeric_limits<double>::quiet_NaN();
    } else {
        scores.c_loop = (1.0 - scores.s2) / (1.0 - scores.s1);
    }
    return scores;
}

std::vector<double> similarity_curve(const FeatureSequence& feats) {
    std::vector<double> curve(feats.rows());
    curve[0] = 1.0;
    for (std::size_t q = 1; q < feats.rows(); ++q)
        curve[q] = cosine_similarity(feats.row(0), feats.row(q), feats.dim());
    return curve;
}

double psnr(const Image& gen, const Image& ref, double cap) {
    if (!gen.same_shape(ref))
        throw DomainError("psnr: frame dimensions differ");
    if (gen.rgb.empty()) throw DomainError("psnr: empty frame");

    // Exact integer accumulation: order-independent by construction.
    std::uint64_t sq = 0;
    for (std::size_t i = 0; i < gen.rgb.size(); ++i) {
        const int d = static_cast<int>(gen.rgb[i]) - static_cast<int>(ref.rgb[i]);
        sq += static_cast<std::uint64_t>(d * d);
    }
    if (sq == 0) return cap;
    const double mse = static_cast<double>(sq) / static_cast<double>(gen.rgb.size());
    return std::min(cap, 10.0 * std::log10(255.0 * 255.0 / mse));
}

std::vector<std::pair<int, int>> default_psnr_windows() {
    return {{20, 25}, {50, 55}, {70, 75}};
}

std::vector<double> psnr_windows(const std::vector<Image>& gen, const std::vector<Image>& ref,
                                 const std::vector<std::pair<int, int>>& windows, double cap) {
    if (gen.size() != ref.size())
        throw DomainError("psnr_windows: sequence lengths differ (" + std::to_string(gen.size()) +
                          " vs " + std::to_string(ref.size()) + ")");
    if (gen.empty()) throw DomainError("psnr_windows: empty sequences");

    std::vector<double> out;
    out.reserve(windows.size());
    for (const auto& [lo, hi] : windows) {
        if (lo < 0 || hi < lo || static_cast<std::size_t>(hi) >= gen.size())
            throw DomainError("psnr_windows: window [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "] out of range for " +
                              std::to_string(gen.size()) + " frames");
        std::vector<double> vals;
        vals.reserve(static_cast<std::size_t>(hi - lo + 1));
        for (int k = lo; k <= hi; ++k)
            vals.push_back(psnr(gen[static_cast<std::size_t>(k)],
                                ref[static_cast<std::size_t>(k)], cap));
        out.push_back(pairwise_sum(vals) / static_cast<double>(vals.size()));
    }
    return out;
}

namespace {

std::vector<double> gray_plane(const Image& img) {
    std::vector<double> g(static_cast<std::size_t>(img.width) * img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            g[static_cast<std::size_t>(y) * img.width + x] = luminance(img.at(x, y));
    return g;
}

// Valid-region separable convolution with a normalized kernel.
std::vector<double> convolve_valid(const std::vector<double>& src, int w, int h,
                                   const std::vector<double>& kernel) {
    const int k = static_cast<int>(kernel.size());
    const int vw = w - k + 1;
    const int vh = h - k + 1;
    std::vector<double> tmp(static_cast<std::size_t>(vw) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < vw; ++x) {
            double s = 0.0;
            for (int i = 0; i < k; ++i)
                s += kernel[static_cast<std::size_t>(i)] *
                     src[static_cast<std::size_t>(y) * w + x + i];
            tmp[static_cast<std::size_t>(y) * vw + x] = s;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(vw) * vh);
    for (int y = 0; y < vh; ++y) {
        for (int x = 0; x < vw; ++x) {
            double s = 0.0;
            for (int i = 0; i < k; ++i)
                s += kernel[static_cast<std::size_t>(i)] *
                     tmp[static_cast<std::size_t>(y + i) * vw + x];
            out[static_cast<std::size_t>(y) * vw + x] = s;
        }
    }
    return out;
}

} // namespace

double ssim(const Image& gen, const Image& ref) {
    if (!gen.same_shape(ref)) throw DomainError("ssim: frame dimensions differ");
    if (gen.width < 1 || gen.height < 1) throw DomainError("ssim: empty frame");

    int win = std::min({11, gen.width, gen.height});
    if (win % 2 == 0) --win;

    std::vector<double> kernel(static_cast<std::size_t>(win));
    const double sigma = 1.5;
    const double mid = (win - 1) / 2.0;
    for (int i = 0; i < win; ++i)
        kernel[static_cast<std::size_t>(i)] =
            std::exp(-0.5 * (i - mid) * (i - mid) / (sigma * sigma));
    const double ksum = pairwise_sum(kernel);
    for (double& v : kernel) v /= ksum;

    const std::vector<double> x = gray_plane(gen);
    const std::vector<double> y = gray_plane(ref);
    const std::size_t n = x.size();
    std::vector<double> xx(n), yy(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }

    const int w = gen.width;
    const int h = gen.height;
    const std::vector<double> mu_x = convolve_valid(x, w, h, kernel);
    const std::vector<double> mu_y = convolve_valid(y, w, h, kernel);
    const std::vector<double> m_xx = convolve_valid(xx, w, h, kernel);
    const std::vector<double> m_yy = convolve_valid(yy, w, h, kernel);
    const std::vector<double> m_xy = convolve_valid(xy, w, h, kernel);

    constexpr double kL = 255.0;
    constexpr double kC1 = (0.01 * kL) * (0.01 * kL);
    constexpr double kC2 = (0.03 * kL) * (0.03 * kL);

    std::vector<double> map(mu_x.size());
    for (std::size_t i = 0; i < mu_x.size(); ++i) {
        const double var_x = m_xx[i] - mu_x[i] * mu_x[i];
        const double var_y = m_yy[i] - mu_y[i] * mu_y[i];
        const double cov = m_xy[i] - mu_x[i] * mu_y[i];
        map[i] = ((2.0 * mu_x[i] * mu_y[i] + kC1) * (2.0 * cov + kC2)) /
                 ((mu_x[i] * mu_x[i] + mu_y[i] * mu_y[i] + kC1) * (var_x + var_y + kC2));
    }
    return pairwise_sum(map) / static_cast<double>(map.size());
}

namespace {

Eigen::MatrixXd to_matrix(const FeatureSequence& f) {
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                          Eigen::RowMajor>>(
        f.data().data(), static_cast<Eigen::Index>(f.rows()),
        static_cast<Eigen::Index>(f.dim()));
}

Eigen::MatrixXd covariance(const Eigen::MatrixXd& x, double shrinkage) {
    const Eigen::Index n = x.rows();
    const Eigen::RowVectorXd mu = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - mu;
    Eigen::MatrixXd cov =
        (centered.transpose() * centered) / static_cast<double>(n - 1);
    if (shrinkage > 0.0)
        cov.diagonal().array() += shrinkage;
    return cov;
}

// Symmetric PSD square root via eigendecomposition, negative eigenvalues
// (numerical noise) clamped to zero.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m, const char* what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    if (eig.info() != Eigen::Success)
        throw NumericError(std::string("frechet_distance: eigendecomposition failed for ") +
                           what + " (dim " + std::to_string(m.rows()) + ")");
    const Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

} // namespace

double frechet_distance(const FeatureSequence& a, const FeatureSequence& b,
                        const FrechetOptions& opts) {
    if (a.dim() != b.dim())
        throw DomainError("frechet_distance: feature dimensions differ (" +
                          std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
    const std::size_t d = a.dim();
    if (a.rows() < 2 || b.rows() < 2)
        throw DomainError("frechet_distance: need at least 2 rows per set");
    if (opts.shrinkage <= 0.0 && (a.rows() < d + 1 || b.rows() < d + 1))
        throw DomainError("frechet_distance: need n >= d + 1 = " + std::to_string(d + 1) +
                          " rows per set (or enable covariance shrinkage)");
    if (opts.shrinkage < 0.0 || !std::isfinite(opts.shrinkage))
        throw DomainError("frechet_distance: shrinkage must be finite and >= 0");

    const Eigen::MatrixXd xa = to_matrix(a);
    const Eigen::MatrixXd xb = to_matrix(b);
    const Eigen::RowVectorXd mu_a = xa.colwise().mean();
    const Eigen::RowVectorXd mu_b = xb.colwise().mean();
    const Eigen::MatrixXd cov_a = covariance(xa, opts.shrinkage);
    const Eigen::MatrixXd cov_b = covariance(xb, opts.shrinkage);

    const Eigen::MatrixXd root_a = psd_sqrt(cov_a, "cov_a");
    Eigen::MatrixXd inner = root_a * cov_b * root_a;
    inner = 0.5 * (inner + inner.transpose().eval()); // re-symmetrize fp noise

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(inner);
    if (eig.info() != Eigen::Success)
        throw NumericError("frechet_distance: eigendecomposition failed for "
                           "sqrt(cov_a) * cov_b * sqrt(cov_a) (dim " +
                           std::to_string(inner.rows()) + ")");
    const double tr_sqrt = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();

    const double dist = (mu_a - mu_b).squaredNorm() + cov_a.trace() + cov_b.trace() -
                        2.0 * tr_sqrt;
    return std::max(dist, 0.0);
}

namespace {

constexpr int kRawW = 32;
constexpr int kRawH = 16;

std::vector<double> raw_pixel_row(const Image& frame) {
    std::vector<double> row(static_cast<std::size_t>(kRawW) * kRawH);
    for (int ty = 0; ty < kRawH; ++ty) {
        int y0 = ty * frame.height / kRawH;
        int y1 = std::max(y0 + 1, (ty + 1) * frame.height / kRawH);
        y1 = std::min(y1, frame.height);
        y0 = std::min(y0, frame.height - 1);
        for (int tx = 0; tx < kRawW; ++tx) {
            int x0 = tx * frame.width / kRawW;
            int x1 = std::max(x0 + 1, (tx + 1) * frame.width / kRawW);
            x1 = std::min(x1, frame.width);
            x0 = std::min(x0, frame.width - 1);
            double sum = 0.0;
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x) sum += luminance(frame.at(x, y));
            row[static_cast<std::size_t>(ty) * kRawW + tx] =
                sum / (static_cast<double>(y1 - y0) * (x1 - x0));
        }
    }
    const double mean = pairwise_sum(row) / static_cast<double>(row.size());
    for (double& v : row) v -= mean;
    return row;
}

} // namespace

FeatureSequence raw_pixel_features(const std::vector<Image>& frames) {
    if (frames.empty()) throw DomainError("raw_pixel_features: no frames");
    const std::size_t dim = static_cast<std::size_t>(kRawW) * kRawH;
    std::vector<double> data;
    data.reserve(frames.size() * dim);
    for (const Image& frame : frames) {
        if (frame.width < 1 || frame.height < 1)
            throw DomainError("raw_pixel_features: empty frame");
        const std::vector<double> row = raw_pixel_row(frame);
        data.insert(data.end(), row.begin(), row.end());
    }
    return FeatureSequence(std::move(data), frames.size(), dim, "raw_pixel");
}

FeatureSequence dct_lowfreq_features(const std::vector<Image>& frames) {
    if (frames.empty()) throw DomainError("dct_lowfreq_features: no frames");
    const int ku = std::min(8, frames.front().width);
    const int kv = std::min(8, frames.front().height);
    const std::size_t dim = static_cast<std::size_t>(ku) * kv;

    std::vector<double> data;
    data.reserve(frames.size() * dim);
    for (const Image& frame : frames) {
        if (!frame.same_shape(frames.front()))
            throw DomainError("dct_lowfreq_features: frames have differing dimensions");
        const int w = frame.width;
        const int h = frame.height;
        const std::vector<double> g = gray_plane(frame);

        // Separable DCT-II, low-frequency block only.
        std::vector<double> rows(static_cast<std::size_t>(h) * ku, 0.0);
        for (int y = 0; y < h; ++y)
            for (int u = 0; u < ku; ++u) {
                double s = 0.0;
                for (int x = 0; x < w; ++x)
                    s += g[static_cast<std::size_t>(y) * w + x] *
                         std::cos(std::numbers::pi * (2.0 * x + 1.0) * u / (2.0 * w));
                rows[static_cast<std::size_t>(y) * ku + u] = s;
            }
        for (int v = 0; v < kv; ++v)
            for (int u = 0; u < ku; ++u) {
                double s = 0.0;
                for (int y = 0; y < h; ++y)
                    s += rows[static_cast<std::size_t>(y) * ku + u] *
                         std::cos(std::numbers::pi * (2.0 * y + 1.0) * v / (2.0 * h));
                const double au = u == 0 ? std::sqrt(1.0 / w) : std::sqrt(2.0 / w);
                const double av = v == 0 ? std::sqrt(1.0 / h) : std::sqrt(2.0 / h);
                data.push_back(au * av * s);
            }
    }
    return FeatureSequence(std::move(data), frames.size(), dim, "dct_lowfreq");
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

std::uint32_t read_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32_le(std::uint32_t v, unsigned char* p) {
    p[0] = static_cast<unsigned char>(v & 0xff);
    p[1] = static_cast<unsigned char>((v >> 8) & 0xff);
    p[2] = static_cast<unsigned char>((v >> 16) & 0xff);
    p[3] = static_cast<unsigned char>((v >> 24) & 0xff);
}

} // namespace

FeatureSequence read_fseq(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw Error("cannot open '" + path + "' for reading");

    unsigned char header[12];
    if (std::fread(header, 1, sizeof(header), f.get()) != sizeof(header))
        throw ParseError("feature file '" + path + "': truncated header", 0);
    if (std::memcmp(header, "FSEQ", 4) != 0)
        throw ParseError("feature file '" + path + "': bad magic (want \"FSEQ\")", 0);

    const std::uint32_t rows = read_u32_le(header + 4);
    const std::uint32_t dim = read_u32_le(header + 8);
    if (rows == 0 || dim == 0)
        throw ParseError("feature file '" + path + "': zero rows or dim", 4);
    if (static_cast<std::uint64_t>(rows) * dim > (1u << 28))
        throw ParseError("feature file '" + path + "': implausible size " +
                             std::to_string(rows) + "x" + std::to_string(dim),
                         4);

    const std::size_t count = static_cast<std::size_t>(rows) * dim;
    std::vector<unsigned char> raw(count * 4);
    if (std::fread(raw.data(), 1, raw.size(), f.get()) != raw.size())
        throw ParseError("feature file '" + path + "': truncated payload (want " +
                             std::to_string(raw.size()) + " bytes)",
                         12);

    std::vector<double> data(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t bits = read_u32_le(raw.data() + i * 4);
        float v;
        std::memcpy(&v, &bits, 4);
        data[i] = static_cast<double>(v);
    }
    return FeatureSequence(std::move(data), rows, dim, "external_file");
}

void write_fseq(const FeatureSequence& feats, const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw Error("cannot open '" + path + "' for writing");

    unsigned char header[12];
    std::memcpy(header, "FSEQ", 4);
    write_u32_le(static_cast<std::uint32_t>(feats.rows()), header + 4);
    write_u32_le(static_cast<std::uint32_t>(feats.dim()), header + 8);
    if (std::fwrite(header, 1, sizeof(header), f.get()) != sizeof(header))
        throw Error("write failed for '" + path + "'");

    const std::size_t count = feats.rows() * feats.dim();
    std::vector<unsigned char> raw(count * 4);
    for (std::size_t i = 0; i < count; ++i) {
        const float v = static_cast<float>(feats.data()[i]);
        std::uint32_t bits;
        std::memcpy(&bits, &v, 4);
        write_u32_le(bits, raw.data() + i * 4);
    }
    if (std::fwrite(raw.data(), 1, raw.size(), f.get()) != raw.size())
        throw Error("write failed for '" + path + "'");
}

} // namespace panoloom
