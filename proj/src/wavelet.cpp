// SPDX-License-Identifier: Apache-2.0
#include "cylsh/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace cylsh {

namespace {

struct Dims {
    int nx, ny, nt;
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny * nt; }
};

// One periodic analysis step along `axis` of a dense (nx, ny, nt) block;
// low half first, high half second along that axis.
void analyze_axis(std::vector<double>& a, Dims d, int axis, const WaveletBank& wb)
{
    const int m = axis == 0 ? d.nx : axis == 1 ? d.ny : d.nt;
    const std::size_t stride = axis == 0 ? 1 : axis == 1 ? static_cast<std::size_t>(d.nx)
                                                         : static_cast<std::size_t>(d.nx) * d.ny;
    const int outer1 = axis == 0 ? d.ny : d.nx;
    const int outer2 = axis == 2 ? d.ny : d.nt;
    std::vector<double> line(static_cast<std::size_t>(m)), out(static_cast<std::size_t>(m));
    const int half = m / 2;
    for (int o2 = 0; o2 < outer2; ++o2) {
        for (int o1 = 0; o1 < outer1; ++o1) {
            std::size_t base;
            if (axis == 0) base = (static_cast<std::size_t>(o2) * d.ny + o1) * d.nx;
            else if (axis == 1) base = static_cast<std::size_t>(o2) * d.ny * d.nx + o1;
            else base = static_cast<std::size_t>(o2) * d.nx + o1;
            for (int i = 0; i < m; ++i) line[static_cast<std::size_t>(i)] = a[base + i * stride];
            for (int i = 0; i < half; ++i) {
                double lo = 0.0, hi = 0.0;
                for (int t = 0; t < 4; ++t) {
                    const double x = line[static_cast<std::size_t>((2 * i + t) % m)];
                    lo += wb.lowpass[static_cast<std::size_t>(t)] * x;
                    hi += wb.highpass[static_cast<std::size_t>(t)] * x;
                }
                out[static_cast<std::size_t>(i)] = lo;
                out[static_cast<std::size_t>(half + i)] = hi;
            }
            for (int i = 0; i < m; ++i) a[base + i * stride] = out[static_cast<std::size_t>(i)];
        }
    }
}

void synthesize_axis(std::vector<double>& a, Dims d, int axis, const WaveletBank& wb)
{
    const int m = axis == 0 ? d.nx : axis == 1 ? d.ny : d.nt;
    const std::size_t stride = axis == 0 ? 1 : axis == 1 ? static_cast<std::size_t>(d.nx)
                                                         : static_cast<std::size_t>(d.nx) * d.ny;
    const int outer1 = axis == 0 ? d.ny : d.nx;
    const int outer2 = axis == 2 ? d.ny : d.nt;
    std::vector<double> line(static_cast<std::size_t>(m)), out(static_cast<std::size_t>(m));
    const int half = m / 2;
    for (int o2 = 0; o2 < outer2; ++o2) {
        for (int o1 = 0; o1 < outer1; ++o1) {
            std::size_t base;
            if (axis == 0) base = (static_cast<std::size_t>(o2) * d.ny + o1) * d.nx;
            else if (axis == 1) base = static_cast<std::size_t>(o2) * d.ny * d.nx + o1;
            else base = static_cast<std::size_t>(o2) * d.nx + o1;
            for (int i = 0; i < m; ++i) line[static_cast<std::size_t>(i)] = a[base + i * stride];
            std::fill(out.begin(), out.end(), 0.0);
            for (int i = 0; i < half; ++i) {
                const double lo = line[static_cast<std::size_t>(i)];
                const double hi = line[static_cast<std::size_t>(half + i)];
                for (int t = 0; t < 4; ++t)
                    out[static_cast<std::size_t>((2 * i + t) % m)] +=
                        wb.lowpass[static_cast<std::size_t>(t)] * lo + wb.highpass[static_cast<std::size_t>(t)] * hi;
            }
            for (int i = 0; i < m; ++i) a[base + i * stride] = out[static_cast<std::size_t>(i)];
        }
    }
}

// Octant `o` (bit 0: x high, bit 1: y high, bit 2: t high) of a block whose
// axes have already been split in halves, visited in x-fastest order.
template <class Fn>
void for_octant(Dims d, int o, Fn&& fn)
{
    const int hx = d.nx / 2, hy = d.ny / 2, ht = d.nt / 2;
    const int ox = (o & 1) ? hx : 0, oy = (o & 2) ? hy : 0, ot = (o & 4) ? ht : 0;
    std::size_t k = 0;
    for (int t = 0; t < ht; ++t)
        for (int y = 0; y < hy; ++y)
            for (int x = 0; x < hx; ++x, ++k)
                fn((static_cast<std::size_t>(t + ot) * d.ny + (y + oy)) * d.nx + (x + ox), k);
}

void extract_octant(const std::vector<double>& block, Dims d, int o, double* dst)
{
    for_octant(d, o, [&](std::size_t idx, std::size_t k) { dst[k] = block[idx]; });
}

void insert_octant(std::vector<double>& block, Dims d, int o, const double* src)
{
    for_octant(d, o, [&](std::size_t idx, std::size_t k) { block[idx] = src[k]; });
}

const char* octant_name(int o)
{
    static const char* names[8] = {"aaa", "daa", "ada", "dda", "aad", "dad", "add", "ddd"};
    return names[o];
}

}  // namespace

WaveletBank WaveletBank::daubechies2(int levels)
{
    WaveletBank wb;
    const double s3 = std::sqrt(3.0);
    const double den = 4.0 * std::sqrt(2.0);
    wb.lowpass = {(1.0 + s3) / den, (3.0 + s3) / den, (3.0 - s3) / den, (1.0 - s3) / den};
    for (std::size_t t = 0; t < 4; ++t) wb.highpass[t] = (t % 2 == 0 ? 1.0 : -1.0) * wb.lowpass[3 - t];
    wb.levels = levels;
    return wb;
}

double WaveletBank::orthogonality_defect() const
{
    const auto& h = lowpass;
    const auto& g = highpass;
    double worst = 0.0;
    auto upd = [&](double v) { worst = std::max(worst, std::abs(v)); };
    upd(h[0] * h[0] + h[1] * h[1] + h[2] * h[2] + h[3] * h[3] - 1.0);
    upd(g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3] - 1.0);
    upd(h[0] * h[2] + h[1] * h[3]);
    upd(g[0] * g[2] + g[1] * g[3]);
    upd(h[0] * g[0] + h[1] * g[1] + h[2] * g[2] + h[3] * g[3]);
    upd(h[0] * g[2] + h[1] * g[3]);
    upd(h[2] * g[0] + h[3] * g[1]);
    return worst;
}

Wavelet3D::Wavelet3D(GridSpec grid, WaveletBank bank) : grid_(grid), bank_(bank)
{
    if (bank_.levels < 1) throw std::invalid_argument("wavelet: at least one level required");
    const int div = 1 << bank_.levels;
    if (grid.nx % div || grid.ny % div || grid.nt % div)
        throw std::invalid_argument("wavelet: grid " + grid.str() + " not divisible by 2^" +
                                    std::to_string(bank_.levels));
    auto l = std::make_shared<CoefficientLayout>();
    const int L = bank_.levels;
    const std::size_t coarse = grid.size() >> (3 * L);
    l->bands.push_back(Band{-1, 0, coarse, "approx"});
    std::size_t off = coarse;
    for (int lev = L; lev >= 1; --lev) {
        const std::size_t sz = grid.size() >> (3 * lev);
        for (int o = 1; o < 8; ++o) {
            l->bands.push_back(Band{L - lev, off, sz, "l" + std::to_string(lev) + "_" + octant_name(o)});
            off += sz;
        }
    }
    l->total = off;
    l->scales = L;
    layout_ = std::move(l);
}

void Wavelet3D::analyze(std::span<const double> f, std::span<double> coeffs) const
{
    if (f.size() != grid_.size() || coeffs.size() != layout_->total)
        throw std::invalid_argument("wavelet analyze: shape mismatch (expected grid " + grid_.str() + ")");
    std::vector<double> block(f.begin(), f.end());
    Dims d{grid_.nx, grid_.ny, grid_.nt};
    const int L = bank_.levels;
    for (int lev = 1; lev <= L; ++lev) {
        for (int axis = 0; axis < 3; ++axis) analyze_axis(block, d, axis, bank_);
        // details of this level live in bands [1 + 7*(L-lev), ...]
        const std::size_t first = 1 + 7 * static_cast<std::size_t>(L - lev);
        for (int o = 1; o < 8; ++o) {
            const auto& b = layout_->bands[first + static_cast<std::size_t>(o - 1)];
            extract_octant(block, d, o, coeffs.data() + b.offset);
        }
        Dims h{d.nx / 2, d.ny / 2, d.nt / 2};
        std::vector<double> next(h.size());
        extract_octant(block, d, 0, next.data());
        block.swap(next);
        d = h;
    }
    std::copy(block.begin(), block.end(), coeffs.begin());
}

void Wavelet3D::synthesize(std::span<const double> coeffs, std::span<double> f) const
{
    if (f.size() != grid_.size() || coeffs.size() != layout_->total)
        throw std::invalid_argument("wavelet synthesize: shape mismatch (expected grid " + grid_.str() + ")");
    const int L = bank_.levels;
    Dims d{grid_.nx >> L, grid_.ny >> L, grid_.nt >> L};
    std::vector<double> block(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(d.size()));
    for (int lev = L; lev >= 1; --lev) {
        Dims up{d.nx * 2, d.ny * 2, d.nt * 2};
        std::vector<double> big(up.size(), 0.0);
        insert_octant(big, up, 0, block.data());
        const std::size_t first = 1 + 7 * static_cast<std::size_t>(L - lev);
        for (int o = 1; o < 8; ++o) {
            const auto& b = layout_->bands[first + static_cast<std::size_t>(o - 1)];
            insert_octant(big, up, o, coeffs.data() + b.offset);
        }
        for (int axis = 2; axis >= 0; --axis) synthesize_axis(big, up, axis, bank_);
        block.swap(big);
        d = up;
    }
    std::copy(block.begin(), block.end(), f.begin());
}

CoefficientSet wavelet3d_analyze(const Volume& f, const WaveletBank& bank)
{
    return Wavelet3D(f.grid(), bank).analyze(f);
}

Volume wavelet3d_synthesize(const CoefficientSet& c, const GridSpec& grid, const WaveletBank& bank)
{
    return Wavelet3D(grid, bank).synthesize(c);
}

}  // namespace cylsh
