#pragma once

#include "pelab/grid.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace pelab {

using cplx = std::complex<double>;

/// Owning buffer allocated with fftw_malloc.
template <class T>
class FftwBuffer {
public:
    FftwBuffer() = default;
    explicit FftwBuffer(std::size_t n);
    FftwBuffer(FftwBuffer&& o) noexcept : p_(o.p_), n_(o.n_) { o.p_ = nullptr; o.n_ = 0; }
    FftwBuffer& operator=(FftwBuffer&& o) noexcept;
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    ~FftwBuffer();
    T* data() { return p_; }
    const T* data() const { return p_; }
    std::size_t size() const { return n_; }
    T& operator[](std::size_t i) { return p_[i]; }
    const T& operator[](std::size_t i) const { return p_[i]; }

private:
    T* p_ = nullptr;
    std::size_t n_ = 0;
};

/// 2-D real transforms over the horizontal plane, batched over `levels` interleaved planes
/// (element (i,j) of plane k sits at (i*ny + j)*levels + k, the field layout with levels = nz+1).
class HorizontalFFT {
public:
    HorizontalFFT(int nx, int ny, int levels, double period);
    ~HorizontalFFT();
    HorizontalFFT(const HorizontalFFT&) = delete;
    HorizontalFFT& operator=(const HorizontalFFT&) = delete;

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int nyc() const { return ny_ / 2 + 1; }
    int levels() const { return levels_; }
    /// Angular wavenumbers; the Nyquist index is reported as 0 for odd-derivative use.
    double kx(int i) const;
    double ky(int j) const;
    bool is_nyquist(int i, int j) const { return (nx_ % 2 == 0 && i == nx_ / 2) || (ny_ % 2 == 0 && j == ny_ / 2); }

    void forward(const double* in);
    /// Inverse of the internal spectrum, normalized.
    void inverse(double* out);
    cplx* spectrum() { return spec_.data(); }
    std::size_t spec_index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * nyc() + j) * levels_ + k;
    }

    /// out = F^{-1}[ m(i,j) F[in] ], m applied uniformly across levels.
    void apply(const double* in, double* out, const std::function<cplx(int, int)>& m);

private:
    int nx_, ny_, levels_;
    double q_;
    FftwBuffer<double> real_;
    FftwBuffer<cplx> spec_;
    void* fwd_ = nullptr;
    void* inv_ = nullptr;
};

enum class HAxis { X, Y };

/// Spectral horizontal derivative of every level of a field (Nyquist mode dropped).
SField spectral_derivative(const SField& f, HAxis axis);
/// Spectral horizontal divergence of u.
SField spectral_divergence(const HField& u);

/// Exact linear convolution of a field with a compact 3-D stencil via zero-padded FFTs:
/// periodic in x and y, zero extension beyond the vertical range.
class FftConvolver {
public:
    struct Tap {
        int di, dj, dk;
        double w;
    };
    FftConvolver(int nx, int ny, int nzp, const std::vector<Tap>& taps);
    ~FftConvolver();
    FftConvolver(const FftConvolver&) = delete;
    FftConvolver& operator=(const FftConvolver&) = delete;

    void apply(const double* in, double* out);

private:
    int nx_, ny_, nzp_, L_;
    FftwBuffer<double> real_;
    FftwBuffer<cplx> spec_;
    FftwBuffer<cplx> kernel_;
    void* fwd_ = nullptr;
    void* inv_ = nullptr;
};

/// Smallest size >= n whose prime factors are 2, 3, 5, 7.
int fft_friendly_size(int n);

} // namespace pelab
