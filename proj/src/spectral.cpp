#include "pelab/spectral.hpp"

#include "pelab/error.hpp"

#include <fftw3.h>
#include <omp.h>

#include <cstring>
#include <mutex>
#include <numbers>

namespace pelab {

namespace {

// The FFTW planner is not thread-safe; plans are created and destroyed under this lock.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void init_threads_locked() {
    static bool done = false;
    if (!done) {
        fftw_init_threads();
        done = true;
    }
    fftw_plan_with_nthreads(omp_get_max_threads());
}

} // namespace

template <class T>
FftwBuffer<T>::FftwBuffer(std::size_t n) : p_(static_cast<T*>(fftw_malloc(sizeof(T) * (n ? n : 1)))), n_(n) {
    if (!p_) throw Error("fftw_malloc failed");
    std::memset(static_cast<void*>(p_), 0, sizeof(T) * n_);
}

template <class T>
FftwBuffer<T>& FftwBuffer<T>::operator=(FftwBuffer&& o) noexcept {
    if (this != &o) {
        if (p_) fftw_free(p_);
        p_ = o.p_;
        n_ = o.n_;
        o.p_ = nullptr;
        o.n_ = 0;
    }
    return *this;
}

template <class T>
FftwBuffer<T>::~FftwBuffer() {
    if (p_) fftw_free(p_);
}

template class FftwBuffer<double>;
template class FftwBuffer<cplx>;

int fft_friendly_size(int n) {
    for (int m = std::max(n, 1);; ++m) {
        int r = m;
        for (int p : {2, 3, 5, 7})
            while (r % p == 0) r /= p;
        if (r == 1) return m;
    }
}

HorizontalFFT::HorizontalFFT(int nx, int ny, int levels, double period)
    : nx_(nx), ny_(ny), levels_(levels), q_(2.0 * std::numbers::pi / period),
      real_(static_cast<std::size_t>(nx) * ny * levels), spec_(static_cast<std::size_t>(nx) * (ny / 2 + 1) * levels) {
    int n[2] = {nx, ny};
    int rembed[2] = {nx, ny};
    int cembed[2] = {nx, ny / 2 + 1};
    std::lock_guard<std::mutex> lock(planner_mutex());
    init_threads_locked();
    fwd_ = fftw_plan_many_dft_r2c(2, n, levels, real_.data(), rembed, levels, 1,
                                  reinterpret_cast<fftw_complex*>(spec_.data()), cembed, levels, 1, FFTW_ESTIMATE);
    inv_ = fftw_plan_many_dft_c2r(2, n, levels, reinterpret_cast<fftw_complex*>(spec_.data()), cembed, levels, 1,
                                  real_.data(), rembed, levels, 1, FFTW_ESTIMATE);
    if (!fwd_ || !inv_) throw Error("HorizontalFFT: plan creation failed");
}

HorizontalFFT::~HorizontalFFT() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    if (inv_) fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

double HorizontalFFT::kx(int i) const { return q_ * (i <= nx_ / 2 ? i : i - nx_); }
double HorizontalFFT::ky(int j) const { return q_ * j; }

void HorizontalFFT::forward(const double* in) {
    std::memcpy(real_.data(), in, sizeof(double) * real_.size());
    fftw_execute(static_cast<fftw_plan>(fwd_));
}

void HorizontalFFT::inverse(double* out) {
    fftw_execute(static_cast<fftw_plan>(inv_));
    const double s = 1.0 / (static_cast<double>(nx_) * ny_);
    const std::size_t n = real_.size();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) out[i] = real_[i] * s;
}

void HorizontalFFT::apply(const double* in, double* out, const std::function<cplx(int, int)>& m) {
    forward(in);
    const int nyc_ = nyc();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < nyc_; ++j) {
            const cplx f = m(i, j);
            cplx* s = spec_.data() + spec_index(i, j, 0);
            for (int k = 0; k < levels_; ++k) s[k] *= f;
        }
    inverse(out);
}

SField spectral_derivative(const SField& f, HAxis axis) {
    const Grid3& g = f.grid();
    if (g.mode() != Mode::PeriodicChannel) throw PreconditionError("spectral_derivative: PeriodicChannel grid required");
    HorizontalFFT fft(g.nx(), g.ny(), g.nzp(), g.period());
    SField out(g);
    fft.apply(f.data(), out.data(), [&](int i, int j) -> cplx {
        if (fft.is_nyquist(i, j)) return 0.0;
        return cplx(0.0, axis == HAxis::X ? fft.kx(i) : fft.ky(j));
    });
    return out;
}

SField spectral_divergence(const HField& u) {
    const Grid3& g = u.grid();
    if (g.mode() != Mode::PeriodicChannel) throw PreconditionError("spectral_divergence: PeriodicChannel grid required");
    HorizontalFFT fft(g.nx(), g.ny(), g.nzp(), g.period());
    const std::size_t ns = static_cast<std::size_t>(g.nx()) * fft.nyc() * g.nzp();
    fft.forward(u[0].data());
    std::vector<cplx> s0(fft.spectrum(), fft.spectrum() + ns);
    fft.forward(u[1].data());
    cplx* s = fft.spectrum();
    const int nzp = g.nzp();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < fft.nyc(); ++j) {
            const std::size_t b = fft.spec_index(i, j, 0);
            const bool nyq = fft.is_nyquist(i, j);
            const cplx ax(0.0, fft.kx(i)), ay(0.0, fft.ky(j));
            for (int k = 0; k < nzp; ++k) s[b + k] = nyq ? cplx(0.0) : ax * s0[b + k] + ay * s[b + k];
        }
    SField out(g);
    fft.inverse(out.data());
    return out;
}

FftConvolver::FftConvolver(int nx, int ny, int nzp, const std::vector<Tap>& taps) : nx_(nx), ny_(ny), nzp_(nzp) {
    int rk = 0;
    for (const auto& t : taps) rk = std::max(rk, std::abs(t.dk));
    L_ = fft_friendly_size(nzp + rk);
    const std::size_t nr = static_cast<std::size_t>(nx) * ny * L_;
    const std::size_t nc = static_cast<std::size_t>(nx) * ny * (L_ / 2 + 1);
    real_ = FftwBuffer<double>(nr);
    spec_ = FftwBuffer<cplx>(nc);
    kernel_ = FftwBuffer<cplx>(nc);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        init_threads_locked();
        fwd_ = fftw_plan_dft_r2c_3d(nx, ny, L_, real_.data(), reinterpret_cast<fftw_complex*>(spec_.data()), FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_c2r_3d(nx, ny, L_, reinterpret_cast<fftw_complex*>(spec_.data()), real_.data(), FFTW_ESTIMATE);
    }
    if (!fwd_ || !inv_) throw Error("FftConvolver: plan creation failed");
    auto wrap = [](int a, int n) { return ((a % n) + n) % n; };
    for (const auto& t : taps) {
        const std::size_t n = (static_cast<std::size_t>(wrap(t.di, nx)) * ny + wrap(t.dj, ny)) * L_ + wrap(t.dk, L_);
        real_[n] += t.w;
    }
    fftw_execute(static_cast<fftw_plan>(fwd_));
    std::memcpy(static_cast<void*>(kernel_.data()), spec_.data(), sizeof(cplx) * nc);
}

FftConvolver::~FftConvolver() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    if (inv_) fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

void FftConvolver::apply(const double* in, double* out) {
    const std::size_t ncol = static_cast<std::size_t>(nx_) * ny_;
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < ncol; ++c) {
        double* dst = real_.data() + c * L_;
        std::memcpy(dst, in + c * nzp_, sizeof(double) * nzp_);
        std::memset(dst + nzp_, 0, sizeof(double) * (L_ - nzp_));
    }
    fftw_execute(static_cast<fftw_plan>(fwd_));
    const std::size_t nc = spec_.size();
    const double s = 1.0 / (static_cast<double>(ncol) * L_);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < nc; ++i) spec_[i] *= kernel_[i] * s;
    fftw_execute(static_cast<fftw_plan>(inv_));
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < ncol; ++c) std::memcpy(out + c * nzp_, real_.data() + c * L_, sizeof(double) * nzp_);
}

} // namespace pelab
