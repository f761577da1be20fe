#include "pelab/grid.hpp"

#include "pelab/error.hpp"

#include <string>

namespace pelab {

Grid3 Grid3::channel(int nx, int ny, int nz, double period) {
    require(nx > 0 && ny > 0 && nz > 0, "Grid3: counts must be positive");
    require(period > 0, "Grid3: period must be positive");
    Grid3 g;
    g.mode_ = Mode::PeriodicChannel;
    g.nx_ = nx;
    g.ny_ = ny;
    g.nz_ = nz;
    g.period_ = period;
    g.hx_ = period / nx;
    g.hy_ = period / ny;
    g.hz_ = 1.0 / nz;
    return g;
}

Grid3 Grid3::disk(int nx, int ny, int nz) {
    require(nx > 0 && ny > 0 && nz > 0, "Grid3: counts must be positive");
    Grid3 g;
    g.mode_ = Mode::DiskCylinder;
    g.nx_ = nx;
    g.ny_ = ny;
    g.nz_ = nz;
    g.period_ = 2.0;
    g.hx_ = 2.0 / nx;
    g.hy_ = 2.0 / ny;
    g.hz_ = 1.0 / nz;
    auto cols = std::make_shared<std::vector<std::pair<int, int>>>();
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            double x = -1.0 + (i + 0.5) * g.hx_;
            double y = -1.0 + (j + 0.5) * g.hy_;
            if (x * x + y * y <= 1.0) cols->emplace_back(i, j);
        }
    }
    g.disk_cols_ = std::move(cols);
    return g;
}

std::size_t Grid3::ncols() const {
    if (mode_ == Mode::DiskCylinder) return disk_cols_->size();
    return static_cast<std::size_t>(nx_) * ny_;
}

std::pair<int, int> Grid3::column_ij(std::size_t c) const {
    if (mode_ == Mode::DiskCylinder) return (*disk_cols_)[c];
    return {static_cast<int>(c / ny_), static_cast<int>(c % ny_)};
}

std::pair<double, double> Grid3::column_xy(std::size_t c) const {
    auto [i, j] = column_ij(c);
    if (mode_ == Mode::DiskCylinder) return {-1.0 + (i + 0.5) * hx_, -1.0 + (j + 0.5) * hy_};
    return {i * hx_, j * hy_};
}

bool SField::all_finite() const {
    for (double v : v_)
        if (!std::isfinite(v)) return false;
    return true;
}

double SField::max_abs() const {
    double m = 0.0;
    for (double v : v_) m = std::max(m, std::abs(v));
    return m;
}

HField::HField(SField u1, SField u2) : grid_(u1.grid()), c_{std::move(u1), std::move(u2)} {
    require_same_grid(c_[0].grid(), c_[1].grid(), "HField");
}

double HField::max_norm() const {
    double m = 0.0;
    for (std::size_t n = 0; n < c_[0].size(); ++n) m = std::max(m, std::hypot(c_[0][n], c_[1][n]));
    return m;
}

void require_same_grid(const Grid3& a, const Grid3& b, const char* what) {
    if (a != b) throw PreconditionError(std::string(what) + ": grid mismatch");
}

namespace {
template <class Op>
SField combine(const SField& a, const SField& b, Op op) {
    require_same_grid(a.grid(), b.grid(), "field arithmetic");
    SField r(a.grid());
    const std::size_t n = a.size();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) r[i] = op(a[i], b[i]);
    return r;
}
} // namespace

SField operator+(const SField& a, const SField& b) { return combine(a, b, [](double x, double y) { return x + y; }); }
SField operator-(const SField& a, const SField& b) { return combine(a, b, [](double x, double y) { return x - y; }); }
SField operator*(const SField& a, const SField& b) { return combine(a, b, [](double x, double y) { return x * y; }); }

SField operator*(double s, const SField& a) {
    SField r(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

HField operator*(double s, const HField& a) { return HField(s * a[0], s * a[1]); }

} // namespace pelab
