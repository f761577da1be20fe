#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <utility>
#include <vector>

namespace pelab {

enum class Mode { PeriodicChannel, DiskCylinder };

/// Sample layout on S x [0,1].
///
/// Storage is column-major in the horizontal plane: a column is one (x,y) sample, and the
/// nz+1 vertical nodes z_k = k*hz of a column are contiguous. For the periodic channel the
/// column index is i*ny + j with x_i = i*hx; for the disk cylinder only cell centres of the
/// nx x ny lattice on [-1,1]^2 that fall inside the unit disk are kept.
class Grid3 {
public:
    Grid3() = default;

    static Grid3 channel(int nx, int ny, int nz, double period = 2.0 * std::numbers::pi);
    static Grid3 disk(int nx, int ny, int nz);

    Mode mode() const { return mode_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int nz() const { return nz_; }
    int nzp() const { return nz_ + 1; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    double hz() const { return hz_; }
    double period() const { return period_; }
    double max_spacing() const { return std::max({hx_, hy_, hz_}); }

    std::size_t ncols() const;
    std::size_t size() const { return ncols() * static_cast<std::size_t>(nzp()); }

    /// Horizontal coordinates of column c.
    std::pair<double, double> column_xy(std::size_t c) const;
    /// Lattice indices (i,j) of column c.
    std::pair<int, int> column_ij(std::size_t c) const;
    double z(int k) const { return k * hz_; }

    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * ny_ + j) * static_cast<std::size_t>(nz_ + 1) + k;
    }

    bool operator==(const Grid3& o) const {
        return mode_ == o.mode_ && nx_ == o.nx_ && ny_ == o.ny_ && nz_ == o.nz_ && period_ == o.period_;
    }
    bool operator!=(const Grid3& o) const { return !(*this == o); }

private:
    Mode mode_ = Mode::PeriodicChannel;
    int nx_ = 0, ny_ = 0, nz_ = 0;
    double hx_ = 0, hy_ = 0, hz_ = 0;
    double period_ = 0;
    std::shared_ptr<const std::vector<std::pair<int, int>>> disk_cols_;
};

class SField {
public:
    SField() = default;
    explicit SField(const Grid3& g, double fill = 0.0) : grid_(g), v_(g.size(), fill) {}

    const Grid3& grid() const { return grid_; }
    std::size_t size() const { return v_.size(); }
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    double& operator[](std::size_t n) { return v_[n]; }
    double operator[](std::size_t n) const { return v_[n]; }
    double& operator()(int i, int j, int k) { return v_[grid_.index(i, j, k)]; }
    double operator()(int i, int j, int k) const { return v_[grid_.index(i, j, k)]; }

    bool all_finite() const;
    double max_abs() const;

private:
    Grid3 grid_;
    std::vector<double> v_;
};

/// Horizontal velocity: two components stored as separate contiguous arrays.
class HField {
public:
    HField() = default;
    explicit HField(const Grid3& g) : grid_(g), c_{SField(g), SField(g)} {}
    HField(SField u1, SField u2);

    const Grid3& grid() const { return grid_; }
    SField& operator[](int comp) { return c_[comp]; }
    const SField& operator[](int comp) const { return c_[comp]; }

    bool all_finite() const { return c_[0].all_finite() && c_[1].all_finite(); }
    /// Max over nodes of the Euclidean norm of the 2-vector.
    double max_norm() const;

private:
    Grid3 grid_;
    std::array<SField, 2> c_;
};

SField operator+(const SField& a, const SField& b);
SField operator-(const SField& a, const SField& b);
SField operator*(const SField& a, const SField& b);
SField operator*(double s, const SField& a);
HField operator*(double s, const HField& a);

void require_same_grid(const Grid3& a, const Grid3& b, const char* what);

} // namespace pelab
