#pragma once

// Boxes, finite point clouds and the set metrics used to study approximate
// solution sets: point-to-set distance, diameter, directed and Hausdorff
// distances, and a clustered estimate of the Kuratowski measure.
//
// All norms are Euclidean.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace sepwp::geometry {

using Point = std::vector<double>;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Axis-aligned box; lower[i] <= upper[i].
class Box {
public:
    Box(std::vector<double> lower, std::vector<double> upper);

    std::size_t dim() const noexcept { return lower_.size(); }
    const std::vector<double>& lower() const noexcept { return lower_; }
    const std::vector<double>& upper() const noexcept { return upper_; }
    bool contains(std::span<const double> x) const;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

/// Ordered, dimension-homogeneous list of points stored row-major.
class PointCloud {
public:
    explicit PointCloud(std::size_t dim = 0) : dim_(dim) {}
    PointCloud(std::size_t dim, std::vector<double> flat);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return dim_ == 0 ? count_ : data_.size() / dim_; }
    bool empty() const noexcept { return size() == 0; }

    std::span<const double> operator[](std::size_t i) const
    {
        return {data_.data() + i * dim_, dim_};
    }

    void push_back(std::span<const double> p);
    void reserve(std::size_t n) { data_.reserve(n * dim_); }
    void append(const PointCloud& other);

    const std::vector<double>& flat() const noexcept { return data_; }

    friend bool operator==(const PointCloud&, const PointCloud&) = default;

private:
    std::size_t dim_;
    std::size_t count_ = 0; // only meaningful for dim 0
    std::vector<double> data_;
};

/// Dense matrix mapping R^cols to R^rows.
class LinearOperator {
public:
    LinearOperator(std::size_t rows, std::size_t cols, std::vector<double> row_major);
    static LinearOperator identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

double norm(std::span<const double> v);
double distance(std::span<const double> a, std::span<const double> b);

double distance_to_box(std::span<const double> x, const Box& box);
Point project_to_box(std::span<const double> x, const Box& box);

/// Max pairwise distance; 0 for empty or singleton clouds.
double diameter(const PointCloud& a);

/// d(a, B) = min_b |a - b|. Throws if B is empty.
double distance_to_cloud(std::span<const double> a, const PointCloud& b);

/// D(A, B) = max_a d(a, B); 0 for empty A. Throws if B is empty.
double directed_distance(const PointCloud& a, const PointCloud& b);

/// H(A, B) = max(D(A, B), D(B, A)). Throws if either cloud is empty.
double hausdorff(const PointCloud& a, const PointCloud& b);

/// Result of the clustered noncompactness estimate.
struct ClusterEstimate {
    double value = 0.0;            // max part diameter of the best partition found
    std::vector<std::size_t> label; // part index per point
    std::size_t parts = 0;
};

/// Upper bound on min over partitions of A into at most k parts of the
/// largest part diameter. Farthest-point seeding followed by nearest-center
/// refinement; the best (k-1)-part partition is kept as a candidate so the
/// result is nonincreasing in k. k = 1 gives diameter(A). Requires k >= 1.
ClusterEstimate kuratowski_partition(const PointCloud& a, std::size_t k);
double kuratowski_estimate(const PointCloud& a, std::size_t k);

/// Number of lattice nodes per axis for step h: ceil((u - l) / h) + 1, with
/// both endpoints present. A degenerate axis (l == u) has one node.
std::vector<double> grid_axis(double lower, double upper, double h);

/// Axis-aligned lattice over the box, first axis varying slowest.
PointCloud grid_sample(const Box& box, double h);

/// Cartesian product of per-axis node lists in lexicographic order.
PointCloud cartesian(const std::vector<std::vector<double>>& axes);

/// Box widened by eps on every side. Throws for eps < 0.
Box inflate(const Box& box, double eps);

Point apply_operator(const LinearOperator& a, std::span<const double> x);

} // namespace sepwp::geometry
