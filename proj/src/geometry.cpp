#include "sepwp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sepwp::geometry {

namespace {

void require_dim(std::size_t got, std::size_t want, const char* what)
{
    if (got != want)
        throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(got) + " vs " +
                             std::to_string(want) + ")");
}

double squared_distance(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

} // namespace

// ============================================================================
// Box / PointCloud / LinearOperator
// ============================================================================

Box::Box(std::vector<double> lower, std::vector<double> upper) : lower_(std::move(lower)), upper_(std::move(upper))
{
    require_dim(upper_.size(), lower_.size(), "Box");
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]))
            throw std::invalid_argument("Box: bounds must be finite");
        if (lower_[i] > upper_[i])
            throw std::invalid_argument("Box: lower bound exceeds upper bound on axis " + std::to_string(i));
    }
}

bool Box::contains(std::span<const double> x) const
{
    require_dim(x.size(), dim(), "Box::contains");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < lower_[i] || x[i] > upper_[i])
            return false;
    return true;
}

PointCloud::PointCloud(std::size_t dim, std::vector<double> flat) : dim_(dim), data_(std::move(flat))
{
    if (dim_ == 0) {
        if (!data_.empty())
            throw DimensionError("PointCloud: zero dimension with nonempty data");
    } else if (data_.size() % dim_ != 0) {
        throw DimensionError("PointCloud: flat data length is not a multiple of the dimension");
    }
}

void PointCloud::push_back(std::span<const double> p)
{
    require_dim(p.size(), dim_, "PointCloud::push_back");
    if (dim_ == 0)
        ++count_;
    data_.insert(data_.end(), p.begin(), p.end());
}

void PointCloud::append(const PointCloud& other)
{
    require_dim(other.dim_, dim_, "PointCloud::append");
    data_.insert(data_.end(), other.data_.begin(), other.data_.end());
    count_ += other.count_;
}

LinearOperator::LinearOperator(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major))
{
    require_dim(data_.size(), rows_ * cols_, "LinearOperator");
    for (double v : data_)
        if (!std::isfinite(v))
            throw std::invalid_argument("LinearOperator: entries must be finite");
}

LinearOperator LinearOperator::identity(std::size_t n)
{
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        d[i * n + i] = 1.0;
    return LinearOperator(n, n, std::move(d));
}

// ============================================================================
// Distances
// ============================================================================

double norm(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

double distance(std::span<const double> a, std::span<const double> b)
{
    require_dim(a.size(), b.size(), "distance");
    return std::sqrt(squared_distance(a, b));
}

double distance_to_box(std::span<const double> x, const Box& box)
{
    require_dim(x.size(), box.dim(), "distance_to_box");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = 0.0;
        if (x[i] < box.lower()[i])
            d = box.lower()[i] - x[i];
        else if (x[i] > box.upper()[i])
            d = x[i] - box.upper()[i];
        s += d * d;
    }
    return std::sqrt(s);
}

Point project_to_box(std::span<const double> x, const Box& box)
{
    require_dim(x.size(), box.dim(), "project_to_box");
    Point out(x.begin(), x.end());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::clamp(out[i], box.lower()[i], box.upper()[i]);
    return out;
}

double diameter(const PointCloud& a)
{
    double best = 0.0;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            best = std::max(best, squared_distance(a[i], a[j]));
    return std::sqrt(best);
}

double distance_to_cloud(std::span<const double> p, const PointCloud& b)
{
    if (b.empty())
        throw std::invalid_argument("distance_to_cloud: target cloud is empty");
    require_dim(p.size(), b.dim(), "distance_to_cloud");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j)
        best = std::min(best, squared_distance(p, b[j]));
    return std::sqrt(best);
}

double directed_distance(const PointCloud& a, const PointCloud& b)
{
    if (b.empty())
        throw std::invalid_argument("directed_distance: second cloud is empty");
    require_dim(a.dim(), b.dim(), "directed_distance");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size() && best > worst; ++j)
            best = std::min(best, squared_distance(a[i], b[j]));
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

double hausdorff(const PointCloud& a, const PointCloud& b)
{
    if (a.empty() || b.empty())
        throw std::invalid_argument("hausdorff: both clouds must be nonempty");
    return std::max(directed_distance(a, b), directed_distance(b, a));
}

// ============================================================================
// Clustered noncompactness estimate
// ============================================================================

namespace {

double max_part_diameter(const PointCloud& a, const std::vector<std::size_t>& label, std::size_t parts)
{
    std::vector<std::vector<std::size_t>> members(parts);
    for (std::size_t i = 0; i < label.size(); ++i)
        members[label[i]].push_back(i);
    double best = 0.0;
    for (const auto& m : members)
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = i + 1; j < m.size(); ++j)
                best = std::max(best, squared_distance(a[m[i]], a[m[j]]));
    return std::sqrt(best);
}

std::vector<std::size_t> assign_nearest(const PointCloud& a, const PointCloud& centers)
{
    std::vector<std::size_t> label(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < centers.size(); ++c) {
            const double d = squared_distance(a[i], centers[c]);
            if (d < best) {
                best = d;
                label[i] = c;
            }
        }
    }
    return label;
}

// Midpoints of the per-part bounding boxes; empty parts keep their old center.
PointCloud bounding_centers(const PointCloud& a, const std::vector<std::size_t>& label, const PointCloud& old)
{
    const std::size_t k = old.size();
    const std::size_t dim = a.dim();
    std::vector<double> lo(k * dim, std::numeric_limits<double>::infinity());
    std::vector<double> hi(k * dim, -std::numeric_limits<double>::infinity());
    std::vector<bool> seen(k, false);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t c = label[i];
        seen[c] = true;
        for (std::size_t d = 0; d < dim; ++d) {
            lo[c * dim + d] = std::min(lo[c * dim + d], a[i][d]);
            hi[c * dim + d] = std::max(hi[c * dim + d], a[i][d]);
        }
    }
    PointCloud out(dim);
    std::vector<double> mid(dim);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t d = 0; d < dim; ++d)
            mid[d] = seen[c] ? 0.5 * (lo[c * dim + d] + hi[c * dim + d]) : old[c][d];
        out.push_back(mid);
    }
    return out;
}

ClusterEstimate cluster_with_k(const PointCloud& a, std::size_t k)
{
    const std::size_t n = a.size();
    PointCloud centers(a.dim());
    centers.push_back(a[0]);
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i)
        dist[i] = squared_distance(a[i], a[0]);
    while (centers.size() < k) {
        std::size_t far = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (dist[i] > dist[far])
                far = i;
        if (dist[far] == 0.0)
            break; // every point coincides with a center
        centers.push_back(a[far]);
        for (std::size_t i = 0; i < n; ++i)
            dist[i] = std::min(dist[i], squared_distance(a[i], a[far]));
    }

    ClusterEstimate best;
    best.parts = centers.size();
    best.label = assign_nearest(a, centers);
    best.value = max_part_diameter(a, best.label, best.parts);

    auto label = best.label;
    constexpr int max_rounds = 32;
    for (int round = 0; round < max_rounds && best.value > 0.0; ++round) {
        centers = bounding_centers(a, label, centers);
        auto next = assign_nearest(a, centers);
        if (next == label)
            break;
        label = std::move(next);
        const double v = max_part_diameter(a, label, centers.size());
        if (v < best.value) {
            best.value = v;
            best.label = label;
        }
    }
    return best;
}

} // namespace

ClusterEstimate kuratowski_partition(const PointCloud& a, std::size_t k)
{
    if (k == 0)
        throw std::invalid_argument("kuratowski_estimate: k must be positive");
    ClusterEstimate best;
    if (a.empty())
        return best;

    best.parts = 1;
    best.label.assign(a.size(), 0);
    best.value = diameter(a);
    for (std::size_t j = 2; j <= k && best.value > 0.0; ++j) {
        auto cand = cluster_with_k(a, j);
        if (cand.value < best.value)
            best = std::move(cand);
    }
    return best;
}

double kuratowski_estimate(const PointCloud& a, std::size_t k)
{
    return kuratowski_partition(a, k).value;
}

// ============================================================================
// Lattices
// ============================================================================

std::vector<double> grid_axis(double lower, double upper, double h)
{
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("grid step must be positive");
    if (lower == upper)
        return {lower};
    // The 1e-9 guard keeps an exact multiple from gaining a near-duplicate node.
    const auto steps = static_cast<std::size_t>(std::ceil((upper - lower) / h - 1e-9));
    std::vector<double> out;
    out.reserve(steps + 1);
    for (std::size_t k = 0; k < steps; ++k)
        out.push_back(lower + static_cast<double>(k) * h);
    out.push_back(upper);
    return out;
}

PointCloud cartesian(const std::vector<std::vector<double>>& axes)
{
    const std::size_t dim = axes.size();
    PointCloud out(dim);
    if (dim == 0)
        return out;
    std::size_t total = 1;
    for (const auto& ax : axes) {
        if (ax.empty())
            return out;
        total *= ax.size();
    }
    out.reserve(total);
    std::vector<std::size_t> idx(dim, 0);
    std::vector<double> p(dim);
    for (std::size_t n = 0; n < total; ++n) {
        for (std::size_t d = 0; d < dim; ++d)
            p[d] = axes[d][idx[d]];
        out.push_back(p);
        for (std::size_t d = dim; d-- > 0;) {
            if (++idx[d] < axes[d].size())
                break;
            idx[d] = 0;
        }
    }
    return out;
}

PointCloud grid_sample(const Box& box, double h)
{
    std::vector<std::vector<double>> axes;
    axes.reserve(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i)
        axes.push_back(grid_axis(box.lower()[i], box.upper()[i], h));
    return cartesian(axes);
}

Box inflate(const Box& box, double eps)
{
    if (!(eps >= 0.0))
        throw std::invalid_argument("inflate: eps must be nonnegative");
    auto lo = box.lower();
    auto hi = box.upper();
    for (auto& v : lo)
        v -= eps;
    for (auto& v : hi)
        v += eps;
    return Box(std::move(lo), std::move(hi));
}

Point apply_operator(const LinearOperator& a, std::span<const double> x)
{
    require_dim(x.size(), a.cols(), "apply_operator");
    Point out(a.rows(), 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < a.cols(); ++c)
            s += a.at(r, c) * x[c];
        out[r] = s;
    }
    return out;
}

} // namespace sepwp::geometry
