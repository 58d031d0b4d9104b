#include "lahreg/geom/kabsch.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <stdexcept>

namespace lahreg::geom {

RigidTransform kabsch(const PointCloud& src, const PointCloud& dst,
                      const std::vector<double>& weights) {
    const std::int64_t n = src.size();
    if (n == 0) throw std::invalid_argument("kabsch: empty input");
    if (dst.size() != n) throw std::invalid_argument("kabsch: length mismatch");
    if (!weights.empty() && static_cast<std::int64_t>(weights.size()) != n) {
        throw std::invalid_argument("kabsch: weight count mismatch");
    }

    double wsum = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double w = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(i)];
        if (w < 0.0) throw std::invalid_argument("kabsch: negative weight");
        wsum += w;
    }
    if (wsum <= 0.0) throw std::invalid_argument("kabsch: weights sum to zero");

    Eigen::Vector3d src_mean = Eigen::Vector3d::Zero();
    Eigen::Vector3d dst_mean = Eigen::Vector3d::Zero();
    for (std::int64_t i = 0; i < n; ++i) {
        const double w = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(i)];
        src_mean += w * src[i];
        dst_mean += w * dst[i];
    }
    src_mean /= wsum;
    dst_mean /= wsum;

    RigidTransform out;
    if (n == 1) {
        // A single pair cannot constrain the rotation; fix it to identity.
        out.translation = dst[0] - src[0];
        return out;
    }

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (std::int64_t i = 0; i < n; ++i) {
        const double w = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(i)];
        cov += w * (src[i] - src_mean) * (dst[i] - dst_mean).transpose();
    }

    Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d u = svd.matrixU();
    Eigen::Matrix3d v = svd.matrixV();
    Eigen::Matrix3d r = v * u.transpose();
    if (r.determinant() < 0.0) {
        v.col(2) = -v.col(2);
        r = v * u.transpose();
    }

    out.rotation = r;
    out.translation = dst_mean - r * src_mean;
    return out;
}

}  // namespace lahreg::geom
