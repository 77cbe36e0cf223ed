#ifndef TIERROUTE_CENTROID_HPP
#define TIERROUTE_CENTROID_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>

namespace tierroute {

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar euclidean_distance(const Eigen::MatrixBase<DerivedA>& a,
                                             const Eigen::MatrixBase<DerivedB>& b) {
    return (a - b).norm();
}

// Running mean after observing one more point: (n*c + x) / (n + 1).
// Written exactly in that form; n is the number of points already in c.
template <typename DerivedC, typename DerivedX>
void running_mean_update(Eigen::MatrixBase<DerivedC>& centroid,
                         const Eigen::MatrixBase<DerivedX>& x, std::size_t n) {
    using Scalar = typename DerivedC::Scalar;
    const Scalar count = static_cast<Scalar>(n);
    centroid = (count * centroid + x) / (count + Scalar(1));
}

// Column-wise mean of the given columns of a D x N matrix.
template <typename Derived, typename Indices>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>
mean_of_columns(const Eigen::MatrixBase<Derived>& points, const Indices& columns) {
    using Scalar = typename Derived::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sum =
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(points.rows());
    std::size_t n = 0;
    for (auto c : columns) {
        sum += points.col(static_cast<Eigen::Index>(c));
        ++n;
    }
    return sum / static_cast<Scalar>(n);
}

// Population mean and variance (divisor = number of columns) of each row.
// Rows are shifted by their first entry before averaging, so a constant row
// yields exactly its value and exactly zero variance.
template <typename Derived>
void row_mean_variance(const Eigen::MatrixBase<Derived>& samples,
                       Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>& mean,
                       Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>& variance) {
    using Column = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>;
    const Column origin = samples.col(0);
    const auto shifted = (samples.colwise() - origin).eval();
    const Column offset = shifted.rowwise().mean();
    mean = origin + offset;
    variance = (shifted.colwise() - offset).array().square().rowwise().mean().matrix();
}

}  // namespace tierroute

#endif  // TIERROUTE_CENTROID_HPP
