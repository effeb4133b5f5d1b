#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/CXX11/Tensor>

#include <utility>

namespace tangentbody {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Tensor3 = Eigen::Tensor<double, 3>;
using Tensor4 = Eigen::Tensor<double, 4>;

/// Chart coordinates x^i of a point. Length equals the manifold dimension.
using ChartPoint = Eigen::VectorXd;

/// Number of independent components of an antisymmetric n x n matrix.
inline int spin_components(int n) { return n * (n - 1) / 2; }

/// k-th strict-upper-triangle pair in lexicographic order: (0,1), (0,2), ..., (1,2), ...
inline std::pair<int, int> spin_index_pair(int k, int n) {
    for (int a = 0; a < n; ++a) {
        const int row = n - 1 - a;
        if (k < row) return {a, a + 1 + k};
        k -= row;
    }
    return {-1, -1};
}

/// Inverse of spin_index_pair; requires a < b.
inline int spin_pair_index(int a, int b, int n) {
    int k = 0;
    for (int r = 0; r < a; ++r) k += n - 1 - r;
    return k + (b - a - 1);
}

/// Materialize an antisymmetric matrix from its packed strict upper triangle.
inline Matrix unpack_antisymmetric(const Vector& upper, int n) {
    Matrix m = Matrix::Zero(n, n);
    for (int k = 0; k < upper.size(); ++k) {
        auto [a, b] = spin_index_pair(k, n);
        m(a, b) = upper(k);
        m(b, a) = -upper(k);
    }
    return m;
}

/// Pack the strict upper triangle of a (nominally antisymmetric) matrix.
inline Vector pack_antisymmetric_upper(const Matrix& m) {
    const int n = static_cast<int>(m.rows());
    Vector upper(spin_components(n));
    for (int k = 0; k < upper.size(); ++k) {
        auto [a, b] = spin_index_pair(k, n);
        upper(k) = m(a, b);
    }
    return upper;
}

inline Matrix antisymmetric_part(const Matrix& m) { return 0.5 * (m - m.transpose()); }

/// Max-norm of the symmetric part; zero for an exactly antisymmetric matrix.
inline double symmetric_part_norm(const Matrix& m) {
    return (0.5 * (m + m.transpose())).cwiseAbs().maxCoeff();
}

inline double max_abs(const Tensor3& t) {
    const Eigen::Tensor<double, 0> m = t.abs().maximum();
    return m(0);
}

inline double max_abs(const Tensor4& t) {
    const Eigen::Tensor<double, 0> m = t.abs().maximum();
    return m(0);
}

}  // namespace tangentbody
