#pragma once

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace qplane {

using SparseMatrix = Eigen::SparseMatrix<double>;
using ComplexSparseMatrix = Eigen::SparseMatrix<std::complex<double>>;
using Mask = std::vector<bool>;

/// Largest |entry| over the columns selected by `columns` (all rows).
/// Columns are visited in index order so the result is reproducible.
template <typename Scalar>
double masked_max_abs(const Eigen::SparseMatrix<Scalar>& matrix, const Mask& columns) {
    double out = 0.0;
    for (Eigen::Index c = 0; c < matrix.outerSize(); ++c) {
        if (!columns[static_cast<std::size_t>(c)]) continue;
        for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(matrix, c); it; ++it)
            out = std::max(out, static_cast<double>(std::abs(it.value())));
    }
    return out;
}

template <typename Scalar>
double max_abs(const Eigen::SparseMatrix<Scalar>& matrix) {
    return masked_max_abs(matrix, Mask(static_cast<std::size_t>(matrix.cols()), true));
}

/// Column-wise scaled difference: max over masked columns c of
/// max_r |a(r,c) - b(r,c)| / max(1, max_r |b(r,c)|).
template <typename Scalar>
double scaled_column_difference(const Eigen::SparseMatrix<Scalar>& a, const Eigen::SparseMatrix<Scalar>& b,
                                const Mask& columns) {
    const Eigen::SparseMatrix<Scalar> diff = a - b;
    double out = 0.0;
    for (Eigen::Index c = 0; c < diff.outerSize(); ++c) {
        if (!columns[static_cast<std::size_t>(c)]) continue;
        double scale = 1.0;
        for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(b, c); it; ++it)
            scale = std::max(scale, static_cast<double>(std::abs(it.value())));
        for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(diff, c); it; ++it)
            out = std::max(out, static_cast<double>(std::abs(it.value())) / scale);
    }
    return out;
}

inline std::size_t count(const Mask& mask) {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

inline Mask mask_and(const Mask& a, const Mask& b) {
    Mask out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
    return out;
}

}  // namespace qplane
