#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace patret {

// Dense storage is row-major throughout: one row per entity/patent, so a
// single embedding is a contiguous slice and binary I/O is a straight copy.
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// All in-memory numerics run in double; the persistence format quantizes
// to float32 (see vector_table.hpp).
using Real   = double;
using Index  = Eigen::Index;
using Matrix = MatrixX<Real>;
using Vector = VectorX<Real>;

using RowRef      = Eigen::Ref<Eigen::Matrix<Real, 1, Eigen::Dynamic>>;
using ConstRowRef = Eigen::Ref<const Eigen::Matrix<Real, 1, Eigen::Dynamic>>;

}  // namespace patret
