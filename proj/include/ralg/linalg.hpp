#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ralg/field.hpp"
#include "ralg/value.hpp"

namespace ralg {

/// Row-reduces the matrix whose columns are the given vectors; returns the
/// pivot column of each nonzero row.
std::vector<std::size_t> pivot_columns(const Field& f, const std::vector<Vector>& columns);

std::size_t rank(const Field& f, const std::vector<Vector>& columns);

/// Scalars r, not all zero, with sum r_i.columns_i = 0; nullopt when the
/// columns are linearly independent.
std::optional<std::vector<Scalar>> null_vector(const Field& f, const std::vector<Vector>& columns);

Vector linear_combination(const Field& f, const std::vector<Scalar>& coeffs, const std::vector<Vector>& columns);

}  // namespace ralg
