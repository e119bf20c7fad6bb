#include "ralg/linalg.hpp"

#include "ralg/error.hpp"

namespace ralg {

namespace {

using Matrix = std::vector<std::vector<Scalar>>;

Matrix as_rows(const Field& f, const std::vector<Vector>& columns) {
  const std::size_t m = columns.empty() ? 0 : columns.front().size();
  Matrix rows(m, std::vector<Scalar>(columns.size(), f.zero()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != m) throw PreconditionError("vectors differ in dimension");
    for (std::size_t i = 0; i < m; ++i) rows[i][j] = columns[j][i];
  }
  return rows;
}

// Reduced row echelon form in place; returns pivot columns in row order.
std::vector<std::size_t> rref(const Field& f, Matrix& a) {
  std::vector<std::size_t> pivots;
  const std::size_t m = a.size();
  const std::size_t n = m == 0 ? 0 : a.front().size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    std::size_t sel = row;
    while (sel < m && f.is_zero(a[sel][col])) ++sel;
    if (sel == m) continue;
    std::swap(a[sel], a[row]);
    const Scalar inv = f.inverse(a[row][col]);
    for (Scalar& x : a[row]) x = f.mul(x, inv);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row || f.is_zero(a[i][col])) continue;
      const Scalar factor = a[i][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] = f.sub(a[i][j], f.mul(factor, a[row][j]));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::vector<std::size_t> pivot_columns(const Field& f, const std::vector<Vector>& columns) {
  Matrix a = as_rows(f, columns);
  return rref(f, a);
}

std::size_t rank(const Field& f, const std::vector<Vector>& columns) { return pivot_columns(f, columns).size(); }

std::optional<std::vector<Scalar>> null_vector(const Field& f, const std::vector<Vector>& columns) {
  const std::size_t n = columns.size();
  if (n == 0) return std::nullopt;
  Matrix a = as_rows(f, columns);
  const std::vector<std::size_t> pivots = rref(f, a);
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::size_t free_col = n;
  for (std::size_t c = 0; c < n && free_col == n; ++c)
    if (!is_pivot[c]) free_col = c;
  if (free_col == n) return std::nullopt;
  std::vector<Scalar> r(n, f.zero());
  r[free_col] = f.one();
  for (std::size_t i = 0; i < pivots.size(); ++i) r[pivots[i]] = f.neg(a[i][free_col]);
  return r;
}

Vector linear_combination(const Field& f, const std::vector<Scalar>& coeffs, const std::vector<Vector>& columns) {
  if (coeffs.size() != columns.size()) throw PreconditionError("coefficient count differs from vector count");
  if (columns.empty()) return {};
  Vector out(columns.front().size(), f.zero());
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.add(out[i], f.mul(coeffs[j], columns[j][i]));
  return out;
}

}  // namespace ralg
