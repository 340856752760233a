#include "wave3/linear.hpp"

#include <algorithm>
#include <sstream>

#include "wave3/errors.hpp"

namespace wave3 {

Rational LinearConstraint::evaluate(const std::map<uint32_t, Rational>& point) const {
  Rational v = constant;
  for (const auto& [id, c] : coeffs) {
    auto it = point.find(id);
    if (it != point.end()) v += c * it->second;
  }
  return v;
}

bool LinearConstraint::annihilates_direction(const std::map<uint32_t, Rational>& dir) const {
  Rational v(0);
  for (const auto& [id, c] : coeffs) {
    auto it = dir.find(id);
    if (it != dir.end()) v += c * it->second;
  }
  return v == 0;
}

std::string LinearConstraint::str() const {
  // pivot form: first coefficient is 1 after reduction
  std::ostringstream os;
  bool first = true;
  for (const auto& [id, c] : coeffs) {
    if (first) {
      os << (c == 1 ? "" : to_string(c) + "*") << ParamTable::instance().name(id);
    } else {
      os << (c < 0 ? " - " : " + ");
      Rational m = boost::multiprecision::abs(c);
      os << (m == 1 ? "" : to_string(m) + "*") << ParamTable::instance().name(id);
    }
    first = false;
  }
  if (constant != 0 || first) {
    if (!first) os << (constant < 0 ? " - " : " + ") << to_string(boost::multiprecision::abs(constant));
    else os << to_string(constant);
  }
  os << " = 0";
  return os.str();
}

bool AffineSpace::contains_point(const std::map<uint32_t, Rational>& point) const {
  for (const auto& r : relations)
    if (r.evaluate(point) != 0) return false;
  return true;
}

bool AffineSpace::contains(const AffineSpace& other) const {
  if (!contains_point(other.particular)) return false;
  for (const auto& dir : other.basis)
    for (const auto& r : relations)
      if (!r.annihilates_direction(dir)) return false;
  return true;
}

bool AffineSpace::same_space(const AffineSpace& other) const {
  return dimension() == other.dimension() && contains(other) && other.contains(*this);
}

std::map<uint32_t, ParamPoly> AffineSpace::solved_images() const {
  std::map<uint32_t, ParamPoly> images;
  for (size_t i = 0; i < relations.size(); ++i) {
    // pivot + sum c_j free_j + constant = 0  ->  pivot = -sum - constant
    const auto& r = relations[i];
    ParamPoly rhs(-r.constant);
    for (const auto& [id, c] : r.coeffs) {
      if (id == pivots[i]) continue;
      rhs = rhs - ParamPoly::symbol(ParamSymbol{id}).scaled(c);
    }
    images.emplace(pivots[i], rhs);
  }
  return images;
}

std::vector<std::string> AffineSpace::relation_strings() const {
  std::vector<std::string> out;
  auto images = solved_images();
  for (uint32_t pivot : pivots)
    out.push_back(ParamTable::instance().name(pivot) + " = " + images.at(pivot).str());
  return out;
}

AffineSpace solve_linear_constraints(const std::vector<ParamPoly>& constraints,
                                     const std::vector<uint32_t>& column_order) {
  // column index by requested order; unseen parameters are appended
  std::vector<uint32_t> cols = column_order;
  auto col_of = [&](uint32_t id) {
    for (size_t i = 0; i < cols.size(); ++i)
      if (cols[i] == id) return i;
    cols.push_back(id);
    return cols.size() - 1;
  };

  struct Row {
    std::vector<Rational> a;
    Rational rhs;  // row reads: sum a_i x_i = rhs
  };
  std::vector<Row> rows;
  for (const auto& p : constraints) {
    auto lin = p.as_linear();
    if (!lin) fail(Errc::nonlinear_constraint, "degree >= 2 constraint: " + p.str());
    Row row;
    row.a.resize(cols.size());
    for (const auto& [id, c] : lin->coeffs) {
      size_t j = col_of(id);
      if (j >= row.a.size()) row.a.resize(cols.size());
      row.a[j] = c;
    }
    row.rhs = -lin->constant;
    rows.push_back(std::move(row));
  }
  size_t ncols = cols.size();
  for (auto& r : rows) r.a.resize(ncols);

  // forward elimination with partial ordering by column priority
  std::vector<size_t> pivot_col;
  size_t rank = 0;
  for (size_t j = 0; j < ncols; ++j) {
    size_t sel = rows.size();
    for (size_t i = rank; i < rows.size(); ++i)
      if (rows[i].a[j] != 0) { sel = i; break; }
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    Rational inv = Rational(1) / rows[rank].a[j];
    for (size_t k = j; k < ncols; ++k) rows[rank].a[k] *= inv;
    rows[rank].rhs *= inv;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i].a[j] == 0) continue;
      Rational m = rows[i].a[j];
      for (size_t k = j; k < ncols; ++k) rows[i].a[k] -= m * rows[rank].a[k];
      rows[i].rhs -= m * rows[rank].rhs;
    }
    pivot_col.push_back(j);
    ++rank;
  }
  for (size_t i = rank; i < rows.size(); ++i)
    if (rows[i].rhs != 0) fail(Errc::inconsistent, "contradictory constraints");

  AffineSpace space;
  space.parameters = cols;
  std::vector<bool> is_pivot(ncols, false);
  for (size_t j : pivot_col) is_pivot[j] = true;
  for (size_t j = 0; j < ncols; ++j)
    if (!is_pivot[j]) space.free_params.push_back(cols[j]);

  // particular point: free parameters at zero
  for (size_t i = 0; i < rank; ++i) space.particular[cols[pivot_col[i]]] = rows[i].rhs;
  for (uint32_t id : space.free_params) space.particular[id] = Rational(0);
  // basis: one direction per free parameter
  for (size_t j = 0; j < ncols; ++j) {
    if (is_pivot[j]) continue;
    std::map<uint32_t, Rational> dir;
    dir[cols[j]] = Rational(1);
    for (size_t i = 0; i < rank; ++i) {
      if (rows[i].a[j] != 0) dir[cols[pivot_col[i]]] = -rows[i].a[j];
    }
    for (size_t k = 0; k < ncols; ++k)
      if (!dir.count(cols[k])) dir[cols[k]] = Rational(0);
    space.basis.push_back(std::move(dir));
  }
  // relations: pivot + sum coef*free - rhs = 0
  for (size_t i = 0; i < rank; ++i) {
    LinearConstraint rel;
    rel.coeffs[cols[pivot_col[i]]] = Rational(1);
    for (size_t j = 0; j < ncols; ++j) {
      if (j == pivot_col[i] || rows[i].a[j] == 0) continue;
      rel.coeffs[cols[j]] = rows[i].a[j];
    }
    rel.constant = -rows[i].rhs;
    space.relations.push_back(std::move(rel));
    space.pivots.push_back(cols[pivot_col[i]]);
  }
  return space;
}

}  // namespace wave3
