#include "lilab/combination.hpp"

#include <sstream>

namespace lilab {

AtomCombination AtomCombination::atom(const Index& site, double coeff) {
  AtomCombination c(site.size());
  c.set_coeff(site, coeff);
  return c;
}

AtomCombination AtomCombination::constant_term(std::size_t dim, double value) {
  AtomCombination c(dim);
  c.constant_ = value;
  return c;
}

double AtomCombination::coeff(const Index& site) const {
  auto it = coeffs_.find(site);
  return it == coeffs_.end() ? 0.0 : it->second;
}

void AtomCombination::set_coeff(const Index& site, double value) {
  if (site.size() != dim_)
    throw std::invalid_argument("AtomCombination: site dimension mismatch");
  if (value == 0.0)
    coeffs_.erase(site);
  else
    coeffs_[site] = value;
}

AtomCombination& AtomCombination::operator+=(const AtomCombination& o) {
  if (dim_ != o.dim_)
    throw std::invalid_argument("AtomCombination: dimension mismatch");
  for (const auto& [site, v] : o.coeffs_) set_coeff(site, coeff(site) + v);
  constant_ += o.constant_;
  return *this;
}

AtomCombination& AtomCombination::operator-=(const AtomCombination& o) {
  if (dim_ != o.dim_)
    throw std::invalid_argument("AtomCombination: dimension mismatch");
  for (const auto& [site, v] : o.coeffs_) set_coeff(site, coeff(site) - v);
  constant_ -= o.constant_;
  return *this;
}

AtomCombination& AtomCombination::operator*=(double s) {
  if (s == 0.0) {
    coeffs_.clear();
    constant_ = 0.0;
    return *this;
  }
  for (auto& [site, v] : coeffs_) v *= s;
  constant_ *= s;
  return *this;
}

std::string AtomCombination::to_string() const {
  std::ostringstream os;
  bool first = true;
  if (constant_ != 0.0) {
    os << constant_;
    first = false;
  }
  for (const auto& [site, v] : coeffs_) {
    if (!first) os << " + ";
    os << v << "*x" << index_to_string(site);
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

AtomCombination shift(const AtomCombination& c, const Index& j) {
  if (j.size() != c.dim_)
    throw std::invalid_argument("shift: dimension mismatch");
  AtomCombination out(c.dim_);
  out.constant_ = c.constant_;
  for (const auto& [site, v] : c.coeffs_) out.coeffs_[index_add(site, j)] = v;
  return out;
}

AtomCombination conditional_projection(const AtomCombination& c,
                                       const Index& i) {
  if (i.size() != c.dim_)
    throw std::invalid_argument("conditional_projection: dimension mismatch");
  AtomCombination out(c.dim_);
  out.constant_ = c.constant_;
  for (const auto& [site, v] : c.coeffs_)
    if (index_leq(site, i)) out.coeffs_[site] = v;
  return out;
}

AtomCombination conditional_projection_axis(const AtomCombination& c,
                                            std::size_t axis, long long bound) {
  if (axis >= c.dim_)
    throw std::invalid_argument("conditional_projection_axis: bad axis");
  AtomCombination out(c.dim_);
  out.constant_ = c.constant_;
  for (const auto& [site, v] : c.coeffs_)
    if (site[axis] <= bound) out.coeffs_[site] = v;
  return out;
}

AtomCombination hannan_projector(const AtomCombination& c, const Index& j) {
  if (j.size() != c.dim_)
    throw std::invalid_argument("hannan_projector: dimension mismatch");
  AtomCombination out(c.dim_);
  double v = c.coeff(j);
  if (v != 0.0) out.coeffs_[j] = v;
  return out;
}

}  // namespace lilab
