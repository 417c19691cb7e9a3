#include "lilab/innovations.hpp"

namespace lilab {

std::string marginal_name(MarginalLaw law) {
  switch (law) {
    case MarginalLaw::rademacher: return "rademacher";
    case MarginalLaw::gaussian: return "gaussian";
    case MarginalLaw::two_point: return "two_point";
    case MarginalLaw::heavy_three_point: return "heavy_three_point";
  }
  throw std::logic_error("marginal_name: unknown law");
}

MarginalLaw marginal_from_name(const std::string& name) {
  if (name == "rademacher") return MarginalLaw::rademacher;
  if (name == "gaussian") return MarginalLaw::gaussian;
  if (name == "two_point") return MarginalLaw::two_point;
  if (name == "heavy_three_point") return MarginalLaw::heavy_three_point;
  throw std::invalid_argument("unknown marginal law: " + name);
}

bool marginal_is_discrete(MarginalLaw law) {
  return law != MarginalLaw::gaussian;
}

DiscreteLaw marginal_discrete_law(MarginalLaw law) {
  DiscreteLaw d;
  switch (law) {
    case MarginalLaw::rademacher:
      d.atoms = {{-1.0, 0.5}, {1.0, 0.5}};
      break;
    case MarginalLaw::two_point:
      d.atoms = {{-3.0, 0.1}, {1.0 / 3.0, 0.9}};
      break;
    case MarginalLaw::heavy_three_point:
      d.atoms = {{-5.0, 0.02}, {0.0, 0.96}, {5.0, 0.02}};
      break;
    case MarginalLaw::gaussian:
      throw std::invalid_argument(
          "marginal_discrete_law: the Gaussian marginal has no finite atom list");
  }
  d.validate();
  return d;
}

double sample_marginal(MarginalLaw law, std::uint64_t h) {
  switch (law) {
    case MarginalLaw::rademacher:
      return (h & 1u) ? 1.0 : -1.0;
    case MarginalLaw::gaussian:
      return gaussian_from_hash(h);
    case MarginalLaw::two_point:
      return to_unit(h) < 0.9 ? 1.0 / 3.0 : -3.0;
    case MarginalLaw::heavy_three_point: {
      const double u = to_unit(h);
      if (u < 0.02) return -5.0;
      if (u < 0.04) return 5.0;
      return 0.0;
    }
  }
  throw std::logic_error("sample_marginal: unknown law");
}

InnovationModel InnovationModel::make_iid(std::size_t d, MarginalLaw law) {
  InnovationModel m;
  m.kind = InnovationKind::iid;
  m.dim = d;
  m.marginal = law;
  m.validate();
  return m;
}

InnovationModel InnovationModel::make_product(std::vector<MarginalLaw> laws) {
  InnovationModel m;
  m.kind = InnovationKind::product;
  m.dim = laws.size();
  m.axis_laws = std::move(laws);
  m.validate();
  return m;
}

void InnovationModel::validate() const {
  if (dim == 0) throw std::invalid_argument("InnovationModel: dimension 0");
  auto check_centered = [](MarginalLaw law) {
    if (!marginal_is_discrete(law)) return;  // Gaussian is centered by design
    const double m = marginal_discrete_law(law).mean();
    if (std::abs(m) > 1e-12)
      throw std::invalid_argument("InnovationModel: marginal mean " +
                                  std::to_string(m) + " is not 0");
  };
  if (kind == InnovationKind::iid) {
    check_centered(marginal);
  } else {
    if (axis_laws.size() != dim)
      throw std::invalid_argument(
          "InnovationModel: product model needs one law per axis");
    for (MarginalLaw law : axis_laws) check_centered(law);
  }
}

namespace {

// Stream tags: iid sites draw from stream 0; product axis q draws from
// stream q+1 on the 1-d lattice of its coordinates.
constexpr std::uint64_t kIidStream = 0;

void check_box(const Index& lo, const Index& hi) {
  if (lo.size() != hi.size() || lo.empty())
    throw std::invalid_argument("sample_realization: bad box");
  for (std::size_t q = 0; q < lo.size(); ++q)
    if (lo[q] > hi[q])
      throw std::invalid_argument("sample_realization: empty box on axis " +
                                  std::to_string(q));
}

}  // namespace

Realization sample_realization(const InnovationModel& model, std::uint64_t seed,
                               const Index& lo, const Index& hi) {
  model.validate();
  check_box(lo, hi);
  if (lo.size() != model.dim)
    throw std::invalid_argument("sample_realization: box dimension mismatch");
  Realization r;
  r.kind = model.kind;
  r.lo = lo;
  r.hi = hi;
  if (model.kind == InnovationKind::iid) {
    long long total = 1;
    for (std::size_t q = 0; q < lo.size(); ++q) total *= hi[q] - lo[q] + 1;
    r.site_values.reserve(static_cast<std::size_t>(total));
    for_each_index(lo, hi, [&](const Index& site) {
      r.site_values.push_back(
          sample_marginal(model.marginal, hash_site(seed, kIidStream, site)));
    });
  } else {
    r.axis_values.resize(model.dim);
    for (std::size_t q = 0; q < model.dim; ++q) {
      r.axis_values[q].reserve(static_cast<std::size_t>(hi[q] - lo[q] + 1));
      for (long long c = lo[q]; c <= hi[q]; ++c)
        r.axis_values[q].push_back(
            sample_marginal(model.axis_laws[q], hash_site(seed, q + 1, {c})));
    }
  }
  return r;
}

double Realization::axis_value(std::size_t axis, long long coord) const {
  if (kind != InnovationKind::product)
    throw std::logic_error("axis_value: not a product realization");
  if (axis >= lo.size()) throw std::out_of_range("axis_value: bad axis");
  if (coord < lo[axis] || coord > hi[axis])
    throw std::out_of_range("axis_value: coordinate " + std::to_string(coord) +
                            " outside [" + std::to_string(lo[axis]) + ", " +
                            std::to_string(hi[axis]) + "] on axis " +
                            std::to_string(axis));
  return axis_values[axis][static_cast<std::size_t>(coord - lo[axis])];
}

double Realization::value_at(const Index& site) const {
  if (site.size() != lo.size())
    throw std::invalid_argument("value_at: dimension mismatch");
  for (std::size_t q = 0; q < site.size(); ++q)
    if (site[q] < lo[q] || site[q] > hi[q])
      throw std::out_of_range("value_at: site " + index_to_string(site) +
                              " outside realization box [" +
                              index_to_string(lo) + ", " + index_to_string(hi) +
                              "]");
  if (kind == InnovationKind::iid) {
    long long pos = 0;
    for (std::size_t q = 0; q < site.size(); ++q)
      pos = pos * (hi[q] - lo[q] + 1) + (site[q] - lo[q]);
    return site_values[static_cast<std::size_t>(pos)];
  }
  double v = 1.0;
  for (std::size_t q = 0; q < site.size(); ++q)
    v *= axis_values[q][static_cast<std::size_t>(site[q] - lo[q])];
  return v;
}

double evaluate(const AtomCombination& c, const Realization& r) {
  double acc = c.constant();
  for (const auto& [site, coeff] : c.atoms()) acc += coeff * r.value_at(site);
  return acc;
}

}  // namespace lilab
